//! Serde adapters for arbitrary-precision values.
//!
//! JSON numbers round-trip reliably only within 64 bits, so big integers are
//! rendered as decimal strings and rationals as `num/den` strings. Both forms
//! re-parse losslessly and compare bytewise when the values are equal, which
//! the report emitters rely on.

use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serializer};

use crate::arith::{ExactInt, ExactRational};

/// Renders an exact rational as `num/den` in lowest terms.
pub fn rational_string(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the `num/den` form produced by [`rational_string`].
pub fn parse_rational(s: &str) -> Result<ExactRational, String> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| format!("expected num/den, got `{s}`"))?;
    let num = ExactInt::from_str(num).map_err(|e| e.to_string())?;
    let den = ExactInt::from_str(den).map_err(|e| e.to_string())?;
    if den == ExactInt::from(0) {
        return Err("zero denominator".to_string());
    }
    Ok(ExactRational::new(num, den))
}

/// Rounds an exact rational to six decimals, half away from zero. Used only
/// by text renderers; no float participates.
pub fn six_decimals(r: &ExactRational) -> String {
    let scaled = r * ExactRational::from_integer(ExactInt::from(2_000_000));
    let num = scaled.numer().clone();
    let den = scaled.denom().clone();
    // scaled = r * 2e6 is an exact fraction; (num/den + sign) / 2 rounds
    // r * 1e6 half away from zero once truncated toward zero.
    let sign = if num < ExactInt::from(0) {
        ExactInt::from(-1)
    } else {
        ExactInt::from(1)
    };
    let micros = (num / den + sign) / ExactInt::from(2);
    let negative = micros < ExactInt::from(0);
    let abs = if negative { -micros } else { micros };
    let int_part = &abs / ExactInt::from(1_000_000);
    let frac_part = &abs % ExactInt::from(1_000_000);
    format!(
        "{}{}.{:06}",
        if negative { "-" } else { "" },
        int_part,
        frac_part
    )
}

pub mod big_int_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &ExactInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<ExactInt, D::Error> {
        let s = String::deserialize(de)?;
        ExactInt::from_str(&s).map_err(serde::de::Error::custom)
    }
}

pub mod big_int_string_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<ExactInt>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => ser.serialize_some(&v.to_string()),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<ExactInt>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|s| ExactInt::from_str(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod rational_string_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &ExactRational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&rational_string(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<ExactRational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod rational_string_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<ExactRational>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => ser.serialize_some(&rational_string(v)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<Option<ExactRational>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod rational_string_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[ExactRational], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&rational_string(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<ExactRational>, D::Error> {
        let items = Vec::<String>::deserialize(de)?;
        items
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
