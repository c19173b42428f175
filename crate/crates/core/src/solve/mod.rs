//! Admissibility equation systems and their solutions.
//!
//! A diagonal map between two generalized Razak blocks with parameters k and
//! ell exists exactly when the eigenmap counts at the two marked points solve
//! a small integer system. Two variants appear:
//!
//! * the unital system, where the fiber sizes force `p*(k+1) = m*(ell+1)`
//!   on the nose, and
//! * the corrected system, which inserts a zero block of size r into the size
//!   identity and a slack q into the multiplicity equations at both marked
//!   points.
//!
//! The unital system collapses (every solution has `b0 = 0` and `a0 = m`; the
//! certificate lives in [`crate::blocks`]), which is why the corrected system
//! is the one that matters. [`family`] produces its closed-form solutions and
//! [`verify_family_symbolic`] certifies them as polynomial identities rather
//! than pointwise checks.

mod enumerate;
mod symbolic;

pub use enumerate::{enumerate_corrected, enumerate_unital, EnumerateOptions};
pub use symbolic::{verify_family_symbolic, FamilyCertificate};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::ExactInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("value does not fit the instance field width: {0}")]
    Overflow(String),
    #[error("search would take about {estimated} steps, above the work limit {limit}")]
    WorkLimitExceeded { estimated: String, limit: u64 },
}

/// One failed constraint, with both sides fully evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: String,
    pub left: String,
    pub right: String,
}

impl Violation {
    fn new(constraint: &str, left: impl ToString, right: impl ToString) -> Self {
        Violation {
            constraint: constraint.to_string(),
            left: left.to_string(),
            right: right.to_string(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} != {}", self.constraint, self.left, self.right)
    }
}

/// Outcome of an exact equation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Verdict {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// A solution candidate for the corrected system.
///
/// Field meanings: source block parameter `k`, target block parameter `ell`,
/// target multiplicity `m`, eigenmap count `p`, zero block size `r`, free
/// point count `s`, multiplicity slack `q`, and the eigenmap counts over the
/// two marked points (`a0`, `a1` at the first, `b0`, `b1` at the second).
/// Constructors validate; the fields stay public so that deliberately broken
/// instances can be built when exercising the checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrectedInstance {
    pub k: u64,
    #[serde(rename = "l")]
    pub ell: u64,
    pub m: u64,
    pub p: u64,
    pub r: u64,
    pub s: u64,
    pub q: u64,
    pub a0: u64,
    pub a1: u64,
    pub b0: u64,
    pub b1: u64,
}

/// A solution candidate for the unital system (no zero block, no slack).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitalInstance {
    pub k: u64,
    #[serde(rename = "l")]
    pub ell: u64,
    pub m: u64,
    pub p: u64,
    pub s: u64,
    pub a0: u64,
    pub a1: u64,
    pub b0: u64,
    pub b1: u64,
}

fn big(v: u64) -> ExactInt {
    ExactInt::from(v)
}

impl CorrectedInstance {
    /// Validating constructor: rejects any tuple that fails [`Self::verify`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: u64,
        ell: u64,
        m: u64,
        p: u64,
        r: u64,
        s: u64,
        q: u64,
        a0: u64,
        a1: u64,
        b0: u64,
        b1: u64,
    ) -> Result<Self, Verdict> {
        let inst = CorrectedInstance {
            k,
            ell,
            m,
            p,
            r,
            s,
            q,
            a0,
            a1,
            b0,
            b1,
        };
        let verdict = inst.verify();
        if verdict.ok {
            Ok(inst)
        } else {
            Err(verdict)
        }
    }

    /// Checks every equation of the corrected system exactly.
    pub fn verify(&self) -> Verdict {
        verify_corrected_exact(
            &big(self.k),
            &big(self.ell),
            &big(self.m),
            &big(self.p),
            &big(self.r),
            &big(self.s),
            &big(self.q),
            &big(self.a0),
            &big(self.a1),
            &big(self.b0),
            &big(self.b1),
        )
    }
}

/// Checks the corrected system over exact integers. Shared by the machine
/// word instances and the arbitrary-precision count summaries that towers
/// produce.
#[allow(clippy::too_many_arguments)]
pub(crate) fn verify_corrected_exact(
    k: &ExactInt,
    ell: &ExactInt,
    m: &ExactInt,
    p: &ExactInt,
    r: &ExactInt,
    s: &ExactInt,
    q: &ExactInt,
    a0: &ExactInt,
    a1: &ExactInt,
    b0: &ExactInt,
    b1: &ExactInt,
) -> Verdict {
    let mut violations = Vec::new();
    let one = ExactInt::one();
    if k < &one || ell < &one || m < &one || p < &one {
        violations.push(Violation::new(
            "positivity",
            format!("k={k} l={ell} m={m} p={p}"),
            "k,l,m,p >= 1",
        ));
        return Verdict::from_violations(violations);
    }
    for (name, v) in [("r", r), ("s", s), ("q", q), ("a0", a0), ("a1", a1), ("b0", b0), ("b1", b1)]
    {
        if v.is_negative() {
            violations.push(Violation::new("nonnegative", format!("{name} = {v}"), "0 or more"));
        }
    }
    if !violations.is_empty() {
        return Verdict::from_violations(violations);
    }

    let count_y0 = a0 + a1 + s * ell;
    push_if_neq(&mut violations, "count_y0", &count_y0, p);
    let count_y1 = b0 + b1 + s * (ell + &one);
    push_if_neq(&mut violations, "count_y1", &count_y1, p);

    let size_left = p * (k + &one) + r;
    let size_right = m * (ell + &one);
    push_if_neq(&mut violations, "size", &size_left, &size_right);

    let slack = m - s * (k + &one) - q;
    let mult_y0_left = k * a0 + (k + &one) * a1;
    let mult_y0_right = &slack * ell;
    push_if_neq(&mut violations, "mult_y0", &mult_y0_left, &mult_y0_right);
    let mult_y1_left = k * b0 + (k + &one) * b1;
    let mult_y1_right = &slack * (ell + &one);
    push_if_neq(&mut violations, "mult_y1", &mult_y1_left, &mult_y1_right);

    if slack.is_negative() {
        violations.push(Violation::new("slack_nonnegative", &slack, "0 or more"));
    }
    Verdict::from_violations(violations)
}

impl UnitalInstance {
    /// Validating constructor: rejects any tuple that fails [`Self::verify`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: u64,
        ell: u64,
        m: u64,
        p: u64,
        s: u64,
        a0: u64,
        a1: u64,
        b0: u64,
        b1: u64,
    ) -> Result<Self, Verdict> {
        let inst = UnitalInstance {
            k,
            ell,
            m,
            p,
            s,
            a0,
            a1,
            b0,
            b1,
        };
        let verdict = inst.verify();
        if verdict.ok {
            Ok(inst)
        } else {
            Err(verdict)
        }
    }

    /// Checks every equation of the unital system exactly.
    pub fn verify(&self) -> Verdict {
        let mut violations = Vec::new();
        if self.k == 0 || self.ell == 0 || self.m == 0 || self.p == 0 {
            violations.push(Violation::new(
                "positivity",
                format!("k={} l={} m={} p={}", self.k, self.ell, self.m, self.p),
                "k,l,m,p >= 1",
            ));
            return Verdict::from_violations(violations);
        }
        let (k, ell, m, p, s) = (
            big(self.k),
            big(self.ell),
            big(self.m),
            big(self.p),
            big(self.s),
        );
        let (a0, a1, b0, b1) = (big(self.a0), big(self.a1), big(self.b0), big(self.b1));
        let one = ExactInt::one();

        let count_y0 = &a0 + &a1 + &s * &ell;
        push_if_neq(&mut violations, "count_y0", &count_y0, &p);
        let count_y1 = &b0 + &b1 + &s * (&ell + &one);
        push_if_neq(&mut violations, "count_y1", &count_y1, &p);

        let size_left = &p * (&k + &one);
        let size_right = &m * (&ell + &one);
        push_if_neq(&mut violations, "size", &size_left, &size_right);

        let slack = &m - &s * (&k + &one);
        let mult_y0_left = &k * &a0 + (&k + &one) * &a1;
        let mult_y0_right = &slack * &ell;
        push_if_neq(&mut violations, "mult_y0", &mult_y0_left, &mult_y0_right);
        let mult_y1_left = &k * &b0 + (&k + &one) * &b1;
        let mult_y1_right = &slack * (&ell + &one);
        push_if_neq(&mut violations, "mult_y1", &mult_y1_left, &mult_y1_right);

        if slack.is_negative() {
            violations.push(Violation::new("slack_nonnegative", &slack, "0 or more"));
        }
        Verdict::from_violations(violations)
    }
}

fn push_if_neq(violations: &mut Vec<Violation>, constraint: &str, left: &ExactInt, right: &ExactInt) {
    if left != right {
        violations.push(Violation::new(constraint, left, right));
    }
}

/// The closed-form solution counts for parameters `(s, k, u)`, over exact
/// integers. This is the single implementation of the family formulas; the
/// `u64` wrapper [`family`] and the tower both route through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCounts {
    pub k: ExactInt,
    pub ell: ExactInt,
    pub m: ExactInt,
    pub p: ExactInt,
    pub r: ExactInt,
    pub s: ExactInt,
    pub q: ExactInt,
    pub a0: ExactInt,
    pub a1: ExactInt,
    pub b0: ExactInt,
    pub b1: ExactInt,
}

/// Evaluates the family formulas at `(s, k, u)`, all three at least 1.
pub fn family_counts(s: &ExactInt, k: &ExactInt, u: &ExactInt) -> Result<FamilyCounts, SolveError> {
    let one = ExactInt::one();
    for (name, v) in [("s", s), ("k", k), ("u", u)] {
        if v < &one {
            return Err(SolveError::InvalidParameter(format!(
                "family parameter {name} must be at least 1, got {v}"
            )));
        }
    }
    let kp1 = k + &one;
    let ell = &kp1 + u + u;
    let m = (k * k + k * 3 + &one) * s;
    let a0 = &kp1 * (&kp1 + u) * s;
    let a1 = k * s * u;
    let b0 = &kp1 * s * u;
    let b1 = k * (k + u + 2) * s;
    let r = (k * k + k * 2 + k * u - u) * s;
    let q = k * s;
    let p = (k * k + k * u * 2 + k * 3 + u * 3 + 2) * s;
    Ok(FamilyCounts {
        k: k.clone(),
        ell,
        m,
        p,
        r,
        s: s.clone(),
        q,
        a0,
        a1,
        b0,
        b1,
    })
}

/// The closed-form solution of the corrected system at `(s, k, u)`.
///
/// Returns an error when a parameter is zero or a count does not fit in the
/// `u64` instance fields; towers, which outgrow machine words, use
/// [`family_counts`] directly.
pub fn family(s: u64, k: u64, u: u64) -> Result<CorrectedInstance, SolveError> {
    let counts = family_counts(&big(s), &big(k), &big(u))?;
    let field = |name: &str, v: &ExactInt| -> Result<u64, SolveError> {
        u64::try_from(v).map_err(|_| SolveError::Overflow(format!("{name} = {v}")))
    };
    let inst = CorrectedInstance {
        k,
        ell: field("l", &counts.ell)?,
        m: field("m", &counts.m)?,
        p: field("p", &counts.p)?,
        r: field("r", &counts.r)?,
        s,
        q: field("q", &counts.q)?,
        a0: field("a0", &counts.a0)?,
        a1: field("a1", &counts.a1)?,
        b0: field("b0", &counts.b0)?,
        b1: field("b1", &counts.b1)?,
    };
    debug_assert!(inst.verify().ok);
    Ok(inst)
}

/// Inclusive upper bounds for bounded enumeration.
///
/// `k`, `ell`, `m`, `s` bound the search grid (lower bounds are 1, 1, 1, 0).
/// The remaining fields cap the derived counts; `None` leaves a derived count
/// unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub k: u64,
    #[serde(rename = "l")]
    pub ell: u64,
    pub m: u64,
    pub s: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<u64>,
}

impl SearchBounds {
    pub fn grid(k: u64, ell: u64, m: u64, s: u64) -> Self {
        SearchBounds {
            k,
            ell,
            m,
            s,
            p: None,
            r: None,
            q: None,
            a0: None,
            a1: None,
            b0: None,
            b1: None,
        }
    }

    fn validate(&self) -> Result<(), SolveError> {
        if self.k == 0 || self.ell == 0 || self.m == 0 {
            return Err(SolveError::InvalidParameter(
                "bounds for k, l, m must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}
