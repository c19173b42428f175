//! Inductive towers of blocks connected by family maps.
//!
//! A tower is determined by the first block parameter k1 and a schedule of
//! family parameters (s_i, u_i) per stage: stage i uses the family solution
//! at (s_i, k_i, u_i) as its connecting map, and the target parameter
//! becomes the next stage's k. Everything is tracked in exact integers
//! because the stage counts grow doubly fast; machine words overflow within
//! a dozen stages.
//!
//! Per stage the tower records the count summary of the connecting map, the
//! cumulative multiplicity and cube dimension of the stage algebra, and the
//! projection fraction f_i = d_i / p_i, where d_i counts the coordinate
//! projections admitted by the chosen policy. The perforation criterion
//! (module [`perforation`](self)) asks whether the infinite product of the
//! f_i stays positive; [`telescope`] regroups a tower by composing
//! consecutive maps, which preserves the products under the flip-inclusive
//! policy exactly.

mod perforation;
mod telescope;

pub use perforation::{
    perforation_report, search_schedule, PerforationReport, PerforationVerdict, PolicyEvaluation,
    ReportOptions, SearchOutcome,
};
pub use telescope::telescope;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExactInt, ExactRational};
use crate::blocks::{BlocksError, MapCounts};
use crate::solve::{family_counts, SolveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("invalid tower parameter: {0}")]
    InvalidParameter(String),
    #[error("explicit schedule has {have} stages, {need} needed")]
    ExplicitTooShort { have: usize, need: usize },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Blocks(#[from] BlocksError),
    #[error("invalid stage grouping: {0}")]
    InvalidGrouping(String),
    #[error("invalid ratio threshold: {0}")]
    InvalidThreshold(String),
}

/// Rule for the family parameter u at stage i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UPolicy {
    /// u_i = c for every stage.
    Const(u64),
    /// u_i = c * k_i, growing with the stage parameter.
    TimesK(u64),
}

impl std::fmt::Display for UPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UPolicy::Const(c) => write!(f, "u={c}"),
            UPolicy::TimesK(1) => write!(f, "u=k"),
            UPolicy::TimesK(c) => write!(f, "u={c}k"),
        }
    }
}

/// Which coordinate projections count toward the stage projection count d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DPolicy {
    /// Only unflipped projections.
    CoordinateOnly,
    /// Unflipped and flipped projections together. Under this policy the
    /// projection count of a composite map is exactly the product of the
    /// stage counts, so telescoping preserves the partial products.
    IncludeFlipped,
}

/// Family parameters per stage: either one rule applied at every stage or an
/// explicit list of (s_i, u_i) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageParams {
    Policy { u: UPolicy, s: u64 },
    Explicit(Vec<(u64, u64)>),
}

/// A tower prescription: first stage parameter, per-stage family parameters,
/// and the projection counting policy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub k1: u64,
    pub params: StageParams,
    pub d_policy: DPolicy,
}

impl Schedule {
    /// Short human-readable description of the parameter rule.
    pub fn label(&self) -> String {
        match &self.params {
            StageParams::Policy { u, s } => format!("{u},s={s}"),
            StageParams::Explicit(list) => format!("explicit({} stages)", list.len()),
        }
    }
}

/// One stage of a built tower: the connecting map out of the stage, the
/// stage algebra's cumulative data, and the projection fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub index: usize,
    /// Family parameter s of the connecting map; absent on telescoped
    /// composites.
    #[serde(with = "crate::serde_big::big_int_string_opt")]
    pub s: Option<ExactInt>,
    /// Family parameter u of the connecting map; absent on telescoped
    /// composites.
    #[serde(with = "crate::serde_big::big_int_string_opt")]
    pub u: Option<ExactInt>,
    /// Count summary of the connecting map leaving this stage.
    pub map: MapCounts,
    /// Multiplicity of the stage algebra itself (product of the earlier
    /// stage factors; 1 at the first stage).
    #[serde(with = "crate::serde_big::big_int_string")]
    pub m_cum: ExactInt,
    /// Cube dimension of the stage algebra (product of the earlier d's).
    #[serde(with = "crate::serde_big::big_int_string")]
    pub cube_dim: ExactInt,
    /// Projection count of the connecting map under the policy.
    #[serde(with = "crate::serde_big::big_int_string")]
    pub d: ExactInt,
    /// Projection fraction d / p.
    #[serde(with = "crate::serde_big::rational_string_serde")]
    pub f: ExactRational,
    pub d_policy: DPolicy,
}

impl Stage {
    /// Deficit of the projection fraction, 1 - f.
    pub fn deficit(&self) -> ExactRational {
        ExactRational::one() - &self.f
    }
}

pub(crate) fn policy_projection_count(map: &MapCounts, policy: DPolicy) -> ExactInt {
    match policy {
        DPolicy::CoordinateOnly => map.coord_unflipped.clone(),
        DPolicy::IncludeFlipped => &map.coord_unflipped + &map.coord_flipped,
    }
}

/// Builds the first `stages` stages of the tower prescribed by `schedule`.
pub fn build(schedule: &Schedule, stages: usize) -> Result<Vec<Stage>, TowerError> {
    if stages == 0 {
        return Err(TowerError::InvalidParameter(
            "a tower needs at least one stage".into(),
        ));
    }
    if schedule.k1 == 0 {
        return Err(TowerError::InvalidParameter("k1 must be at least 1".into()));
    }
    if let StageParams::Explicit(list) = &schedule.params {
        if list.len() < stages {
            return Err(TowerError::ExplicitTooShort {
                have: list.len(),
                need: stages,
            });
        }
    }
    let mut tower = Vec::with_capacity(stages);
    let mut k = ExactInt::from(schedule.k1);
    let mut m_cum = ExactInt::one();
    let mut cube_dim = ExactInt::one();
    for index in 1..=stages {
        let (s, u) = match &schedule.params {
            StageParams::Policy { u, s } => {
                let u_value = match u {
                    UPolicy::Const(c) => ExactInt::from(*c),
                    UPolicy::TimesK(c) => ExactInt::from(*c) * &k,
                };
                (ExactInt::from(*s), u_value)
            }
            StageParams::Explicit(list) => {
                let (s, u) = list[index - 1];
                (ExactInt::from(s), ExactInt::from(u))
            }
        };
        let counts = family_counts(&s, &k, &u)?;
        let map = MapCounts::from_family_counts(&counts);
        let d = policy_projection_count(&map, schedule.d_policy);
        let f = ExactRational::new(d.clone(), map.p.clone());
        let next_k = map.ell.clone();
        let next_m = &m_cum * &map.m;
        let next_dim = &cube_dim * &d;
        tower.push(Stage {
            index,
            s: Some(s),
            u: Some(u),
            map,
            m_cum: m_cum.clone(),
            cube_dim: cube_dim.clone(),
            d,
            f,
            d_policy: schedule.d_policy,
        });
        k = next_k;
        m_cum = next_m;
        cube_dim = next_dim;
    }
    Ok(tower)
}
