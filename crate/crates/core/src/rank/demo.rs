//! Rank-level half of the perforation comparison, as a self-aware report.
//!
//! The demo takes two user-supplied rank functions on a stage's cube and
//! answers two pointwise questions: does (k+1)*rank(a) <= k*rank(b) hold,
//! and does rank(a) <= n*rank(b) hold. A failure of the second is already
//! meaningful at rank level; its success decides nothing, because the
//! genuine order relation also depends on a topological obstruction that
//! this model deliberately omits. Every report says so.
//!
//! When asked, the demo also rebuilds the stage's connecting map as a
//! concrete inventory, pushes both witnesses forward, and reports whether
//! the weighted comparison came out the same on the other side. Stages
//! whose counts exceed machine words or whose target cube would blow the
//! grid cap skip that check with a note instead of failing.

use serde::{Deserialize, Serialize};

use super::pushforward::{pushforward, AxisMap};
use super::{rank_leq, Comparison, Grid, RankError, RankFunction};
use crate::arith::ExactInt;
use crate::blocks::synthesize_inventory;
use crate::solve::CorrectedInstance;
use crate::tower::Stage;

/// Fixed wording carried by every report.
pub const DEMO_DISCLAIMER: &str = "rank comparison is a necessary condition only: \
rank(a) <= n*rank(b) at every grid point does not decide whether the class of a \
sits below n copies of the class of b; that order relation depends on a \
topological obstruction outside this model";

/// Outcome of [`perforation_rank_demo`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReport {
    pub stage_index: usize,
    pub grid: Grid,
    /// Weight of the necessary comparison: (k+1)*rank(a) <= k*rank(b).
    pub k: u64,
    /// Weight of the direct comparison: rank(a) <= n*rank(b).
    pub n: u64,
    pub weighted: Comparison,
    pub unweighted: Comparison,
    /// Whether pushing both witnesses forward left the weighted verdict
    /// unchanged; absent when the check was not requested or was skipped.
    pub pushforward_preserved: Option<bool>,
    pub notes: Vec<String>,
    pub disclaimer: String,
}

/// Compares two rank witnesses on a stage's cube and, optionally, across
/// the stage's connecting map.
pub fn perforation_rank_demo(
    stage: &Stage,
    k: u64,
    n: u64,
    a: &RankFunction,
    b: &RankFunction,
    check_pushforward: bool,
) -> Result<DemoReport, RankError> {
    if a.grid() != b.grid() {
        return Err(RankError::GridMismatch(
            "both witnesses must live on the same grid".into(),
        ));
    }
    let weight = k
        .checked_add(1)
        .ok_or_else(|| RankError::Overflow("k+1".into()))?;
    let weighted = rank_leq(a, b, (weight, k))?;
    let unweighted = rank_leq(a, b, (1, n))?;

    let mut notes = Vec::new();
    if let Some(witness) = &unweighted.witness {
        notes.push(format!(
            "rank(a) > n*rank(b) at {:?}; the negative direction is certified at rank level",
            witness.point
        ));
    }

    let mut pushforward_preserved = None;
    if check_pushforward {
        match pushed_comparison(stage, (weight, k), a, b) {
            Ok(pushed) => {
                let preserved = pushed.holds == weighted.holds;
                pushforward_preserved = Some(preserved);
                notes.push(if preserved {
                    "pushforward preserves the weighted comparison".into()
                } else {
                    "pushforward changes the weighted comparison".into()
                });
            }
            Err(reason) => notes.push(format!("pushforward check skipped: {reason}")),
        }
    }

    Ok(DemoReport {
        stage_index: stage.index,
        grid: *a.grid(),
        k,
        n,
        weighted,
        unweighted,
        pushforward_preserved,
        notes,
        disclaimer: DEMO_DISCLAIMER.into(),
    })
}

/// Rebuilds the stage map as an inventory and compares the pushforwards.
/// Any obstacle comes back as a human-readable skip reason.
fn pushed_comparison(
    stage: &Stage,
    weights: (u64, u64),
    a: &RankFunction,
    b: &RankFunction,
) -> Result<Comparison, String> {
    let map = &stage.map;
    let small = |value: &ExactInt| -> Result<u64, String> {
        u64::try_from(value).map_err(|_| "stage counts exceed machine words".to_string())
    };
    let instance = CorrectedInstance::new(
        small(&map.k)?,
        small(&map.ell)?,
        small(&map.m)?,
        small(&map.p)?,
        small(&map.r)?,
        small(&map.s)?,
        small(&map.q)?,
        small(&map.a0)?,
        small(&map.a1)?,
        small(&map.b0)?,
        small(&map.b1)?,
    )
    .map_err(|_| "stage counts do not form a valid instance".to_string())?;
    let inventory = synthesize_inventory(&instance)
        .map_err(|e| format!("stage counts do not synthesize: {e}"))?
        .with_cube_dim(a.grid().dimension() as u64)
        .map_err(|e| e.to_string())?;
    let axis_map = AxisMap::canonical(&inventory, a.grid());
    let pa = pushforward(a, &inventory, &axis_map).map_err(|e| e.to_string())?;
    let pb = pushforward(b, &inventory, &axis_map).map_err(|e| e.to_string())?;
    rank_leq(&pa, &pb, weights).map_err(|e| e.to_string())
}
