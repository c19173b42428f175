//! Exact combinatorics of diagonal maps between generalized Razak blocks.
//!
//! A generalized Razak block is a subalgebra of matrix-valued functions on a
//! contractible space, pinned at two marked points. A diagonal map between two
//! such blocks is determined, up to unitary conjugation, by a finite list of
//! eigenmaps together with a zero block. Whether such a map exists and respects
//! the block structure comes down to a small system of integer equations in the
//! block parameters and the eigenmap counts at the two marked points.
//!
//! This crate mechanizes that combinatorial layer:
//!
//! * [`arith`]: arbitrary-precision integers and rationals, and canonical
//!   multivariate polynomials used for symbolic identity certificates.
//! * [`blocks`]: eigenmap inventories, endpoint profiles, admissibility
//!   checking, inventory synthesis, count-level composition, and the
//!   certificate that the unital version of the equations collapses.
//! * [`solve`]: the admissibility equation systems themselves, a closed-form
//!   solution family, symbolic verification of that family, and bounded
//!   enumeration of all solutions.
//! * [`tower`]: inductive towers of blocks chained by diagonal maps, their
//!   coordinate-projection fractions, and exact certification of the
//!   perforation product criterion.
//! * [`rank`]: a finite grid model of fiberwise matrix ranks, pushforwards
//!   along an inventory, and the rank-level half of the perforation statement.
//!
//! Everything is exact. No floating point enters any computation; decimal
//! renderings exist only in report formatting downstream.

pub mod arith;
pub mod blocks;
pub mod rank;
pub mod solve;
pub mod tower;

mod serde_big;

pub use arith::{ExactInt, ExactRational, MultiPoly, PolyOp, VarSet};
pub use blocks::{
    AdmissibilityVerdict, BlockParams, Eigenmap, EigenmapInventory, EndpointImage,
    EndpointProfile, MapCounts, ObstructionCertificate,
};
pub use rank::{AxisMap, DemoReport, Grid, RankFunction};
pub use solve::{CorrectedInstance, FamilyCertificate, SearchBounds, UnitalInstance, Violation};
pub use tower::{DPolicy, PerforationReport, PerforationVerdict, Schedule, Stage, UPolicy};
