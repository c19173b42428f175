//! Integer rank functions on hypercube grids and their behavior under
//! diagonal maps.
//!
//! A rank function assigns a natural number to every point of a finite
//! lattice inside the unit cube, bounded by a fiber capacity. Diagonal maps
//! push rank functions forward by summing the function over the eigenmap
//! images ([`pushforward`]), and rank comparison is pointwise with integer
//! weights ([`rank_leq`]). Everything is exact integer arithmetic on grids
//! whose resolution is odd, so the coordinate flip t -> 1-t is a lattice
//! bijection and no interpolation ever happens.
//!
//! Rank comparison is a necessary condition only; nothing in this module
//! claims the converse direction, and [`perforation_rank_demo`] says so
//! explicitly in its report.

mod demo;
mod pushforward;

pub use demo::{perforation_rank_demo, DemoReport, DEMO_DISCLAIMER};
pub use pushforward::{pushforward, AxisMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::BlocksError;

/// Hard cap on grid sizes, in points.
pub const MAX_GRID_POINTS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid {resolution}^{dimension} exceeds the {cap} point cap")]
    TooLarge {
        dimension: usize,
        resolution: u64,
        cap: u64,
    },
    #[error("invalid rank function: {0}")]
    InvalidFunction(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid axis assignment: {0}")]
    AxisMap(String),
    #[error("fiber bound: {0}")]
    FiberBound(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error(transparent)]
    Blocks(#[from] BlocksError),
}

/// A finite lattice {0, 1/(g-1), ..., 1}^D, stored by integer coordinates
/// 0..g per axis.
///
/// The resolution g is odd and at least 3, so both endpoints and the exact
/// midpoint are lattice points and t -> 1-t permutes each axis. Points are
/// indexed row-major with the first coordinate slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid {
    dimension: usize,
    resolution: u64,
    points: u64,
}

#[derive(Deserialize)]
struct RawGrid {
    dimension: usize,
    resolution: u64,
}

impl TryFrom<RawGrid> for Grid {
    type Error = RankError;

    fn try_from(raw: RawGrid) -> Result<Self, Self::Error> {
        Grid::new(raw.dimension, raw.resolution)
    }
}

impl Grid {
    pub fn new(dimension: usize, resolution: u64) -> Result<Self, RankError> {
        if dimension == 0 {
            return Err(RankError::InvalidGrid(
                "dimension must be at least 1".into(),
            ));
        }
        if resolution < 3 || resolution % 2 == 0 {
            return Err(RankError::InvalidGrid(format!(
                "resolution must be odd and at least 3, got {resolution}"
            )));
        }
        let mut points: u64 = 1;
        for _ in 0..dimension {
            points = points
                .checked_mul(resolution)
                .filter(|&p| p <= MAX_GRID_POINTS)
                .ok_or(RankError::TooLarge {
                    dimension,
                    resolution,
                    cap: MAX_GRID_POINTS,
                })?;
        }
        Ok(Grid {
            dimension,
            resolution,
            points,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn resolution(&self) -> u64 {
        self.resolution
    }

    /// Total number of lattice points, g^D.
    pub fn points(&self) -> u64 {
        self.points
    }

    /// Row-major index of a point given by integer coordinates.
    pub fn index_of(&self, point: &[u64]) -> Option<u64> {
        if point.len() != self.dimension {
            return None;
        }
        let mut index = 0u64;
        for &coordinate in point {
            if coordinate >= self.resolution {
                return None;
            }
            index = index * self.resolution + coordinate;
        }
        Some(index)
    }

    /// Integer coordinates of the point at a row-major index.
    pub fn point_of(&self, mut index: u64) -> Vec<u64> {
        debug_assert!(index < self.points);
        let mut point = vec![0u64; self.dimension];
        for slot in point.iter_mut().rev() {
            *slot = index % self.resolution;
            index /= self.resolution;
        }
        point
    }

    /// The all-zeros corner.
    pub fn y0(&self) -> Vec<u64> {
        vec![0; self.dimension]
    }

    /// The all-ones corner.
    pub fn y1(&self) -> Vec<u64> {
        vec![self.resolution - 1; self.dimension]
    }

    /// The exact center of the lattice.
    pub fn midpoint(&self) -> Vec<u64> {
        vec![(self.resolution - 1) / 2; self.dimension]
    }

    pub(crate) fn contains(&self, point: &[u64]) -> bool {
        point.len() == self.dimension && point.iter().all(|&c| c < self.resolution)
    }
}

/// A natural-valued function on a grid, capped by a fiber bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRankFunction")]
pub struct RankFunction {
    grid: Grid,
    values: Vec<u64>,
    fiber_bound: u64,
}

#[derive(Deserialize)]
struct RawRankFunction {
    grid: Grid,
    values: Vec<u64>,
    fiber_bound: u64,
}

impl TryFrom<RawRankFunction> for RankFunction {
    type Error = RankError;

    fn try_from(raw: RawRankFunction) -> Result<Self, Self::Error> {
        RankFunction::new(raw.grid, raw.values, raw.fiber_bound)
    }
}

impl RankFunction {
    /// Wraps row-major values after checking the length and the bound.
    pub fn new(grid: Grid, values: Vec<u64>, fiber_bound: u64) -> Result<Self, RankError> {
        if values.len() as u64 != grid.points() {
            return Err(RankError::InvalidFunction(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.points()
            )));
        }
        if let Some(&worst) = values.iter().max() {
            if worst > fiber_bound {
                return Err(RankError::InvalidFunction(format!(
                    "value {worst} exceeds the fiber bound {fiber_bound}"
                )));
            }
        }
        Ok(RankFunction {
            grid,
            values,
            fiber_bound,
        })
    }

    pub fn constant(grid: Grid, value: u64, fiber_bound: u64) -> Result<Self, RankError> {
        let points = grid.points() as usize;
        RankFunction::new(grid, vec![value; points], fiber_bound)
    }

    pub fn zero(grid: Grid, fiber_bound: u64) -> Result<Self, RankError> {
        RankFunction::constant(grid, 0, fiber_bound)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn fiber_bound(&self) -> u64 {
        self.fiber_bound
    }

    pub fn value_at(&self, point: &[u64]) -> Option<u64> {
        self.grid
            .index_of(point)
            .map(|index| self.values[index as usize])
    }

    /// Pointwise sum; fiber bounds add.
    pub fn add(&self, other: &RankFunction) -> Result<RankFunction, RankError> {
        if self.grid != other.grid {
            return Err(RankError::GridMismatch(
                "cannot add rank functions on different grids".into(),
            ));
        }
        let fiber_bound = self
            .fiber_bound
            .checked_add(other.fiber_bound)
            .ok_or_else(|| RankError::Overflow("fiber bound sum".into()))?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| {
                a.checked_add(b)
                    .ok_or_else(|| RankError::Overflow("value sum".into()))
            })
            .collect::<Result<Vec<u64>, RankError>>()?;
        RankFunction::new(self.grid, values, fiber_bound)
    }

    /// Pointwise scaling; the fiber bound scales too.
    pub fn scale(&self, factor: u64) -> Result<RankFunction, RankError> {
        let fiber_bound = self
            .fiber_bound
            .checked_mul(factor)
            .ok_or_else(|| RankError::Overflow("fiber bound scale".into()))?;
        let values = self
            .values
            .iter()
            .map(|&v| {
                v.checked_mul(factor)
                    .ok_or_else(|| RankError::Overflow("value scale".into()))
            })
            .collect::<Result<Vec<u64>, RankError>>()?;
        RankFunction::new(self.grid, values, fiber_bound)
    }
}

/// First point, if any, where a weighted pointwise comparison fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonWitness {
    /// Integer coordinates of the violating point.
    pub point: Vec<u64>,
    /// Left-hand weighted value there, as a decimal string.
    pub left: String,
    /// Right-hand weighted value there.
    pub right: String,
}

/// Outcome of [`rank_leq`]: whether the weighted inequality holds
/// everywhere, with the first violating point when it does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub holds: bool,
    pub witness: Option<ComparisonWitness>,
}

/// Checks multiplicity.0 * a <= multiplicity.1 * b at every grid point.
///
/// Products are taken in 128-bit arithmetic, so any u64 weights are safe.
pub fn rank_leq(
    a: &RankFunction,
    b: &RankFunction,
    multiplicity: (u64, u64),
) -> Result<Comparison, RankError> {
    if a.grid() != b.grid() {
        return Err(RankError::GridMismatch(
            "rank comparison needs a common grid".into(),
        ));
    }
    let (ma, mb) = multiplicity;
    for (index, (&av, &bv)) in a.values().iter().zip(b.values()).enumerate() {
        let left = u128::from(ma) * u128::from(av);
        let right = u128::from(mb) * u128::from(bv);
        if left > right {
            return Ok(Comparison {
                holds: false,
                witness: Some(ComparisonWitness {
                    point: a.grid().point_of(index as u64),
                    left: left.to_string(),
                    right: right.to_string(),
                }),
            });
        }
    }
    Ok(Comparison {
        holds: true,
        witness: None,
    })
}
