//! Pushing rank functions forward along diagonal maps.
//!
//! An inventory with p eigenmaps sends a rank function f on the source cube
//! to the function y -> sum over eigenmaps of f(alpha(y)) on the target
//! cube; the zero block contributes nothing. Coordinate eigenmaps read one
//! block of target coordinates (flipped ones reverse each axis, which is
//! exact because resolutions are odd), while path eigenmaps evaluate f at
//! designated points chosen by the first target coordinate: the e0 image at
//! 0, the e1 image at 1, and a fixed interior point in between.
//!
//! The [`AxisMap`] says where those designated points sit and which target
//! block each declared coordinate axis reads. It is plain input data; all
//! validation happens here against the inventory and the grids.

use serde::{Deserialize, Serialize};

use super::{Grid, RankError, RankFunction};
use crate::blocks::{EigenmapInventory, Eigenmap, EndpointImage};

/// Grid-level placement data for a pushforward.
///
/// `blocks` is the number of coordinate blocks in the target cube, so the
/// target grid has dimension `blocks * D` where D is the source dimension.
/// `coord_axes[a-1]` is the 0-based target block read by declared axis `a`;
/// `free_points[j-1]` is the designated source point for free label `j`;
/// `interior` is where every path eigenmap sends interior target points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisMap {
    pub blocks: usize,
    pub coord_axes: Vec<usize>,
    pub free_points: Vec<Vec<u64>>,
    pub interior: Vec<u64>,
}

impl AxisMap {
    /// The canonical placement: axes in declaration order and every
    /// designated point at the grid center.
    pub fn canonical(inventory: &EigenmapInventory, domain: &Grid) -> AxisMap {
        let mid = domain.midpoint();
        let blocks = (inventory.coord_blocks().max(1)) as usize;
        AxisMap {
            blocks,
            coord_axes: (0..inventory.coord_blocks() as usize).collect(),
            free_points: vec![mid.clone(); inventory.free_points() as usize],
            interior: mid,
        }
    }
}

/// How one eigenmap turns a target point into a source-grid index.
enum Action {
    Block { start: usize, flipped: bool },
    Designated { at_zero: u64, at_one: u64, inside: u64 },
}

/// Pushes `f` forward along the inventory using the placements in
/// `axis_map`.
///
/// The source fiber bound must be a multiple of k+1; the result's bound is
/// `bound/(k+1) * m*(l+1)`, which exceeds the largest attainable value
/// `p * bound` exactly by the zero block's share `r * bound/(k+1)`.
pub fn pushforward(
    f: &RankFunction,
    inventory: &EigenmapInventory,
    axis_map: &AxisMap,
) -> Result<RankFunction, RankError> {
    let domain = *f.grid();
    let dim = domain.dimension();
    if inventory.source().cube_dim != dim as u64 {
        return Err(RankError::GridMismatch(format!(
            "inventory source cube dimension {} differs from the domain grid dimension {dim}",
            inventory.source().cube_dim
        )));
    }
    if axis_map.blocks == 0 {
        return Err(RankError::AxisMap(
            "the target cube needs at least one block".into(),
        ));
    }
    if axis_map.coord_axes.len() as u64 != inventory.coord_blocks() {
        return Err(RankError::AxisMap(format!(
            "{} block assignments for {} declared axes",
            axis_map.coord_axes.len(),
            inventory.coord_blocks()
        )));
    }
    if let Some(&bad) = axis_map.coord_axes.iter().find(|&&b| b >= axis_map.blocks) {
        return Err(RankError::AxisMap(format!(
            "block {bad} out of range for {} blocks",
            axis_map.blocks
        )));
    }
    if axis_map.free_points.len() as u64 != inventory.free_points() {
        return Err(RankError::AxisMap(format!(
            "{} designated points for {} free labels",
            axis_map.free_points.len(),
            inventory.free_points()
        )));
    }
    for point in axis_map.free_points.iter().chain([&axis_map.interior]) {
        if !domain.contains(point) {
            return Err(RankError::AxisMap(format!(
                "designated point {point:?} is not on the source grid"
            )));
        }
    }

    let codomain = Grid::new(
        dim.checked_mul(axis_map.blocks)
            .ok_or_else(|| RankError::Overflow("target dimension".into()))?,
        domain.resolution(),
    )?;

    let k = inventory.k();
    if f.fiber_bound() % (k + 1) != 0 {
        return Err(RankError::FiberBound(format!(
            "fiber bound {} is not a multiple of k+1 = {}",
            f.fiber_bound(),
            k + 1
        )));
    }
    let slices = f.fiber_bound() / (k + 1);
    let new_bound = u128::from(slices)
        * u128::from(inventory.multiplicity())
        * u128::from(inventory.target_ell() + 1);
    let new_bound = u64::try_from(new_bound)
        .map_err(|_| RankError::Overflow("target fiber bound".into()))?;

    let index_of = |point: &[u64]| -> u64 {
        domain.index_of(point).expect("validated designated point")
    };
    let resolve = |image: EndpointImage| -> u64 {
        match image {
            EndpointImage::X0 => index_of(&domain.y0()),
            EndpointImage::X1 => index_of(&domain.y1()),
            EndpointImage::Free(j) => index_of(&axis_map.free_points[(j - 1) as usize]),
        }
    };
    let actions: Vec<Action> = inventory
        .eigenmaps()
        .iter()
        .map(|map| match *map {
            Eigenmap::Coord { axis, flipped } => Action::Block {
                start: axis_map.coord_axes[(axis - 1) as usize] * dim,
                flipped,
            },
            Eigenmap::Path { e0, e1 } => Action::Designated {
                at_zero: resolve(e0),
                at_one: resolve(e1),
                inside: index_of(&axis_map.interior),
            },
        })
        .collect();

    let g = domain.resolution();
    let mut values = Vec::with_capacity(codomain.points() as usize);
    let mut target = vec![0u64; codomain.dimension()];
    for index in 0..codomain.points() {
        // Decode the target point in place (row-major, first slowest).
        let mut rest = index;
        for slot in target.iter_mut().rev() {
            *slot = rest % g;
            rest /= g;
        }
        let mut total: u128 = 0;
        for action in &actions {
            let source_index = match *action {
                Action::Block { start, flipped } => {
                    let mut encoded = 0u64;
                    for &coordinate in &target[start..start + dim] {
                        let c = if flipped { g - 1 - coordinate } else { coordinate };
                        encoded = encoded * g + c;
                    }
                    encoded
                }
                Action::Designated {
                    at_zero,
                    at_one,
                    inside,
                } => {
                    if target[0] == 0 {
                        at_zero
                    } else if target[0] == g - 1 {
                        at_one
                    } else {
                        inside
                    }
                }
            };
            total += u128::from(f.values()[source_index as usize]);
        }
        debug_assert!(total <= u128::from(new_bound));
        values.push(total as u64);
    }
    RankFunction::new(codomain, values, new_bound)
}
