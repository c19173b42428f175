//! Realizes a verified instance as a concrete eigenmap inventory.
//!
//! Coordinate projections come first: each unflipped one consumes a unit of
//! a0 and b1, each flipped one a unit of a1 and b0, so exactly min(a0, b1)
//! unflipped and min(a1, b0) flipped projections are realizable. Whatever
//! endpoint demand remains, including every free-point multiplicity, is met
//! by path maps produced by a greedy degree realization: repeatedly pair the
//! largest remaining demand at y0 with the largest at y1, ties broken by
//! image order (x0, then x1, then free labels in index order). Greedy pairing
//! never strands demand because the two sides have equal totals and shrink
//! together, and it makes the output a deterministic function of the
//! instance.

use super::{BlockParams, BlocksError, Eigenmap, EigenmapInventory, EndpointImage};
use crate::solve::CorrectedInstance;

/// Builds the inventory of a verified corrected instance over an interval
/// (cube dimension 1) source.
pub fn synthesize_inventory(inst: &CorrectedInstance) -> Result<EigenmapInventory, BlocksError> {
    let verdict = inst.verify();
    if !verdict.ok {
        return Err(BlocksError::InvalidInstance(verdict.violations));
    }
    let unflipped = inst.a0.min(inst.b1);
    let flipped = inst.a1.min(inst.b0);

    let mut eigenmaps = Vec::new();
    for axis in 1..=unflipped {
        eigenmaps.push(Eigenmap::Coord {
            axis,
            flipped: false,
        });
    }
    for axis in unflipped + 1..=unflipped + flipped {
        eigenmaps.push(Eigenmap::Coord {
            axis,
            flipped: true,
        });
    }

    let mut demand_y0 = demands(inst.a0 - unflipped, inst.a1 - flipped, inst.s, inst.ell);
    let mut demand_y1 = demands(inst.b0 - flipped, inst.b1 - unflipped, inst.s, inst.ell + 1);
    loop {
        let Some(at_y0) = argmax(&demand_y0) else {
            break;
        };
        let Some(at_y1) = argmax(&demand_y1) else {
            break;
        };
        eigenmaps.push(Eigenmap::Path {
            e0: demand_y0[at_y0].0,
            e1: demand_y1[at_y1].0,
        });
        demand_y0[at_y0].1 -= 1;
        demand_y1[at_y1].1 -= 1;
    }
    // Equal totals on the two sides are a consequence of the count
    // equations; a leftover on either side would mean the instance was not
    // actually verified.
    let leftover: u64 = demand_y0.iter().map(|d| d.1).sum::<u64>()
        + demand_y1.iter().map(|d| d.1).sum::<u64>();
    assert_eq!(leftover, 0, "unbalanced endpoint demands for {inst:?}");

    let inventory = EigenmapInventory::new(
        BlockParams {
            k: inst.k,
            cube_dim: 1,
        },
        inst.ell,
        inst.m,
        eigenmaps,
        inst.r,
        inst.s,
        unflipped + flipped,
    )?;
    debug_assert_eq!(inventory.eigenmap_count(), inst.p);
    Ok(inventory)
}

fn demands(x0: u64, x1: u64, free_labels: u64, per_free: u64) -> Vec<(EndpointImage, u64)> {
    let mut list = vec![(EndpointImage::X0, x0), (EndpointImage::X1, x1)];
    for j in 1..=free_labels {
        list.push((EndpointImage::Free(j), per_free));
    }
    list
}

/// Index of the largest remaining demand; earlier entries win ties. None
/// once everything is satisfied.
fn argmax(demand: &[(EndpointImage, u64)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (idx, &(_, count)) in demand.iter().enumerate() {
        if count > 0 && best.map_or(true, |b| count > demand[b].1) {
            best = Some(idx);
        }
    }
    best
}
