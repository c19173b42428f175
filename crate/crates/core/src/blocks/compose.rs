//! Composition of diagonal maps, at the eigenmap-list level and at the
//! count level.
//!
//! Composing an inner map (into a block with parameter ell) with an outer
//! map out of that same block (source parameter k = ell) yields one
//! composite eigenmap per (outer, inner) pair, ordered outer-major. Kinds
//! follow the parity table: coordinate compositions stay coordinates with
//! flips cancelling in pairs, and anything involving a path map is a path
//! map. The composite zero block is `p_outer*r_inner + m_inner*r_outer`,
//! which is exactly what the size identity forces.
//!
//! Free labels deserve a warning. The list-level composite keeps the inner
//! labels and mints one fresh label per (inner map, outer free point) pair.
//! Those labels are structurally faithful but not count-uniform: an inner
//! free label absorbs the outer map's multiplicities, so a composite
//! inventory generally fails the per-label multiplicity check even when both
//! factors are admissible. The count-level shadow [`MapCounts`] resolves
//! this by weighting free points through the count identities; composing
//! admissible counts yields admissible counts, with slack multiplying
//! stage by stage. Towers therefore compose [`MapCounts`], not lists.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BlocksError, Eigenmap, EigenmapInventory, EndpointImage};
use crate::arith::ExactInt;
use crate::solve::{CorrectedInstance, FamilyCounts, Verdict};

/// Composes two inventories along a shared middle block
/// (`inner.target_ell == outer.source.k`). The result satisfies the size
/// identity by construction; see the module notes on free labels.
pub fn compose(
    outer: &EigenmapInventory,
    inner: &EigenmapInventory,
) -> Result<EigenmapInventory, BlocksError> {
    if inner.target_ell() != outer.k() {
        return Err(BlocksError::ChainMismatch {
            inner_ell: inner.target_ell().to_string(),
            outer_k: outer.k().to_string(),
        });
    }
    let p_inner = inner.eigenmap_count();
    let p_outer = outer.eigenmap_count();
    let capacity = (p_inner as usize)
        .checked_mul(p_outer as usize)
        .ok_or_else(|| BlocksError::Overflow("composite eigenmap count".into()))?;
    let multiplicity = checked_u64(
        u128::from(inner.multiplicity()) * u128::from(outer.multiplicity()),
        "composite multiplicity",
    )?;
    let zero_block = checked_u64(
        u128::from(p_outer) * u128::from(inner.zero_block())
            + u128::from(inner.multiplicity()) * u128::from(outer.zero_block()),
        "composite zero block",
    )?;
    let free_points = checked_u64(
        u128::from(inner.free_points()) + u128::from(p_inner) * u128::from(outer.free_points()),
        "composite free point count",
    )?;
    let coord_blocks = checked_u64(
        u128::from(inner.coord_blocks()) * u128::from(outer.coord_blocks()),
        "composite coordinate blocks",
    )?;

    // Fresh label for the image of outer free point t under inner map i
    // (both 1-based); inner labels keep their indices.
    let fresh = |inner_index: u64, outer_free: u64| -> EndpointImage {
        EndpointImage::Free(inner.free_points() + (outer_free - 1) * p_inner + inner_index)
    };
    let resolve = |image: EndpointImage, inner_map: &Eigenmap, inner_index: u64| match image {
        EndpointImage::X0 => inner_map.endpoint_images().0,
        EndpointImage::X1 => inner_map.endpoint_images().1,
        EndpointImage::Free(t) => fresh(inner_index, t),
    };

    let mut eigenmaps = Vec::with_capacity(capacity);
    for outer_map in outer.eigenmaps() {
        for (i0, inner_map) in inner.eigenmaps().iter().enumerate() {
            let inner_index = i0 as u64 + 1;
            let composite = match *outer_map {
                Eigenmap::Coord {
                    axis: outer_axis,
                    flipped: outer_flip,
                } => match *inner_map {
                    Eigenmap::Coord {
                        axis: inner_axis,
                        flipped: inner_flip,
                    } => Eigenmap::Coord {
                        axis: (outer_axis - 1) * inner.coord_blocks() + inner_axis,
                        flipped: inner_flip != outer_flip,
                    },
                    Eigenmap::Path { e0, e1 } => {
                        if outer_flip {
                            Eigenmap::Path { e0: e1, e1: e0 }
                        } else {
                            Eigenmap::Path { e0, e1 }
                        }
                    }
                },
                Eigenmap::Path { e0, e1 } => Eigenmap::Path {
                    e0: resolve(e0, inner_map, inner_index),
                    e1: resolve(e1, inner_map, inner_index),
                },
            };
            eigenmaps.push(composite);
        }
    }
    EigenmapInventory::new(
        inner.source(),
        outer.target_ell(),
        multiplicity,
        eigenmaps,
        zero_block,
        free_points,
        coord_blocks,
    )
}

fn checked_u64(value: u128, what: &str) -> Result<u64, BlocksError> {
    u64::try_from(value).map_err(|_| BlocksError::Overflow(format!("{what}: {value}")))
}

/// Count-level summary of a diagonal map: the corrected-system fields plus
/// the coordinate-projection counts by parity, all in exact integers. Every
/// constructor checks the corrected system, and [`compose_counts`] rechecks
/// its output, so towers can compose summaries indefinitely without
/// revisiting admissibility. The fields stay public in the same spirit as
/// the instance types: deliberately broken counts can be built by hand and
/// fed to [`MapCounts::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapCounts {
    #[serde(with = "crate::serde_big::big_int_string")]
    pub k: ExactInt,
    #[serde(rename = "l", with = "crate::serde_big::big_int_string")]
    pub ell: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub m: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub p: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub r: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub s: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub q: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub a0: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub a1: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub b0: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub b1: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub coord_unflipped: ExactInt,
    #[serde(with = "crate::serde_big::big_int_string")]
    pub coord_flipped: ExactInt,
}

impl MapCounts {
    /// Summary of a verified instance; the coordinate counts are the
    /// realizable ones, matching what synthesis produces.
    pub fn from_instance(inst: &CorrectedInstance) -> Result<Self, BlocksError> {
        let verdict = inst.verify();
        if !verdict.ok {
            return Err(BlocksError::InvalidInstance(verdict.violations));
        }
        Ok(MapCounts {
            k: inst.k.into(),
            ell: inst.ell.into(),
            m: inst.m.into(),
            p: inst.p.into(),
            r: inst.r.into(),
            s: inst.s.into(),
            q: inst.q.into(),
            a0: inst.a0.into(),
            a1: inst.a1.into(),
            b0: inst.b0.into(),
            b1: inst.b1.into(),
            coord_unflipped: inst.a0.min(inst.b1).into(),
            coord_flipped: inst.a1.min(inst.b0).into(),
        })
    }

    /// Summary of a family solution of arbitrary size.
    pub fn from_family_counts(counts: &FamilyCounts) -> Self {
        let result = MapCounts {
            k: counts.k.clone(),
            ell: counts.ell.clone(),
            m: counts.m.clone(),
            p: counts.p.clone(),
            r: counts.r.clone(),
            s: counts.s.clone(),
            q: counts.q.clone(),
            a0: counts.a0.clone(),
            a1: counts.a1.clone(),
            b0: counts.b0.clone(),
            b1: counts.b1.clone(),
            coord_unflipped: counts.a0.clone().min(counts.b1.clone()),
            coord_flipped: counts.a1.clone().min(counts.b0.clone()),
        };
        debug_assert!(result.verify().ok);
        result
    }

    /// Summary of an inventory, with the free-point count and slack derived
    /// from the count identities rather than from labels. This makes the
    /// summary meaningful for composite inventories, whose labels aggregate
    /// multiplicities; it fails when the endpoint counts do not solve the
    /// admissibility system at all.
    pub fn from_inventory(inv: &EigenmapInventory) -> Result<Self, BlocksError> {
        let profile = inv.profile();
        let k = ExactInt::from(inv.k());
        let ell = ExactInt::from(inv.target_ell());
        let m = ExactInt::from(inv.multiplicity());
        let p = ExactInt::from(inv.eigenmap_count());
        let one = ExactInt::one();
        let (a0, a1) = (ExactInt::from(profile.a0), ExactInt::from(profile.a1));
        let (b0, b1) = (ExactInt::from(profile.b0), ExactInt::from(profile.b1));

        let free_total_y0 = &p - &a0 - &a1;
        if free_total_y0.is_negative() || !(&free_total_y0 % &ell).is_zero() {
            return Err(BlocksError::InadmissibleCounts(format!(
                "free hits at y0 ({free_total_y0}) are not a nonnegative multiple of l ({ell})"
            )));
        }
        let s = free_total_y0 / &ell;
        let free_total_y1 = &p - &b0 - &b1;
        if free_total_y1 != &s * (&ell + &one) {
            return Err(BlocksError::InadmissibleCounts(format!(
                "free hits at y1 ({free_total_y1}) disagree with s*(l+1) = {}",
                &s * (&ell + &one)
            )));
        }
        let lhs0 = &k * &a0 + (&k + &one) * &a1;
        if !(&lhs0 % &ell).is_zero() {
            return Err(BlocksError::InadmissibleCounts(format!(
                "k*a0 + (k+1)*a1 = {lhs0} is not a multiple of l ({ell})"
            )));
        }
        let slack = &lhs0 / &ell;
        let lhs1 = &k * &b0 + (&k + &one) * &b1;
        if lhs1 != &slack * (&ell + &one) {
            return Err(BlocksError::InadmissibleCounts(format!(
                "k*b0 + (k+1)*b1 = {lhs1} disagrees with slack*(l+1) = {}",
                &slack * (&ell + &one)
            )));
        }
        let q = &m - &s * (&k + &one) - &slack;
        if q.is_negative() {
            return Err(BlocksError::InadmissibleCounts(format!(
                "derived slack witness q = {q} is negative"
            )));
        }
        let mut unflipped = ExactInt::zero();
        let mut flipped = ExactInt::zero();
        for map in inv.eigenmaps() {
            if let Eigenmap::Coord { flipped: f, .. } = map {
                if *f {
                    flipped += 1;
                } else {
                    unflipped += 1;
                }
            }
        }
        Ok(MapCounts {
            k,
            ell,
            m,
            p,
            r: ExactInt::from(inv.zero_block()),
            s,
            q,
            a0,
            a1,
            b0,
            b1,
            coord_unflipped: unflipped,
            coord_flipped: flipped,
        })
    }

    /// The shared multiplicity of the two slack equations,
    /// `m - s*(k+1) - q`.
    pub fn slack(&self) -> ExactInt {
        &self.m - &self.s * (&self.k + ExactInt::one()) - &self.q
    }

    /// Rechecks the corrected system on these counts.
    pub fn verify(&self) -> Verdict {
        crate::solve::verify_corrected_exact(
            &self.k, &self.ell, &self.m, &self.p, &self.r, &self.s, &self.q, &self.a0, &self.a1,
            &self.b0, &self.b1,
        )
    }
}

/// Count-level composition along a shared middle block. Endpoint counts pair
/// through the middle marked points, coordinate counts follow the flip
/// parity table, and the free and slack fields come from the count
/// identities: slack multiplies, `s' = s_in*slack_out + p_in*s_out`, and
/// `q' = q_in*slack_out + m_in*q_out + r_in*s_out`. The result is verified
/// against the corrected system before being returned.
pub fn compose_counts(outer: &MapCounts, inner: &MapCounts) -> Result<MapCounts, BlocksError> {
    if inner.ell != outer.k {
        return Err(BlocksError::ChainMismatch {
            inner_ell: inner.ell.to_string(),
            outer_k: outer.k.to_string(),
        });
    }
    let slack_outer = outer.slack();
    let composed = MapCounts {
        k: inner.k.clone(),
        ell: outer.ell.clone(),
        m: &inner.m * &outer.m,
        p: &inner.p * &outer.p,
        r: &outer.p * &inner.r + &inner.m * &outer.r,
        s: &inner.s * &slack_outer + &inner.p * &outer.s,
        q: &inner.q * &slack_outer + &inner.m * &outer.q + &inner.r * &outer.s,
        a0: &outer.a0 * &inner.a0 + &outer.a1 * &inner.b0,
        a1: &outer.a0 * &inner.a1 + &outer.a1 * &inner.b1,
        b0: &outer.b0 * &inner.a0 + &outer.b1 * &inner.b0,
        b1: &outer.b0 * &inner.a1 + &outer.b1 * &inner.b1,
        coord_unflipped: &inner.coord_unflipped * &outer.coord_unflipped
            + &inner.coord_flipped * &outer.coord_flipped,
        coord_flipped: &inner.coord_unflipped * &outer.coord_flipped
            + &inner.coord_flipped * &outer.coord_unflipped,
    };
    let verdict = composed.verify();
    if !verdict.ok {
        return Err(BlocksError::InadmissibleCounts(format!(
            "composite counts fail verification: {:?}",
            verdict.violations
        )));
    }
    Ok(composed)
}
