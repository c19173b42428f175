//! Eigenmap inventories for diagonal maps between generalized Razak blocks.
//!
//! A block is modeled by its fiber parameter k (fiber size k+1) and the
//! dimension of its marked cube. A diagonal map into a block with parameters
//! (ell, m) is described by an [`EigenmapInventory`]: an ordered list of p
//! eigenmaps plus a zero block of size r, subject to the size identity
//! `m*(ell+1) = p*(k+1) + r`, which the constructor enforces and every
//! operation preserves.
//!
//! Each eigenmap is either a coordinate projection (possibly flipped, which
//! swaps the marked endpoints) or a path map that carries only its two
//! endpoint images: the marked points x0, x1 or one of s designated free
//! points. Free points are abstract labels; no geometry is stored, because
//! only endpoint multiplicities enter the admissibility equations.
//!
//! [`EigenmapInventory::check_admissible`] decides whether the endpoint
//! counts solve the corrected admissibility system: free multiplicities
//! (ell, ell+1) at the two marked points, the count equations, and a slack
//! witness q shared by the two multiplicity equations. The witness is unique
//! when it exists (the first multiplicity equation pins it down), and the
//! checker reports every violated equation with both sides evaluated.

mod compose;
mod obstruction;
mod synthesize;

pub use compose::{compose, compose_counts, MapCounts};
pub use obstruction::{derive_unital_obstruction, IdentityCertificate, ObstructionCertificate};
pub use synthesize::synthesize_inventory;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::solve::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlocksError {
    #[error("invalid block data: {0}")]
    InvalidBlock(String),
    #[error("fiber size identity fails: {left} != {right}")]
    SizeIdentity { left: String, right: String },
    #[error("free point index {index} outside 1..={free_points}")]
    FreeIndexOutOfRange { index: u64, free_points: u64 },
    #[error("coordinate axis {axis} outside 1..={coord_blocks}")]
    AxisOutOfRange { axis: u64, coord_blocks: u64 },
    #[error("stage chaining mismatch: inner target l = {inner_ell}, outer source k = {outer_k}")]
    ChainMismatch { inner_ell: String, outer_k: String },
    #[error("count value too large: {0}")]
    Overflow(String),
    #[error("instance fails verification: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidInstance(Vec<Violation>),
    #[error("counts do not satisfy the admissibility equations: {0}")]
    InadmissibleCounts(String),
}

/// Shape parameters of a block: fiber size k+1 over a cube of the given
/// dimension with two marked corner points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockParams {
    pub k: u64,
    pub cube_dim: u64,
}

impl BlockParams {
    pub fn new(k: u64, cube_dim: u64) -> Result<Self, BlocksError> {
        if k == 0 {
            return Err(BlocksError::InvalidBlock("k must be at least 1".into()));
        }
        if cube_dim == 0 {
            return Err(BlocksError::InvalidBlock(
                "cube dimension must be at least 1".into(),
            ));
        }
        Ok(BlockParams { k, cube_dim })
    }

    /// Fiber size of the block, k+1.
    pub fn fiber_size(&self) -> u64 {
        self.k + 1
    }
}

/// Where an eigenmap sends a marked point of the target cube: to a marked
/// point of the source cube or to one of the declared free points
/// (1-based label).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointImage {
    X0,
    X1,
    Free(u64),
}

impl std::fmt::Display for EndpointImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EndpointImage::X0 => write!(f, "x0"),
            EndpointImage::X1 => write!(f, "x1"),
            EndpointImage::Free(j) => write!(f, "free({j})"),
        }
    }
}

/// One eigenmap of a diagonal map.
///
/// A coordinate projection selects one source-cube block of the target cube
/// (1-based axis); flipped means composed with `t -> 1 - t` on every
/// coordinate, which swaps the endpoint images. A path map is remembered
/// only by its endpoint images, since nothing else enters the counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Eigenmap {
    Coord { axis: u64, flipped: bool },
    Path { e0: EndpointImage, e1: EndpointImage },
}

impl Eigenmap {
    /// The images of the two marked points, in order (at y0, at y1).
    pub fn endpoint_images(&self) -> (EndpointImage, EndpointImage) {
        match *self {
            Eigenmap::Coord { flipped: false, .. } => (EndpointImage::X0, EndpointImage::X1),
            Eigenmap::Coord { flipped: true, .. } => (EndpointImage::X1, EndpointImage::X0),
            Eigenmap::Path { e0, e1 } => (e0, e1),
        }
    }

    pub fn is_coord(&self) -> bool {
        matches!(self, Eigenmap::Coord { .. })
    }
}

/// A diagonal map between blocks, described by its eigenmap list and zero
/// block.
///
/// The constructor enforces the size identity
/// `multiplicity*(target_ell+1) = p*(k+1) + zero_block` together with index
/// ranges for coordinate axes and free labels; those invariants hold for
/// every value of this type, including deserialized ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInventory")]
pub struct EigenmapInventory {
    source: BlockParams,
    target_ell: u64,
    multiplicity: u64,
    eigenmaps: Vec<Eigenmap>,
    zero_block: u64,
    free_points: u64,
    coord_blocks: u64,
}

/// Serde mirror of [`EigenmapInventory`]; deserialization funnels through the
/// validating constructor.
#[derive(Deserialize)]
struct RawInventory {
    source: BlockParams,
    target_ell: u64,
    multiplicity: u64,
    eigenmaps: Vec<Eigenmap>,
    zero_block: u64,
    free_points: u64,
    coord_blocks: u64,
}

impl TryFrom<RawInventory> for EigenmapInventory {
    type Error = BlocksError;

    fn try_from(raw: RawInventory) -> Result<Self, BlocksError> {
        EigenmapInventory::new(
            raw.source,
            raw.target_ell,
            raw.multiplicity,
            raw.eigenmaps,
            raw.zero_block,
            raw.free_points,
            raw.coord_blocks,
        )
    }
}

impl EigenmapInventory {
    pub fn new(
        source: BlockParams,
        target_ell: u64,
        multiplicity: u64,
        eigenmaps: Vec<Eigenmap>,
        zero_block: u64,
        free_points: u64,
        coord_blocks: u64,
    ) -> Result<Self, BlocksError> {
        BlockParams::new(source.k, source.cube_dim)?;
        if target_ell == 0 {
            return Err(BlocksError::InvalidBlock(
                "target l must be at least 1".into(),
            ));
        }
        if multiplicity == 0 {
            return Err(BlocksError::InvalidBlock(
                "multiplicity must be at least 1".into(),
            ));
        }
        if eigenmaps.is_empty() {
            return Err(BlocksError::InvalidBlock(
                "an inventory needs at least one eigenmap".into(),
            ));
        }
        let p = eigenmaps.len() as u64;
        let left = u128::from(multiplicity) * (u128::from(target_ell) + 1);
        let right = u128::from(p) * (u128::from(source.k) + 1) + u128::from(zero_block);
        if left != right {
            return Err(BlocksError::SizeIdentity {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        for map in &eigenmaps {
            match *map {
                Eigenmap::Coord { axis, .. } => {
                    if axis == 0 || axis > coord_blocks {
                        return Err(BlocksError::AxisOutOfRange {
                            axis,
                            coord_blocks,
                        });
                    }
                }
                Eigenmap::Path { e0, e1 } => {
                    for image in [e0, e1] {
                        if let EndpointImage::Free(j) = image {
                            if j == 0 || j > free_points {
                                return Err(BlocksError::FreeIndexOutOfRange {
                                    index: j,
                                    free_points,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(EigenmapInventory {
            source,
            target_ell,
            multiplicity,
            eigenmaps,
            zero_block,
            free_points,
            coord_blocks,
        })
    }

    pub fn source(&self) -> BlockParams {
        self.source
    }

    /// Rebuilds the inventory with a different source cube dimension; every
    /// count stays the same.
    pub fn with_cube_dim(&self, cube_dim: u64) -> Result<Self, BlocksError> {
        let mut copy = self.clone();
        copy.source = BlockParams::new(self.source.k, cube_dim)?;
        Ok(copy)
    }

    pub fn k(&self) -> u64 {
        self.source.k
    }

    pub fn target_ell(&self) -> u64 {
        self.target_ell
    }

    pub fn multiplicity(&self) -> u64 {
        self.multiplicity
    }

    pub fn eigenmaps(&self) -> &[Eigenmap] {
        &self.eigenmaps
    }

    /// Number of eigenmaps, the p of the size identity.
    pub fn eigenmap_count(&self) -> u64 {
        self.eigenmaps.len() as u64
    }

    pub fn zero_block(&self) -> u64 {
        self.zero_block
    }

    pub fn free_points(&self) -> u64 {
        self.free_points
    }

    pub fn coord_blocks(&self) -> u64 {
        self.coord_blocks
    }

    /// Counts the endpoint images at the two marked points.
    pub fn profile(&self) -> EndpointProfile {
        let s = self.free_points as usize;
        let mut profile = EndpointProfile {
            a0: 0,
            a1: 0,
            b0: 0,
            b1: 0,
            s: self.free_points,
            free_mults_y0: vec![0; s],
            free_mults_y1: vec![0; s],
        };
        for map in &self.eigenmaps {
            let (at_y0, at_y1) = map.endpoint_images();
            match at_y0 {
                EndpointImage::X0 => profile.a0 += 1,
                EndpointImage::X1 => profile.a1 += 1,
                EndpointImage::Free(j) => profile.free_mults_y0[(j - 1) as usize] += 1,
            }
            match at_y1 {
                EndpointImage::X0 => profile.b0 += 1,
                EndpointImage::X1 => profile.b1 += 1,
                EndpointImage::Free(j) => profile.free_mults_y1[(j - 1) as usize] += 1,
            }
        }
        profile
    }

    /// Decides the corrected admissibility system for this inventory's
    /// endpoint counts and returns the slack witness q when one exists.
    pub fn check_admissible(&self) -> AdmissibilityVerdict {
        let profile = self.profile();
        let mut violations = Vec::new();
        let ell = i128::from(self.target_ell);
        for (j, &mult) in profile.free_mults_y0.iter().enumerate() {
            if i128::from(mult) != ell {
                violations.push(Violation {
                    constraint: format!("free_mult_y0[{}]", j + 1),
                    left: mult.to_string(),
                    right: ell.to_string(),
                });
            }
        }
        for (j, &mult) in profile.free_mults_y1.iter().enumerate() {
            if i128::from(mult) != ell + 1 {
                violations.push(Violation {
                    constraint: format!("free_mult_y1[{}]", j + 1),
                    left: mult.to_string(),
                    right: (ell + 1).to_string(),
                });
            }
        }
        let p = i128::from(self.eigenmap_count());
        let k = i128::from(self.source.k);
        let m = i128::from(self.multiplicity);
        let s = i128::from(self.free_points);
        let (a0, a1) = (i128::from(profile.a0), i128::from(profile.a1));
        let (b0, b1) = (i128::from(profile.b0), i128::from(profile.b1));

        let count_y0 = a0 + a1 + s * ell;
        if count_y0 != p {
            violations.push(Violation {
                constraint: "count_y0".into(),
                left: count_y0.to_string(),
                right: p.to_string(),
            });
        }
        let count_y1 = b0 + b1 + s * (ell + 1);
        if count_y1 != p {
            violations.push(Violation {
                constraint: "count_y1".into(),
                left: count_y1.to_string(),
                right: p.to_string(),
            });
        }

        let slack_base = m - s * (k + 1);
        let lhs0 = k * a0 + (k + 1) * a1;
        let lhs1 = k * b0 + (k + 1) * b1;
        let mut q_witness = None;
        if slack_base < 0 {
            violations.push(Violation {
                constraint: "slack_nonnegative".into(),
                left: slack_base.to_string(),
                right: "0 or more".into(),
            });
        } else {
            // The first multiplicity equation fixes the slack, so at most
            // one q can work; derive it instead of searching.
            let fits = lhs0 % ell == 0 && {
                let slack = lhs0 / ell;
                slack_base - slack >= 0 && lhs1 == slack * (ell + 1)
            };
            if fits {
                q_witness = Some((slack_base - lhs0 / ell) as u64);
            } else {
                violations.push(Violation {
                    constraint: "q_witness".into(),
                    left: format!("k*a0 + (k+1)*a1 = {lhs0}, k*b0 + (k+1)*b1 = {lhs1}"),
                    right: format!(
                        "(m - s*(k+1) - q)*l and (m - s*(k+1) - q)*(l+1) for some q in [0, {slack_base}]"
                    ),
                });
            }
        }
        AdmissibilityVerdict {
            admissible: violations.is_empty() && q_witness.is_some(),
            q_witness,
            violations,
        }
    }
}

/// Endpoint image counts of an inventory: how many eigenmaps hit x0 and x1
/// at each marked point, and per-free-label multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointProfile {
    pub a0: u64,
    pub a1: u64,
    pub b0: u64,
    pub b1: u64,
    pub s: u64,
    pub free_mults_y0: Vec<u64>,
    pub free_mults_y1: Vec<u64>,
}

/// Result of [`EigenmapInventory::check_admissible`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub q_witness: Option<u64>,
    pub violations: Vec<Violation>,
}

/// How to count usable coordinate projections from endpoint counts.
///
/// Each unflipped projection consumes one unit of a0 and one of b1; each
/// flipped one consumes a1 and b0. The realizable count is therefore the
/// minimum of the paired counts, which is what synthesis uses. The
/// permissive rule takes the maximum instead and exists only for exploring
/// how far an upper-bound reading would reach; it does not correspond to a
/// realizable eigenmap list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountRule {
    MinRealizable,
    MaxPermissive,
}

/// Counts (unflipped, flipped) coordinate projections supported by the
/// endpoint counts under the chosen rule.
pub fn coordinate_capacity(a0: u64, a1: u64, b0: u64, b1: u64, rule: CountRule) -> (u64, u64) {
    match rule {
        CountRule::MinRealizable => (a0.min(b1), a1.min(b0)),
        CountRule::MaxPermissive => (a0.max(b1), a1.max(b0)),
    }
}
