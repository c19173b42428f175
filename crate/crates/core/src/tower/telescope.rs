//! Regrouping a tower by composing consecutive connecting maps.
//!
//! Telescoping replaces groups of `g` consecutive stages by single stages
//! whose connecting maps are the composites of the grouped maps. The count
//! composition keeps every admissibility equation exact, and under the
//! flip-inclusive projection policy the composite projection count is the
//! product of the grouped counts, so the partial products of the projection
//! fractions are unchanged. Under the coordinate-only policy telescoping can
//! only increase each fraction (flips cancel in pairs), so a positivity
//! certificate for the telescoped tower is weaker, never stronger.

use super::{policy_projection_count, Stage, TowerError};
use crate::arith::ExactRational;
use crate::blocks::compose_counts;

/// Composes each consecutive group of `group` stages into one stage.
///
/// `group` must divide the number of stages exactly; a group size of 1
/// returns the tower unchanged. The composite stages carry no family
/// parameters (composites generally lie outside the family) and inherit the
/// cumulative data of the first stage in their group.
pub fn telescope(stages: &[Stage], group: usize) -> Result<Vec<Stage>, TowerError> {
    if group == 0 {
        return Err(TowerError::InvalidGrouping(
            "group size must be at least 1".into(),
        ));
    }
    if group == 1 || stages.is_empty() {
        return Ok(stages.to_vec());
    }
    if stages.len() % group != 0 {
        return Err(TowerError::InvalidGrouping(format!(
            "{} stages cannot be grouped in blocks of {group}",
            stages.len()
        )));
    }
    let mut out = Vec::with_capacity(stages.len() / group);
    for (index, chunk) in stages.chunks(group).enumerate() {
        let policy = chunk[0].d_policy;
        let mut map = chunk[0].map.clone();
        for next in &chunk[1..] {
            debug_assert_eq!(next.d_policy, policy);
            map = compose_counts(&next.map, &map)?;
        }
        let d = policy_projection_count(&map, policy);
        let f = ExactRational::new(d.clone(), map.p.clone());
        out.push(Stage {
            index: index + 1,
            s: None,
            u: None,
            map,
            m_cum: chunk[0].m_cum.clone(),
            cube_dim: chunk[0].cube_dim.clone(),
            d,
            f,
            d_policy: policy,
        });
    }
    Ok(out)
}
