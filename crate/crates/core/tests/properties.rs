//! Randomized properties tying the solution family, inventory synthesis,
//! count composition, and the rank pushforward together.
//!
//! Each property is an algebraic fact with an independent witness: family
//! tuples must pass the full verifier, synthesized inventories must recover
//! their instance exactly, the two composition routes (explicit eigenmap
//! lists versus count algebra) must land on identical summaries, and
//! pushforwards must be additive, monotone, and profile-consistent at the
//! marked points.

use proptest::prelude::*;

use razak_forge_core::blocks::{compose, compose_counts, synthesize_inventory, MapCounts};
use razak_forge_core::rank::{pushforward, AxisMap, Grid, RankFunction};
use razak_forge_core::solve::{family, CorrectedInstance};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_solutions_verify_and_round_trip(
        (s, k, u) in (1u64..=60, 1u64..=60, 1u64..=60),
    ) {
        let inst = family(s, k, u).unwrap();
        prop_assert!(inst.verify().ok);
        prop_assert_eq!(inst.q, k * s);
        prop_assert_eq!(inst.ell, k + 1 + 2 * u);
        let json = serde_json::to_string(&inst).unwrap();
        let back: CorrectedInstance = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn synthesized_inventories_realize_their_instance(
        (s, k, u) in (1u64..=6, 1u64..=6, 1u64..=6),
    ) {
        let inst = family(s, k, u).unwrap();
        let inv = synthesize_inventory(&inst).unwrap();
        prop_assert_eq!(inv.eigenmap_count(), inst.p);
        prop_assert_eq!(inv.zero_block(), inst.r);
        prop_assert_eq!(inv.free_points(), inst.s);
        let profile = inv.profile();
        prop_assert_eq!(profile.a0, inst.a0);
        prop_assert_eq!(profile.a1, inst.a1);
        prop_assert_eq!(profile.b0, inst.b0);
        prop_assert_eq!(profile.b1, inst.b1);
        for j in 0..inst.s as usize {
            prop_assert_eq!(profile.free_mults_y0[j], inst.ell);
            prop_assert_eq!(profile.free_mults_y1[j], inst.ell + 1);
        }
        let verdict = inv.check_admissible();
        prop_assert!(verdict.admissible);
        prop_assert_eq!(verdict.q_witness, Some(inst.q));
    }

    #[test]
    fn single_field_bumps_break_verification(
        (s, k, u) in (1u64..=20, 1u64..=20, 1u64..=20),
        field in 0usize..7,
    ) {
        let mut inst = family(s, k, u).unwrap();
        match field {
            0 => inst.p += 1,
            1 => inst.r += 1,
            2 => inst.q += 1,
            3 => inst.a0 += 1,
            4 => inst.a1 += 1,
            5 => inst.b0 += 1,
            _ => inst.b1 += 1,
        }
        prop_assert!(!inst.verify().ok);
    }

    #[test]
    fn list_and_count_composition_agree(
        (s1, k1, u1) in (1u64..=2, 1u64..=2, 1u64..=2),
        (s2, u2) in (1u64..=2, 1u64..=2),
    ) {
        let inner = family(s1, k1, u1).unwrap();
        let outer = family(s2, inner.ell, u2).unwrap();
        let composite = compose(
            &synthesize_inventory(&outer).unwrap(),
            &synthesize_inventory(&inner).unwrap(),
        )
        .unwrap();
        let from_list = MapCounts::from_inventory(&composite).unwrap();
        let from_counts = compose_counts(
            &MapCounts::from_instance(&outer).unwrap(),
            &MapCounts::from_instance(&inner).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(&from_list, &from_counts);
        prop_assert!(from_counts.verify().ok);
    }

    #[test]
    fn pushforward_is_additive_monotone_and_profile_consistent(
        raw_a in proptest::collection::vec(0u64..=6, 5),
        raw_delta in proptest::collection::vec(0u64..=3, 5),
        resolution in prop_oneof![Just(3u64), Just(5u64)],
    ) {
        let inst = family(1, 1, 1).unwrap();
        let inv = synthesize_inventory(&inst).unwrap();
        let grid = Grid::new(1, resolution).unwrap();
        let n = resolution as usize;
        let a_vals = raw_a[..n].to_vec();
        let b_vals: Vec<u64> = a_vals
            .iter()
            .zip(&raw_delta[..n])
            .map(|(&a, &d)| a + d)
            .collect();
        // Fiber bound 10 is a multiple of k+1 = 2 and dominates 6+3.
        let a = RankFunction::new(grid, a_vals, 10).unwrap();
        let b = RankFunction::new(grid, b_vals, 10).unwrap();
        let axis_map = AxisMap::canonical(&inv, &grid);
        let pa = pushforward(&a, &inv, &axis_map).unwrap();
        let pb = pushforward(&b, &inv, &axis_map).unwrap();
        for (&low, &high) in pa.values().iter().zip(pb.values()) {
            prop_assert!(low <= high);
        }
        let direct_sum = pushforward(&a.add(&b).unwrap(), &inv, &axis_map).unwrap();
        let summed = pa.add(&pb).unwrap();
        prop_assert_eq!(direct_sum.values(), summed.values());

        let profile = inv.profile();
        let value = |point: &[u64]| a.value_at(point).unwrap();
        let predicted_y0 = profile.a0 * value(&grid.y0())
            + profile.a1 * value(&grid.y1())
            + profile.free_mults_y0[0] * value(&grid.midpoint());
        let predicted_y1 = profile.b0 * value(&grid.y0())
            + profile.b1 * value(&grid.y1())
            + profile.free_mults_y1[0] * value(&grid.midpoint());
        prop_assert_eq!(pa.value_at(&pa.grid().y0()).unwrap(), predicted_y0);
        prop_assert_eq!(pa.value_at(&pa.grid().y1()).unwrap(), predicted_y1);
    }
}
