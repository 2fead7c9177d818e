//! Property tests for the model-level invariants: distribution laws of the
//! quantum side, symmetry and monotonicity of the critical visibility, and
//! agreement between the simplex path and the exhaustive vertex oracle.

mod common;

use std::f64::consts::TAU;
use std::sync::Arc;

use proptest::prelude::*;
use vcrit::lhv::{self, DedupMode};
use vcrit::lp;
use vcrit::quantum::{self, AnalyzerDirection, Visibility};
use vcrit::{SettingsGrid, Sign};

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

fn visibility() -> impl Strategy<Value = Visibility> {
    (0.0..=1.0).prop_map(|v| Visibility::new(v).unwrap())
}

/// A coplanar grid with 2..=3 parties and a bounded settings total, emitted
/// as (counts, flat angle list).
fn small_grid(max_total: usize) -> impl Strategy<Value = (Vec<usize>, Vec<f64>)> {
    prop::collection::vec(1usize..=3, 2..=3)
        .prop_filter("settings total under cap", move |counts| {
            counts.iter().sum::<usize>() <= max_total
        })
        .prop_flat_map(|counts| {
            let total = counts.iter().sum::<usize>();
            (
                Just(counts),
                prop::collection::vec(0.0..TAU, total..=total),
            )
        })
}

fn grid_of(counts: &[usize], flat: &[f64]) -> SettingsGrid {
    SettingsGrid::from_coplanar_flat(counts, flat).unwrap()
}

fn vmax_of(grid: &SettingsGrid) -> f64 {
    lp::critical_visibility(grid).unwrap().v_max().value()
}

const ALL_OUTCOMES: [[Sign; 3]; 8] = {
    use Sign::{Minus as M, Plus as P};
    [
        [P, P, P],
        [P, P, M],
        [P, M, P],
        [P, M, M],
        [M, P, P],
        [M, P, M],
        [M, M, P],
        [M, M, M],
    ]
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_form_a_distribution(
        angles in prop::collection::vec(angle(), 3..=3),
        v in visibility(),
    ) {
        let dirs: Vec<AnalyzerDirection> = angles
            .iter()
            .map(|&a| AnalyzerDirection::coplanar(a).unwrap())
            .collect();
        let mut total = 0.0;
        let mut expectation = 0.0;
        for o in &ALL_OUTCOMES {
            let p = quantum::joint_probability(o, &dirs, v).unwrap();
            prop_assert!(p >= 0.0);
            total += p;
            expectation += (o[0] * o[1] * o[2]).as_f64() * p;
        }
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!((expectation - quantum::correlation(&angles, v)).abs() <= 1e-12);
    }

    #[test]
    fn correlation_depends_only_on_the_angle_sum(
        angles in prop::collection::vec(angle(), 3..=3),
        shift in -3.0..3.0f64,
        v in visibility(),
    ) {
        let moved = vec![angles[0] + shift, angles[1] - shift, angles[2]];
        let a = quantum::correlation(&angles, v);
        let b = quantum::correlation(&moved, v);
        prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn strategy_index_roundtrips(
        (counts, flat) in small_grid(8),
        raw_index in any::<u64>(),
    ) {
        let grid = grid_of(&counts, &flat);
        let total: usize = counts.iter().sum();
        let index = raw_index & ((1u64 << total) - 1);
        let strategy = lhv::DeterministicStrategy::from_index(&counts, index);
        prop_assert_eq!(strategy.to_index(), index);
        prop_assert!(strategy.validate_against(&grid).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vmax_never_increases_when_a_setting_is_added(
        (counts, flat) in small_grid(7),
        extra in angle(),
    ) {
        let base = vmax_of(&grid_of(&counts, &flat));

        let mut extended_counts = counts.clone();
        extended_counts[0] += 1;
        let mut extended_flat = flat.clone();
        extended_flat.insert(counts[0], extra);
        let extended = vmax_of(&grid_of(&extended_counts, &extended_flat));

        prop_assert!(
            extended <= base + 1e-9,
            "adding a setting raised v_max from {base} to {extended}"
        );
    }

    #[test]
    fn vmax_is_invariant_under_party_reversal(
        (counts, flat) in small_grid(8),
    ) {
        let grid = grid_of(&counts, &flat);
        let forward = vmax_of(&grid);

        let mut reversed: Vec<Vec<f64>> = grid.coplanar_angles().unwrap();
        reversed.reverse();
        let backward = vmax_of(&SettingsGrid::from_coplanar_angles(&reversed).unwrap());

        prop_assert!((forward - backward).abs() <= 1e-9, "{forward} vs {backward}");
    }

    #[test]
    fn vmax_is_invariant_under_a_pi_shift(
        (counts, flat) in small_grid(8),
        pick in any::<prop::sample::Index>(),
    ) {
        let base = vmax_of(&grid_of(&counts, &flat));

        let mut shifted = flat.clone();
        let at = pick.index(shifted.len());
        shifted[at] += std::f64::consts::PI;
        let moved = vmax_of(&grid_of(&counts, &shifted));

        prop_assert!((base - moved).abs() <= 1e-9, "{base} vs {moved}");
    }

    #[test]
    fn dedup_modes_agree_on_vmax(
        (counts, flat) in small_grid(8),
    ) {
        let grid = grid_of(&counts, &flat);
        let mut values = Vec::new();
        for mode in [DedupMode::Raw, DedupMode::EvenFlips, DedupMode::GlobalFlip] {
            let basis = lhv::build_basis_with(&grid, mode, 24).unwrap();
            let problem = lp::build_problem_with_basis(Arc::new(basis), &grid).unwrap();
            values.push(lp::solve_lp(&problem).unwrap().v_max().value());
        }
        prop_assert!((values[0] - values[1]).abs() <= 1e-9);
        prop_assert!((values[0] - values[2]).abs() <= 1e-9);
    }

    #[test]
    fn stored_tensor_set_is_closed_under_negation(
        (counts, flat) in small_grid(8),
        mode in prop::sample::select(vec![
            DedupMode::Raw,
            DedupMode::GlobalFlip,
            DedupMode::EvenFlips,
        ]),
    ) {
        let grid = grid_of(&counts, &flat);
        let basis = lhv::build_basis_with(&grid, mode, 24).unwrap();

        let total: usize = counts.iter().sum();
        prop_assert_eq!(basis.total_multiplicity(), 1u64 << total);

        let stored: std::collections::HashSet<Vec<Sign>> = basis
            .tensors()
            .iter()
            .map(|t| t.signs().to_vec())
            .collect();
        for tensor in basis.tensors() {
            let negated: Vec<Sign> = tensor.signs().iter().map(|&s| -s).collect();
            prop_assert!(stored.contains(&negated));
        }
    }

    #[test]
    fn lp_solution_reproduces_its_targets(
        (counts, flat) in small_grid(8),
    ) {
        let grid = grid_of(&counts, &flat);
        let problem = lp::build_problem(&grid).unwrap();
        let solution = lp::solve_lp(&problem).unwrap();

        let weights = solution.weights();
        prop_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(weights.iter().all(|&w| w >= -1e-9));
        prop_assert!(solution.residual(&problem) <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simplex_matches_vertex_enumeration_on_tiny_grids(
        counts in prop::sample::select(vec![
            vec![1usize, 1],
            vec![2, 1],
            vec![2, 2],
            vec![1, 1, 1],
            vec![2, 1, 1],
        ]),
        seed in any::<u64>(),
    ) {
        let grid = common::seeded_grid(&counts, seed);
        let lp_value = vmax_of(&grid);

        let columns: Vec<Vec<f64>> = lhv::enumerate_strategies(&grid)
            .unwrap()
            .map(|s| {
                s.product_tensor()
                    .signs()
                    .iter()
                    .map(|x| x.as_f64())
                    .collect()
            })
            .collect();
        let oracle = common::vertex_enumeration_vmax(&columns, &common::unit_targets(&grid));

        prop_assert!(
            (lp_value - oracle).abs() <= 1e-7,
            "simplex {lp_value} vs vertex enumeration {oracle}"
        );
    }
}
