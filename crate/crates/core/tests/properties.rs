//! Property tests for the invariants that hold on every input: oracle
//! equivalence, symmetry and homogeneity of the maximal operators, level-set
//! monotonicity, and the layer-cake identities.

use proptest::prelude::*;

use maxnorm::layer_cake::{lemma1_check, lemma2_check, lemma3_first, lemma3_second};
use maxnorm::maximal_1d::{brute_force_one_sided, left_max, uncentered_max, Side};
use maxnorm::{PNormParams, StepFunction};

fn step_function(max_cells: usize) -> impl Strategy<Value = StepFunction> {
    (prop::collection::vec((0.1f64..2.0, 0.0f64..10.0), 2..max_cells), -10.0f64..10.0).prop_map(
        |(cells, x0)| {
            let mut breakpoints = Vec::with_capacity(cells.len() + 1);
            let mut values = Vec::with_capacity(cells.len());
            let mut x = x0;
            breakpoints.push(x);
            for (width, value) in cells {
                x += width;
                breakpoints.push(x);
                values.push(value);
            }
            StepFunction::new(breakpoints, values).expect("widths are positive")
        },
    )
}

fn exponent() -> impl Strategy<Value = f64> {
    1.1f64..6.0
}

proptest! {
    #[test]
    fn fast_left_max_equals_the_oracle(f in step_function(48)) {
        let fast = left_max(&f).unwrap();
        let slow = brute_force_one_sided(&f, Side::Left).unwrap();
        for (a, b) in fast.node_values().iter().zip(slow.node_values()) {
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn reflection_commutes_with_the_maximal_operator(f in step_function(32)) {
        let direct = uncentered_max(&f).unwrap();
        let mirrored = uncentered_max(&f.reflected()).unwrap();
        let back: Vec<f64> = mirrored.node_values().iter().rev().copied().collect();
        prop_assert_eq!(direct.node_values(), &back[..]);
    }

    #[test]
    fn level_set_measure_is_monotone(f in step_function(32), lo in 0.01f64..5.0, hi in 5.0f64..11.0) {
        let small = f.level_set(lo).unwrap().measure();
        let large = f.level_set(hi).unwrap().measure();
        prop_assert!(large <= small);
    }

    #[test]
    fn lp_norm_matches_its_layer_cake(f in step_function(32), p in exponent()) {
        // p * integral of lambda^{p-1} |{f > lambda}| = ||f||_p^p
        let params = PNormParams::new(p).unwrap();
        let (lhs, _) = lemma3_second(&f, &params).unwrap();
        let direct = f.lp_pow(&params);
        prop_assert!((p * lhs - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn layer_cake_identity_for_pairs(
        f in step_function(24),
        g in step_function(24),
        p in exponent(),
    ) {
        let params = PNormParams::new(p).unwrap();
        let (lhs, rhs) = lemma3_first(&f, &g, &params).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn sunrise_equality_everywhere(f in step_function(32), lambda in 0.05f64..12.0) {
        let (left, right) = lemma1_check(&f, lambda).unwrap();
        prop_assert!(left.slack.abs() <= 1e-9 * left.rhs.max(1.0));
        prop_assert!(right.slack.abs() <= 1e-9 * right.rhs.max(1.0));
    }

    #[test]
    fn weak_type_slack_is_nonnegative(f in step_function(32), lambda in 0.05f64..12.0) {
        let rep = lemma2_check(&f, lambda).unwrap();
        prop_assert!(rep.slack >= -1e-9 * rep.rhs.max(1.0));
    }

    #[test]
    fn maximal_function_scales_linearly(f in step_function(24), c in 0.01f64..50.0) {
        let base = uncentered_max(&f).unwrap();
        let scaled = uncentered_max(&f.scaled(c).unwrap()).unwrap();
        for (a, b) in scaled.node_values().iter().zip(base.node_values()) {
            prop_assert!((a - c * b).abs() <= 1e-12 * (c * b).max(1.0));
        }
    }

    #[test]
    fn maximal_function_is_dilation_covariant(f in step_function(24), s in 0.01f64..50.0) {
        let base = uncentered_max(&f).unwrap();
        let dilated = uncentered_max(&f.dilated(s).unwrap()).unwrap();
        for (a, b) in dilated.node_values().iter().zip(base.node_values()) {
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }
}
