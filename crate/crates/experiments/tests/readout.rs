// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_experiments::*;
use proptest::prelude::*;

/// Inverse of [[a, b], [c, d]] applied to `v`, by Cramer's rule.
fn cramer(m: [[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [(v[0] * m[1][1] - m[0][1] * v[1]) / det, (m[0][0] * v[1] - v[0] * m[1][0]) / det]
}

#[test]
fn worked_example_matches_cramer() {
    let m = [[0.95, 1.0 - 0.80], [1.0 - 0.95, 0.80]];
    let want = cramer(m, [0.83, 0.17]);
    // det = 0.75; P0 = 0.63 / 0.75, P1 = 0.12 / 0.75.
    assert!((want[0] - 0.84).abs() < 1e-12 && (want[1] - 0.16).abs() < 1e-12);
    let got = readout_correct([0.83, 0.17], 0.95, 0.80).unwrap();
    assert!((got.p[0] - want[0]).abs() < 1e-12 && (got.p[1] - want[1]).abs() < 1e-12);
    assert!(!got.clamped);
}

#[test]
fn columns_are_stochastic() {
    let m = ConfusionMatrix::new(0.9, 0.7).matrix();
    assert_eq!(m[0][0] + m[1][0], 1.0);
    assert!((m[0][1] + m[1][1] - 1.0).abs() < 1e-15);
}

#[test]
fn singular_and_clamped() {
    assert!(matches!(readout_correct([0.4, 0.6], 0.3, 0.7), Err(ExperimentError::Singular(_))));
    let c = readout_correct([1.0, 0.0], 0.95, 0.8).unwrap();
    assert!(c.raw[0] > 1.0 && c.clamped);
}

proptest! {
    #[test]
    fn round_trip(f0 in 0.51f64..1.0, f1 in 0.51f64..1.0, t in 0.0f64..=1.0) {
        // Measured vectors produced by a physical state never clamp.
        let m = ConfusionMatrix::new(f0, f1);
        let measured = m.apply([1.0 - t, t]);
        let c = m.correct(measured).unwrap();
        prop_assert!(!c.clamped);
        let back = m.apply(c.p);
        prop_assert!((back[0] - measured[0]).abs() < 1e-12 && (back[1] - measured[1]).abs() < 1e-12);
        let o = cramer(m.matrix(), measured);
        prop_assert!((o[0] - c.raw[0]).abs() < 1e-12 && (o[1] - c.raw[1]).abs() < 1e-12);
    }

    #[test]
    fn clamped_results_stay_in_range(f0 in 0.51f64..1.0, f1 in 0.51f64..1.0, p in 0.0f64..=1.0) {
        let c = readout_correct([1.0 - p, p], f0, f1).unwrap();
        prop_assert!(c.p.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert_eq!(c.clamped, c.p != c.raw);
    }
}
