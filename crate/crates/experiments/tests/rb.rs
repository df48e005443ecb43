// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_compiler::Gate;
use cryotwin_controller::TxConfig;
use cryotwin_experiments::rb::*;
use cryotwin_experiments::*;
use cryotwin_physics::{DeviceModel, Exchange};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;

type U = [[Complex64; 2]; 2];

fn mul(a: &U, b: &U) -> U {
    let mut o = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            o[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    o
}

/// exp(-i theta/2 (cos(phi) X + sin(phi) Y)) with the Paulis in the basis (|0>, |1>).
fn su2(g: Gate) -> U {
    let (theta, phi) = match g {
        Gate::I => (0.0, 0.0),
        Gate::X => (0.5, 0.0),
        Gate::Y => (0.5, 0.5),
        Gate::MX => (0.5, 1.0),
        Gate::MY => (0.5, 1.5),
        Gate::X2 => (1.0, 0.0),
        Gate::Y2 => (1.0, 0.5),
        _ => unreachable!(),
    };
    let (theta, phi) = (theta * std::f64::consts::PI, phi * std::f64::consts::PI);
    let (s, c) = (theta / 2.0).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    [[c.into(), -i * s * Complex64::from_polar(1.0, -phi)], [-i * s * Complex64::from_polar(1.0, phi), c.into()]]
}

/// |tr U| / 2, which is 1 exactly for a global phase.
fn identity_overlap(u: &U) -> f64 {
    (u[0][0] + u[1][1]).norm() / 2.0
}

#[test]
fn every_element_has_an_inverse_in_the_table() {
    verify_group().unwrap();
    for a in 0..24 {
        let inv = (0..24).filter(|&b| {
            let m = random_sequence_of(&[a, b]);
            (identity_overlap(&m) - 1.0).abs() < 1e-12
        });
        assert_eq!(inv.count(), 1, "Clifford {a}");
    }
}

fn random_sequence_of(seq: &[usize]) -> U {
    let mut u = su2(Gate::I);
    for &k in seq {
        for g in CLIFFORDS[k] {
            u = mul(&su2(*g), &u);
        }
    }
    u
}

proptest! {
    #[test]
    fn recovery_returns_to_identity(seed in 0u64..10_000, m in 1usize..300) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let seq = random_sequence(m, &mut rng);
        prop_assert_eq!(seq.len(), m + 1);
        prop_assert!((identity_overlap(&random_sequence_of(&seq)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fit_recovers_noisy_decay(p in 0.9f64..0.999, a in 0.3f64..0.5, seed in 0u64..1000) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        for k in 1..=10 {
            let m = (1usize << k) as f64;
            for _ in 0..8 {
                let noise: f64 = rand::Rng::random_range(&mut rng, -0.002..0.002);
                pts.push((m, a * p.powf(m) + 0.5 + noise));
            }
        }
        let f = fit_decay(&pts).unwrap();
        prop_assert!((f.p - p).abs() < 5.0 * f.sigma_p + 1e-4, "{:?} vs {}", f, p);
    }
}

#[test]
fn noiseless_device_shows_no_decay() {
    let stack = Stack::new(DeviceModel::default(), TxConfig::default(), Exchange::Off).unwrap();
    let backend = stack.device(1).unwrap();
    let mut spec = ExperimentSpec::new(Kind::Rb);
    spec.rb.lengths = vec![2, 8, 32, 128];
    spec.rb.sequences = 4;
    spec.shots = 200;
    let r = run_rb(&Context { stack: &stack, backend: &backend, spec: &spec, jobs: 1 }).unwrap();
    assert!((r.fit.p - 1.0).abs() <= (2.0 * r.fit.sigma_p).max(1e-4), "{:?}", r.fit);
    assert!(r.gate_fidelity > 0.9999);
}

#[test]
fn long_sequences_split_across_triggers() {
    let stack = Stack::new(DeviceModel::default(), TxConfig::default(), Exchange::Off).unwrap();
    let backend = stack.device(1).unwrap();
    let mut spec = ExperimentSpec::new(Kind::Rb);
    spec.rb.lengths = vec![1024];
    spec.rb.sequences = 1;
    let d = simulate_rb(&Context { stack: &stack, backend: &backend, spec: &spec, jobs: 1 }).unwrap();
    assert!(d.max_triggers >= 2, "{}", d.max_triggers);
    let survival = d.populations[0][0][0] + d.populations[0][0][2];
    assert!(survival > 0.999, "{survival}");
}

#[test]
fn depolarizing_decay_is_recovered_exactly_without_shots() {
    // Exact populations mixed analytically decay as (1 - eps)^(m+1) about 1/2.
    let pops = [1.0, 0.0, 0.0, 0.0];
    let eps: f64 = 0.01;
    let pts: Vec<(f64, f64)> = [2usize, 4, 8, 16, 32, 64, 128]
        .iter()
        .map(|&m| {
            let l = 1.0 - (1.0 - eps).powi(m as i32 + 1);
            let d = depolarize(&pops, 1, l);
            (m as f64, d[0] + d[2])
        })
        .collect();
    let f = fit_decay(&pts).unwrap();
    assert!((f.p - (1.0 - eps)).abs() < 1e-9, "{f:?}");
    assert!((f.b - 0.5).abs() < 1e-9);
}
