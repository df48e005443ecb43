// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Quasi-static noise: one Gaussian draw per shot, frozen for the whole shot.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::device::DeviceModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSample {
    /// Larmor detuning of Q1 and Q2 in Hz.
    pub detune: [f64; 2],
    /// Exchange offset in Hz.
    pub delta_j: f64,
}

impl NoiseSample {
    pub const ZERO: Self = Self { detune: [0.0; 2], delta_j: 0.0 };
}

impl Default for NoiseSample {
    fn default() -> Self {
        Self::ZERO
    }
}

fn normal(sigma: f64) -> Normal<f64> {
    // Validated models have sigma >= 0, for which construction cannot fail.
    Normal::new(0.0, sigma).expect("finite non-negative sigma")
}

/// Draw `(delta1, delta2, delta_j)` for one shot.
pub fn sample_noise<R: Rng + ?Sized>(model: &DeviceModel, rng: &mut R) -> NoiseSample {
    let d1 = normal(model.sigma_detune[0]).sample(rng);
    let d2 = normal(model.sigma_detune[1]).sample(rng);
    let dj = normal(model.sigma_j).sample(rng);
    NoiseSample { detune: [d1, d2], delta_j: dj }
}

/// Generator for one shot: ChaCha8 keyed by `seed`, stream `(point << 32) | shot`.
///
/// Every shot owns an independent stream, so shots can run in any order or in
/// parallel and produce the same records.
pub fn shot_rng(seed: u64, point: u32, shot: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | shot as u64);
    rng
}

/// Nodes and weights of the `n`-point Gauss-Hermite rule for a standard normal.
///
/// Weights sum to one, and the rule integrates polynomials up to degree `2n - 1` exactly.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one node");
    // Physicists' polynomials by Newton iteration, then x -> sqrt(2) x.
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2 - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let nodes = x.iter().rev().map(|v| v * std::f64::consts::SQRT_2).collect();
    let weights = w.iter().rev().map(|v| v / sqrt_pi).collect();
    (nodes, weights)
}

/// Tensor-product quadrature over the noise dimensions with nonzero sigma.
///
/// With no noisy dimension this is the single point [`NoiseSample::ZERO`].
pub fn noise_quadrature(model: &DeviceModel, nodes: usize) -> Vec<(NoiseSample, f64)> {
    let (x, w) = gauss_hermite(nodes.max(1));
    let sigmas = [model.sigma_detune[0], model.sigma_detune[1], model.sigma_j];
    let mut out = vec![([0.0f64; 3], 1.0f64)];
    for (dim, &s) in sigmas.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * x.len());
        for (p, pw) in &out {
            for (xi, wi) in x.iter().zip(&w) {
                let mut q = *p;
                q[dim] = s * xi;
                next.push((q, pw * wi));
            }
        }
        out = next;
    }
    out.into_iter().map(|(p, w)| (NoiseSample { detune: [p[0], p[1]], delta_j: p[2] }, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_moments() {
        for n in [1, 2, 5, 10, 16, 31] {
            let (x, w) = gauss_hermite(n);
            let moment = |k: i32| x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum::<f64>();
            assert!((moment(0) - 1.0).abs() < 1e-13, "n={n}");
            if n >= 2 {
                assert!((moment(2) - 1.0).abs() < 1e-12, "n={n}");
            }
            if n >= 3 {
                assert!((moment(4) - 3.0).abs() < 1e-11, "n={n}");
            }
            assert!(moment(1).abs() < 1e-13);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
        let (x, _) = gauss_hermite(2);
        assert!((x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn shot_streams_are_independent_of_order() {
        let a: u64 = shot_rng(7, 3, 11).random();
        let _: u64 = shot_rng(7, 3, 10).random();
        assert_eq!(a, shot_rng(7, 3, 11).random::<u64>());
        assert_ne!(a, shot_rng(7, 4, 11).random::<u64>());
        assert_ne!(a, shot_rng(8, 3, 11).random::<u64>());
    }

    #[test]
    fn quadrature_skips_quiet_dimensions() {
        let m = DeviceModel::default();
        assert_eq!(noise_quadrature(&m, 8), vec![(NoiseSample::ZERO, 1.0)]);
        let m = DeviceModel { sigma_detune: [0.0, 1e4], ..m };
        let q = noise_quadrature(&m, 8);
        assert_eq!(q.len(), 8);
        let var: f64 = q.iter().map(|(n, w)| w * n.detune[1].powi(2)).sum();
        assert!((var.sqrt() - 1e4).abs() < 1e-6);
    }
}
