// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-shot sampling and per-qubit estimates.

use cryotwin_physics::{sample_outcome, shot_rng};
use serde::Serialize;

use crate::error::Result;
use crate::readout::ConfusionMatrix;

/// Records of `2*q1 + q2` over `shots` draws. Shot `k` of `point` always
/// uses the same random stream, whatever order the shots run in.
pub fn sample_counts(dist: &[f64; 4], seed: u64, point: u32, shots: u32) -> [u32; 4] {
    let mut counts = [0u32; 4];
    for k in 0..shots {
        let s = sample_outcome(dist, &mut shot_rng(seed, point, k));
        counts[(2 * s.q1 + s.q2) as usize] += 1;
    }
    counts
}

/// Probability that each qubit was recorded as 1.
pub fn marginals(dist: &[f64; 4]) -> [f64; 2] {
    [dist[2] + dist[3], dist[1] + dist[3]]
}

pub fn count_marginals(counts: &[u32; 4]) -> [f64; 2] {
    let n: u32 = counts.iter().sum();
    let n = n.max(1) as f64;
    [(counts[2] + counts[3]) as f64 / n, (counts[1] + counts[3]) as f64 / n]
}

/// P(1) per qubit with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub p1: [f64; 2],
    pub stderr: [f64; 2],
    /// Whether readout correction had to clamp either qubit.
    pub clamped: bool,
}

impl Estimate {
    /// From measured marginals over `shots` records (`shots = 0` means exact).
    /// With `correct`, the readout error is removed per qubit and the error
    /// bar scaled by the inverse contrast.
    pub fn new(measured: [f64; 2], shots: u32, confusion: Option<[ConfusionMatrix; 2]>) -> Result<Self> {
        let raw_err = measured.map(|p| if shots == 0 { 0.0 } else { (p * (1.0 - p) / shots as f64).sqrt() });
        let Some(conf) = confusion else {
            return Ok(Self { p1: measured, stderr: raw_err, clamped: false });
        };
        let mut p1 = [0.0; 2];
        let mut stderr = [0.0; 2];
        let mut clamped = false;
        for q in 0..2 {
            let c = conf[q].correct([1.0 - measured[q], measured[q]])?;
            p1[q] = c.p[1];
            clamped |= c.clamped;
            stderr[q] = raw_err[q] / conf[q].determinant().abs();
        }
        Ok(Self { p1, stderr, clamped })
    }

    /// `<sigma_z>` with |1> as +1.
    pub fn sigma_z(&self, qubit: usize) -> f64 {
        2.0 * self.p1[qubit] - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_order_free() {
        let d = [0.1, 0.2, 0.3, 0.4];
        let a = sample_counts(&d, 7, 3, 500);
        assert_eq!(a, sample_counts(&d, 7, 3, 500));
        assert_eq!(a.iter().sum::<u32>(), 500);
        assert_ne!(a, sample_counts(&d, 7, 4, 500));
    }

    #[test]
    fn certain_outcome() {
        assert_eq!(sample_counts(&[0.0, 0.0, 1.0, 0.0], 1, 0, 100), [0, 0, 100, 0]);
        assert_eq!(marginals(&[0.0, 0.0, 1.0, 0.0]), [1.0, 0.0]);
    }

    #[test]
    fn corrected_estimate() {
        let c = ConfusionMatrix::new(0.95, 0.8);
        let e = Estimate::new([0.17, 0.17], 1000, Some([c, c])).unwrap();
        assert!((e.p1[0] - 0.16).abs() < 1e-12);
        assert!((e.stderr[0] - (0.17f64 * 0.83 / 1000.0).sqrt() / 0.75).abs() < 1e-15);
    }
}
