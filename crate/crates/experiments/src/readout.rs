// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Removal of single-qubit readout errors by inverting the confusion matrix.

use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

/// Column-stochastic map from true to measured probabilities `(P0, P1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    /// P(read 0 | 0).
    pub f0: f64,
    /// P(read 1 | 1).
    pub f1: f64,
}

/// Corrected probabilities, clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corrected {
    pub p: [f64; 2],
    /// Before clamping.
    pub raw: [f64; 2],
    pub clamped: bool,
}

impl ConfusionMatrix {
    pub fn new(f0: f64, f1: f64) -> Self {
        Self { f0, f1 }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.f0, 1.0 - self.f1], [1.0 - self.f0, self.f1]]
    }

    pub fn determinant(&self) -> f64 {
        self.f0 + self.f1 - 1.0
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        let m = self.matrix();
        [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]
    }

    pub fn correct(&self, measured: [f64; 2]) -> Result<Corrected> {
        let det = self.determinant();
        if det.abs() < 1e-12 {
            return Err(ExperimentError::Singular(self.f0 + self.f1));
        }
        let raw = [
            (self.f1 * measured[0] - (1.0 - self.f1) * measured[1]) / det,
            (self.f0 * measured[1] - (1.0 - self.f0) * measured[0]) / det,
        ];
        let p = raw.map(|x| x.clamp(0.0, 1.0));
        Ok(Corrected { p, raw, clamped: p != raw })
    }
}

/// Apply the inverse confusion matrix to a measured `(P0, P1)` pair.
pub fn readout_correct(measured: [f64; 2], f0: f64, f1: f64) -> Result<Corrected> {
    ConfusionMatrix::new(f0, f1).correct(measured)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_when_perfect() {
        let c = readout_correct([0.3, 0.7], 1.0, 1.0).unwrap();
        assert_eq!(c.p, [0.3, 0.7]);
        assert!(!c.clamped);
    }

    #[test]
    fn worked_example() {
        let c = readout_correct([0.83, 0.17], 0.95, 0.80).unwrap();
        // Frozen from the independent 2x2 inversion in tests/readout.rs.
        assert!((c.p[0] - 0.84).abs() < 1e-12 && (c.p[1] - 0.16).abs() < 1e-12, "{:?}", c.p);
    }

    #[test]
    fn clamps_and_flags() {
        let c = readout_correct([1.0, 0.0], 0.95, 0.9).unwrap();
        assert!(c.raw[0] > 1.0);
        assert_eq!(c.p, [1.0, 0.0]);
        assert!(c.clamped);
    }

    #[test]
    fn singular() {
        assert_eq!(readout_correct([0.5, 0.5], 0.6, 0.4), Err(ExperimentError::Singular(1.0)));
    }
}
