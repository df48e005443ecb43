// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{PhysicsError, Result};

/// Per-qubit readout assignment fidelities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReadoutModel {
    /// P(read 0 | state 0), index 0 = Q1.
    pub f0: [f64; 2],
    /// P(read 1 | state 1).
    pub f1: [f64; 2],
}

impl Default for ReadoutModel {
    fn default() -> Self {
        Self { f0: [1.0; 2], f1: [1.0; 2] }
    }
}

/// Which exchange setting the barrier gate selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exchange {
    /// High barrier: residual coupling `j_off`.
    Off,
    /// Low barrier: coupling `j_on`.
    On,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceModel {
    /// Larmor frequency of Q1 in Hz.
    pub f1: f64,
    /// Larmor frequency of Q2 in Hz.
    pub f2: f64,
    pub j_on: f64,
    pub j_off: f64,
    /// Rabi frequency per unit of DAC full-scale envelope, per qubit.
    pub drive_coupling: [f64; 2],
    /// Standard deviation of the quasi-static detuning, per qubit, in Hz.
    pub sigma_detune: [f64; 2],
    pub sigma_j: f64,
    pub readout: ReadoutModel,
    /// Probability that the CROT used to map Q1 onto Q2 during readout works.
    pub crot_readout_fidelity: f64,
    /// Probability of starting in |1> instead of |0>, per qubit.
    pub residual_excitation: [f64; 2],
}

/// 1 GHz clock divided by 2^22.
const GRID: f64 = 1e9 / 4194304.0;

impl Default for DeviceModel {
    /// Two qubits 24 MHz above and 90 MHz below a 13.54 GHz LO, placed on the
    /// 1 GHz NCO grid so a calibrated tone sits exactly on resonance.
    fn default() -> Self {
        Self {
            f1: 13.54e9 + 100663.0 * GRID,
            f2: 13.54e9 - 377487.0 * GRID,
            j_on: 10e6,
            j_off: 0.0,
            drive_coupling: [2e6, 2e6],
            sigma_detune: [0.0; 2],
            sigma_j: 0.0,
            readout: ReadoutModel::default(),
            crot_readout_fidelity: 1.0,
            residual_excitation: [0.0; 2],
        }
    }
}

impl DeviceModel {
    pub fn freq(&self, qubit: usize) -> f64 {
        [self.f1, self.f2][qubit]
    }

    pub fn exchange(&self, setting: Exchange) -> f64 {
        match setting {
            Exchange::Off => self.j_off,
            Exchange::On => self.j_on,
        }
    }

    /// Resonance of `qubit` when the other qubit is in `other_state`, at coupling `j`.
    pub fn conditional_freq(&self, qubit: usize, other_state: u8, j: f64) -> f64 {
        self.freq(qubit) + if other_state == 0 { -j / 2.0 } else { j / 2.0 }
    }

    /// Noise-free level energies in Hz, basis order |00>, |01>, |10>, |11> (first label Q1).
    pub fn energies(&self, j: f64) -> [f64; 4] {
        [0.0, self.f2 - j / 2.0, self.f1 - j / 2.0, self.f1 + self.f2]
    }

    pub fn noiseless(&self) -> Self {
        Self { sigma_detune: [0.0; 2], sigma_j: 0.0, ..*self }
    }

    pub fn ideal(&self) -> Self {
        Self {
            readout: ReadoutModel::default(),
            crot_readout_fidelity: 1.0,
            residual_excitation: [0.0; 2],
            ..self.noiseless()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut p = Vec::new();
        if !(self.f1.is_finite() && self.f2.is_finite() && self.f1 > 0.0 && self.f2 > 0.0) {
            p.push("qubit frequencies must be positive".to_string());
        }
        if self.f1 == self.f2 {
            p.push("f1 and f2 must differ".into());
        }
        if !(self.j_on > 0.0) {
            p.push(format!("j_on must be positive, got {}", self.j_on));
        }
        if !(self.j_off >= 0.0) {
            p.push(format!("j_off must be non-negative, got {}", self.j_off));
        }
        for q in 0..2 {
            if !(self.drive_coupling[q] >= 0.0) {
                p.push(format!("drive_coupling[{q}] must be non-negative"));
            }
            if !(self.sigma_detune[q] >= 0.0) {
                p.push(format!("sigma_detune[{q}] must be non-negative"));
            }
            for (name, f) in [("f0", self.readout.f0[q]), ("f1", self.readout.f1[q])] {
                if !(f > 0.5 && f <= 1.0) {
                    p.push(format!("readout.{name}[{q}] = {f} outside (0.5, 1]"));
                }
            }
            if !(0.0..=1.0).contains(&self.residual_excitation[q]) {
                p.push(format!("residual_excitation[{q}] outside [0, 1]"));
            }
        }
        if !(self.sigma_j >= 0.0) {
            p.push("sigma_j must be non-negative".into());
        }
        if !(0.0..=1.0).contains(&self.crot_readout_fidelity) {
            p.push("crot_readout_fidelity outside [0, 1]".into());
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(PhysicsError::Config(p.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_offsets_on_grid() {
        let d = DeviceModel::default();
        d.validate().unwrap();
        assert!((d.f1 - 13.564e9).abs() < 120.0);
        assert!((d.f2 - 13.450e9).abs() < 120.0);
        assert_eq!((d.f1 - 13.54e9) / GRID, 100663.0);
    }

    #[test]
    fn validation_lists_problems() {
        let d = DeviceModel { f2: 13.54e9 + 100663.0 * GRID, j_on: 0.0, ..DeviceModel::default() };
        let d = DeviceModel { readout: ReadoutModel { f0: [0.5, 1.0], f1: [1.0; 2] }, ..d };
        let msg = d.validate().unwrap_err().to_string();
        assert!(msg.contains("differ") && msg.contains("j_on") && msg.contains("readout.f0[0]"));
    }

    #[test]
    fn conditional_lines() {
        let d = DeviceModel::default();
        let e = d.energies(10e6);
        // Q1 flips: |00>->|10> and |01>->|11>.
        let close = |a: f64, b: f64| assert!((a - b).abs() < 1e-3, "{a} vs {b}");
        close(e[2] - e[0], d.conditional_freq(0, 0, 10e6));
        close(e[3] - e[1], d.conditional_freq(0, 1, 10e6));
        close(e[1] - e[0], d.conditional_freq(1, 0, 10e6));
        close(e[3] - e[2], d.conditional_freq(1, 1, 10e6));
    }
}
