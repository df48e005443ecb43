// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Transmitter configuration.

use serde::{Deserialize, Serialize};

use crate::error::{ControllerError, Result};

/// Width of the phase accumulator, FTW and reference phase.
pub const PHASE_BITS: u32 = 22;
/// Modulus of all phase arithmetic.
pub const PHASE_MODULUS: u32 = 1 << PHASE_BITS;
pub const PHASE_MASK: u32 = PHASE_MODULUS - 1;

pub const ENVELOPE_CAPACITY: usize = 40960;
pub const TABLE_CAPACITY: usize = 8;
pub const LIST_CAPACITY: usize = 2048;
pub const NCOS_PER_BANK: usize = 16;
pub const BANKS: usize = 2;

/// Analog front-end impairments applied during upconversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Impairments {
    /// LO feedthrough relative to a full-scale carrier. `None` disables it.
    pub lo_leakage_dbc: Option<f64>,
    /// Amplitude ratio of the Q branch to the I branch (1.0 is ideal).
    pub iq_gain_mismatch: f64,
    /// Quadrature skew of the mixer in radians.
    pub iq_phase_error: f64,
}

impl Default for Impairments {
    fn default() -> Self {
        Self {
            lo_leakage_dbc: None,
            iq_gain_mismatch: 1.0,
            iq_phase_error: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TxConfig {
    pub f_clk: f64,
    pub lo_freq: f64,
    pub dac_bits: u32,
    pub amp_bits: u32,
    pub phase_mod_bits: u32,
    pub pac_addr_bits: u32,
    pub gain_db: f64,
    /// Route through the frequency-tripled output; only the carrier metadata changes.
    pub rf_high: bool,
    pub impairments: Impairments,
}

impl Default for TxConfig {
    fn default() -> Self {
        Self {
            f_clk: 1e9,
            lo_freq: 13.54e9,
            dac_bits: 10,
            amp_bits: 10,
            phase_mod_bits: 10,
            pac_addr_bits: 10,
            gain_db: 0.0,
            rf_high: false,
            impairments: Impairments::default(),
        }
    }
}

impl TxConfig {
    /// Wide converters and a full-resolution PAC. Used where quantization must
    /// stay far below a numerical tolerance.
    pub fn high_resolution() -> Self {
        Self {
            dac_bits: 24,
            amp_bits: 24,
            phase_mod_bits: 22,
            pac_addr_bits: 22,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.f_clk.is_finite() && self.f_clk > 0.0) {
            problems.push(format!("f_clk must be positive, got {}", self.f_clk));
        }
        if !(2e9..=20e9).contains(&self.lo_freq) {
            problems.push(format!("lo_freq {} Hz outside [2, 20] GHz", self.lo_freq));
        }
        if !(0.0..=40.0).contains(&self.gain_db) {
            problems.push(format!("gain_db {} outside [0, 40]", self.gain_db));
        }
        for (name, v, lo, hi) in [
            ("dac_bits", self.dac_bits, 2, 24),
            ("amp_bits", self.amp_bits, 2, 24),
            ("phase_mod_bits", self.phase_mod_bits, 1, PHASE_BITS),
            ("pac_addr_bits", self.pac_addr_bits, 2, PHASE_BITS),
        ] {
            if !(lo..=hi).contains(&v) {
                problems.push(format!("{name} = {v} outside [{lo}, {hi}]"));
            }
        }
        let imp = &self.impairments;
        if let Some(l) = imp.lo_leakage_dbc {
            if !(l.is_finite() && l <= 0.0) {
                problems.push(format!("lo_leakage_dbc must be finite and <= 0, got {l}"));
            }
        }
        if !(imp.iq_gain_mismatch.is_finite() && imp.iq_gain_mismatch > 0.0) {
            problems.push("iq_gain_mismatch must be positive".into());
        }
        if !(imp.iq_phase_error.is_finite() && imp.iq_phase_error.abs() < std::f64::consts::FRAC_PI_2) {
            problems.push("iq_phase_error must lie in (-pi/2, pi/2)".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ControllerError::Config(problems.join("; ")))
        }
    }

    /// Linear voltage gain.
    pub fn gain_linear(&self) -> f64 {
        10f64.powf(self.gain_db / 20.0)
    }

    /// Carrier frequency as seen at the selected output.
    pub fn carrier_freq(&self) -> f64 {
        if self.rf_high {
            3.0 * self.lo_freq
        } else {
            self.lo_freq
        }
    }

    pub fn dac_full_scale(&self) -> f64 {
        (1u64 << (self.dac_bits - 1)) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        TxConfig::default().validate().unwrap();
        TxConfig::high_resolution().validate().unwrap();
    }

    #[test]
    fn collects_every_problem() {
        let cfg = TxConfig {
            gain_db: 41.0,
            lo_freq: 1e9,
            dac_bits: 30,
            ..TxConfig::default()
        };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("gain_db"));
        assert!(msg.contains("lo_freq"));
        assert!(msg.contains("dac_bits"));
    }

    #[test]
    fn gain_edges() {
        for g in [0.0, 40.0] {
            TxConfig { gain_db: g, ..Default::default() }.validate().unwrap();
        }
        assert!((TxConfig { gain_db: 20.0, ..Default::default() }.gain_linear() - 10.0).abs() < 1e-12);
    }
}
