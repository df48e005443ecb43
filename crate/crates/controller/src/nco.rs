// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Numerically controlled oscillator with a 22-bit phase accumulator.

use serde::{Deserialize, Serialize};

use crate::config::{PHASE_MASK, PHASE_MODULUS};
use crate::error::{ControllerError, Result};

/// Frequency step of one FTW LSB.
pub fn resolution(f_clk: f64) -> f64 {
    f_clk / PHASE_MODULUS as f64
}

/// Tuning word for a frequency in `[0, f_clk/2)`. Rounds half away from zero.
pub fn freq_to_ftw(f: f64, f_clk: f64) -> Result<u32> {
    if !(f.is_finite() && f >= 0.0 && f < f_clk / 2.0) {
        return Err(ControllerError::NyquistRange { freq_hz: f, f_clk_hz: f_clk });
    }
    Ok((f * PHASE_MODULUS as f64 / f_clk).round() as u32)
}

/// Tuning word for a signed baseband offset in `(-f_clk/2, f_clk/2)`,
/// stored as a 22-bit two's complement word.
pub fn offset_to_ftw(offset: f64, f_clk: f64) -> Result<u32> {
    if !(offset.is_finite() && offset.abs() < f_clk / 2.0) {
        return Err(ControllerError::NyquistRange { freq_hz: offset, f_clk_hz: f_clk });
    }
    let steps = (offset * PHASE_MODULUS as f64 / f_clk).round() as i64;
    Ok((steps as u32) & PHASE_MASK)
}

/// Synthesized frequency of an FTW read as unsigned.
pub fn ftw_to_freq(ftw: u32, f_clk: f64) -> f64 {
    (ftw & PHASE_MASK) as f64 * resolution(f_clk)
}

/// Synthesized frequency of an FTW read as two's complement.
pub fn ftw_to_offset(ftw: u32, f_clk: f64) -> f64 {
    signed_phase(ftw) as f64 * resolution(f_clk)
}

/// Interpret a 22-bit word as two's complement.
pub fn signed_phase(word: u32) -> i32 {
    let w = (word & PHASE_MASK) as i32;
    if w >= (PHASE_MODULUS / 2) as i32 {
        w - PHASE_MODULUS as i32
    } else {
        w
    }
}

/// Phase word for an angle in radians, rounded half away from zero.
pub fn radians_to_phase(theta: f64) -> u32 {
    let turns = theta / std::f64::consts::TAU;
    let steps = (turns * PHASE_MODULUS as f64).round() as i64;
    (steps.rem_euclid(PHASE_MODULUS as i64)) as u32
}

pub fn phase_to_radians(word: u32) -> f64 {
    (word & PHASE_MASK) as f64 / PHASE_MODULUS as f64 * std::f64::consts::TAU
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcoState {
    pub ftw: u32,
    pub phase_acc: u32,
    pub ref_phase: u32,
    pub active: bool,
}

impl NcoState {
    pub fn new(ftw: u32, ref_phase: u32) -> Self {
        Self {
            ftw: ftw & PHASE_MASK,
            phase_acc: 0,
            ref_phase: ref_phase & PHASE_MASK,
            active: false,
        }
    }

    /// Advance one clock and return the instantaneous phase.
    pub fn step(&mut self) -> u32 {
        self.phase_acc = (self.phase_acc + self.ftw) & PHASE_MASK;
        self.phase()
    }

    /// Advance `n` clocks at once; same result as `n` calls to [`step`](Self::step).
    pub fn advance(&mut self, n: u64) {
        let inc = (n.wrapping_mul(self.ftw as u64) & PHASE_MASK as u64) as u32;
        self.phase_acc = (self.phase_acc + inc) & PHASE_MASK;
    }

    pub fn phase(&self) -> u32 {
        (self.phase_acc + self.ref_phase) & PHASE_MASK
    }

    pub fn add_ref_phase(&mut self, delta: u32) {
        self.ref_phase = (self.ref_phase + (delta & PHASE_MASK)) & PHASE_MASK;
    }
}

/// Single NCO clock step.
pub fn nco_step(state: &mut NcoState) -> u32 {
    state.step()
}
