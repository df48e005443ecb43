// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Phase-to-amplitude conversion and converter quantization.

use serde::{Deserialize, Serialize};

use crate::config::{TxConfig, PHASE_BITS, PHASE_MASK};
use crate::error::{ControllerError, Result};

/// One envelope memory word: amplitude code and a phase offset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnvelopeEntry {
    /// Two's complement code on the `amp_bits` grid; full scale is `2^(amp_bits-1)`.
    pub amplitude: i32,
    /// Phase offset in units of one turn / `2^phase_mod_bits`.
    pub phase_mod: u32,
}

impl EnvelopeEntry {
    pub fn new(amplitude: i32, phase_mod: u32, amp_bits: u32, phase_mod_bits: u32) -> Result<Self> {
        let half = 1i64 << (amp_bits - 1);
        if !(-half..half).contains(&(amplitude as i64)) {
            return Err(ControllerError::Width { value: amplitude as i64, bits: amp_bits });
        }
        if phase_mod as u64 >= 1u64 << phase_mod_bits {
            return Err(ControllerError::Width { value: phase_mod as i64, bits: phase_mod_bits });
        }
        Ok(Self { amplitude, phase_mod })
    }

    /// Quantize a fraction in `[-1, 1)` onto the amplitude grid.
    pub fn from_fraction(fraction: f64, phase_mod: u32, amp_bits: u32, phase_mod_bits: u32) -> Result<Self> {
        if !(fraction.is_finite() && (-1.0..1.0).contains(&fraction)) {
            return Err(ControllerError::Config(format!("envelope amplitude {fraction} outside [-1, 1)")));
        }
        Self::new(quantize(fraction, amp_bits), phase_mod, amp_bits, phase_mod_bits)
    }

    pub fn fraction(&self, amp_bits: u32) -> f64 {
        self.amplitude as f64 / (1u64 << (amp_bits - 1)) as f64
    }
}

/// Round half away from zero onto a signed `bits`-wide grid, saturating at the rails.
pub fn quantize(x: f64, bits: u32) -> i32 {
    let half = (1i64 << (bits - 1)) as f64;
    let code = (x * half).round();
    code.clamp(-half, half - 1.0) as i32
}

/// Quarter-wave sine table addressed by the top `addr_bits` of the phase.
#[derive(Debug, Clone, Copy)]
pub struct Pac {
    addr_bits: u32,
    amp_scale: f64,
    dac_bits: u32,
    phase_mod_shift: u32,
}

impl Pac {
    pub fn new(cfg: &TxConfig) -> Self {
        Self {
            addr_bits: cfg.pac_addr_bits,
            amp_scale: 1.0 / (1u64 << (cfg.amp_bits - 1)) as f64,
            dac_bits: cfg.dac_bits,
            phase_mod_shift: PHASE_BITS - cfg.phase_mod_bits,
        }
    }

    /// (sin, cos) of the table address, built from one quadrant so that
    /// quarter-turn symmetries are exact.
    pub fn sin_cos(&self, addr: u32) -> (f64, f64) {
        let qbits = self.addr_bits - 2;
        let quarter = 1u32 << qbits;
        let quadrant = addr >> qbits;
        let r = addr & (quarter - 1);
        let s = |x: u32| (std::f64::consts::FRAC_PI_2 * x as f64 / quarter as f64).sin();
        let (a, b) = (s(r), s(quarter - r));
        match quadrant & 3 {
            0 => (a, b),
            1 => (b, -a),
            2 => (-a, -b),
            _ => (-b, a),
        }
    }

    /// Table address for an NCO phase after adding the envelope phase offset.
    pub fn address(&self, phase: u32, phase_mod: u32) -> u32 {
        let effective = (phase + (phase_mod << self.phase_mod_shift)) & PHASE_MASK;
        effective >> (PHASE_BITS - self.addr_bits)
    }

    pub fn convert(&self, phase: u32, env: EnvelopeEntry) -> (i32, i32) {
        if env.amplitude == 0 {
            return (0, 0);
        }
        let (s, c) = self.sin_cos(self.address(phase, env.phase_mod));
        let a = env.amplitude as f64 * self.amp_scale;
        (quantize(a * s, self.dac_bits), quantize(a * c, self.dac_bits))
    }
}

/// Map a phase sample and envelope word to DAC codes `(i, q)`.
pub fn pac_convert(phase: u32, env: EnvelopeEntry, cfg: &TxConfig) -> (i32, i32) {
    Pac::new(cfg).convert(phase, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> TxConfig {
        TxConfig::default()
    }

    #[test]
    fn zero_phase_full_amplitude() {
        let c = cfg();
        let env = EnvelopeEntry::new(511, 0, 10, 10).unwrap();
        assert_eq!(pac_convert(0, env, &c), (0, 511));
    }

    #[test]
    fn quarter_turn() {
        let c = cfg();
        let env = EnvelopeEntry::new(511, 0, 10, 10).unwrap();
        assert_eq!(pac_convert(1 << 20, env, &c), (511, 0));
        assert_eq!(pac_convert(2 << 20, env, &c), (0, -511));
        assert_eq!(pac_convert(3 << 20, env, &c), (-511, 0));
    }

    #[test]
    fn zero_amplitude_is_silent() {
        let c = cfg();
        for p in [0u32, 1, 12345, 1 << 21, PHASE_MASK] {
            assert_eq!(pac_convert(p, EnvelopeEntry::default(), &c), (0, 0));
        }
    }

    #[test]
    fn phase_mod_is_added_before_lookup() {
        let c = cfg();
        // A quarter turn of phase_mod at 10 bits is 256.
        let env = EnvelopeEntry::new(511, 256, 10, 10).unwrap();
        assert_eq!(pac_convert(0, env, &c), (511, 0));
    }

    #[test]
    fn truncation_not_rounding() {
        let c = cfg();
        // 2^12 - 1 phase LSBs is still address 0 with a 10-bit table.
        assert_eq!(Pac::new(&c).address((1 << 12) - 1, 0), 0);
        assert_eq!(Pac::new(&c).address(1 << 12, 0), 1);
    }

    #[test]
    fn quantize_rails() {
        assert_eq!(quantize(1.0, 10), 511);
        assert_eq!(quantize(-1.0, 10), -512);
        assert_eq!(quantize(0.5 / 512.0, 10), 1);
        assert_eq!(quantize(-0.5 / 512.0, 10), -1);
    }

    #[test]
    fn amplitude_grid_has_two_to_the_bits_levels() {
        let bits = 6;
        let mut codes = std::collections::BTreeSet::new();
        for k in -4000..4000 {
            let f = k as f64 / 4000.0;
            if let Ok(e) = EnvelopeEntry::from_fraction(f, 0, bits, 4) {
                codes.insert(e.amplitude);
            }
        }
        assert_eq!(codes.len(), 1 << bits);
        assert!(EnvelopeEntry::from_fraction(1.0, 0, bits, 4).is_err());
        assert!(EnvelopeEntry::new(32, 0, bits, 4).is_err());
        assert!(EnvelopeEntry::new(0, 16, bits, 4).is_err());
    }

    proptest! {
        #[test]
        fn matches_direct_trig(addr_bits in 2u32..=22, phase in 0u32..(1 << 22), amp in -512i32..512) {
            let c = TxConfig { pac_addr_bits: addr_bits, dac_bits: 12, ..TxConfig::default() };
            let pac = Pac::new(&c);
            let env = EnvelopeEntry::new(amp, 0, 10, 10).unwrap();
            let (i, q) = pac.convert(phase, env);
            let addr = phase >> (22 - addr_bits);
            let theta = std::f64::consts::TAU * addr as f64 / (1u64 << addr_bits) as f64;
            let a = amp as f64 / 512.0;
            prop_assert!((i - quantize(a * theta.sin(), 12)).abs() <= 1);
            prop_assert!((q - quantize(a * theta.cos(), 12)).abs() <= 1);
            prop_assert!((-2048..2048).contains(&i) && (-2048..2048).contains(&q));
        }

        #[test]
        fn quarter_shift_rotates_exactly(phase in 0u32..(1 << 22), amp in -512i32..512) {
            let c = TxConfig::default();
            let pac = Pac::new(&c);
            let env = EnvelopeEntry::new(amp, 0, 10, 10).unwrap();
            let (i0, q0) = pac.convert(phase, env);
            let (i1, q1) = pac.convert((phase + (1 << 20)) & PHASE_MASK, env);
            // Rotating by +90 degrees maps (sin, cos) to (cos, -sin); rails make -(-512) clip to 511.
            prop_assert_eq!(i1, q0);
            prop_assert_eq!(q1, (-i0).min(511));
        }
    }
}
