// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! I/Q upconversion to an RF analytic signal.
//!
//! The complex envelope is `z = q + j*i` in units of DAC full scale, so a
//! positive FTW lands at `carrier + f_nco`. The real RF output is
//! `Re{z * exp(j*2*pi*carrier*t)}`.

use num_complex::Complex64;

use crate::config::TxConfig;
use crate::execute::BasebandWaveform;

#[derive(Debug, Clone, PartialEq)]
pub struct RfSignal {
    /// Frequency that maps to baseband 0 Hz.
    pub carrier_freq: f64,
    pub sample_rate: f64,
    pub start_time: f64,
    pub envelope: Vec<Complex64>,
}

impl RfSignal {
    pub fn len(&self) -> usize {
        self.envelope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.envelope.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.len() as f64 / self.sample_rate
    }
}

/// Mixer coefficients `(mu, nu)` such that the impaired envelope is `mu*z + nu*conj(z)`.
pub fn mixer_coefficients(gain_mismatch: f64, phase_error: f64) -> (Complex64, Complex64) {
    let g = Complex64::from_polar(gain_mismatch, phase_error);
    ((1.0 + g) / 2.0, (1.0 - g) / 2.0)
}

/// Image tone level relative to the wanted sideband, in dB.
pub fn image_rejection_db(gain_mismatch: f64, phase_error: f64) -> f64 {
    let (mu, nu) = mixer_coefficients(gain_mismatch, phase_error);
    20.0 * (nu.norm() / mu.norm()).log10()
}

pub fn upconvert(bb: &BasebandWaveform, cfg: &TxConfig) -> RfSignal {
    let fs = bb.full_scale();
    let imp = cfg.impairments;
    let (mu, nu) = mixer_coefficients(imp.iq_gain_mismatch, imp.iq_phase_error);
    let leak = imp.lo_leakage_dbc.map_or(0.0, |d| 10f64.powf(d / 20.0));
    let gain = cfg.gain_linear();
    let ideal = nu == Complex64::new(0.0, 0.0);
    let envelope = bb
        .i
        .iter()
        .zip(&bb.q)
        .map(|(&i, &q)| {
            let z = Complex64::new(q as f64 / fs, i as f64 / fs);
            let y = if ideal { z } else { mu * z + nu * z.conj() };
            (y + leak) * gain
        })
        .collect();
    RfSignal {
        carrier_freq: cfg.carrier_freq(),
        sample_rate: bb.sample_rate,
        start_time: bb.start_time,
        envelope,
    }
}
