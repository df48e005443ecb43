// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Constructed test signals with known spectral content.

use cryotwin_controller::pac::quantize;
use cryotwin_controller::RfSignal;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Frequency of FFT bin `k` for an `n`-point transform, for coherent test tones.
pub fn coherent_offset(k: i64, n: usize, sample_rate: f64) -> f64 {
    k as f64 * sample_rate / n as f64
}

/// Unquantized complex tone at baseband `offset`.
pub fn tone(n: usize, sample_rate: f64, carrier_freq: f64, offset: f64, amplitude: f64, phase: f64) -> RfSignal {
    let mut rf = RfSignal { carrier_freq, sample_rate, start_time: 0.0, envelope: vec![Complex64::new(0.0, 0.0); n] };
    add_tone(&mut rf, offset, amplitude, phase);
    rf
}

pub fn add_tone(rf: &mut RfSignal, offset: f64, amplitude: f64, phase: f64) {
    for (k, z) in rf.envelope.iter_mut().enumerate() {
        // Reduce the phase argument modulo one turn to keep long records accurate.
        let turns = (offset / rf.sample_rate * k as f64).fract();
        *z += Complex64::from_polar(amplitude, std::f64::consts::TAU * turns + phase);
    }
}

/// Add complex white Gaussian noise with standard deviation `sigma` per component.
pub fn add_white_noise(rf: &mut RfSignal, sigma: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    for z in &mut rf.envelope {
        *z += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
    }
}

/// Tone quantized to `bits` per component with subtractive uniform dither,
/// so the error is white with variance `lsb^2 / 12` per component.
pub fn dithered_tone(bits: u32, n: usize, sample_rate: f64, offset: f64, amplitude: f64, seed: u64) -> RfSignal {
    let mut rf = tone(n, sample_rate, 0.0, offset, amplitude, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lsb = 1.0 / (1u64 << (bits - 1)) as f64;
    let mut q = |x: f64| {
        let d = (rng.random::<f64>() - 0.5) * lsb;
        quantize(x + d, bits) as f64 * lsb - d
    };
    for z in &mut rf.envelope {
        *z = Complex64::new(q(z.re), q(z.im));
    }
    rf
}

/// Memoryless cubic distortion applied to each of the I and Q branches.
pub fn branch_cubic(rf: &mut RfSignal, alpha: f64) {
    for z in &mut rf.envelope {
        *z = Complex64::new(z.re + alpha * z.re.powi(3), z.im + alpha * z.im.powi(3));
    }
}
