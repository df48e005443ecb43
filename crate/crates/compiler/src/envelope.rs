// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Burst envelope synthesis.

use cryotwin_controller::config::ENVELOPE_CAPACITY;
use cryotwin_controller::EnvelopeEntry;

use crate::error::{CompileError, Result};
use crate::ir::Shape;

/// Value of the Gaussian tail cut off at the edges, three sigma out.
const GAUSS_EDGE: f64 = -4.5;

/// Unit-peak shape samples before quantization.
pub fn shape_samples(shape: Shape, samples: usize) -> Vec<f64> {
    match shape {
        Shape::Rect => vec![1.0; samples],
        Shape::Gaussian => {
            // Distance from the centre in units of sigma = n/6, so the first sample is exactly -3.
            let n = samples as f64;
            let e0 = GAUSS_EDGE.exp();
            (0..samples)
                .map(|k| {
                    let u = (2.0 * k as f64 - n) * 3.0 / n;
                    ((-0.5 * u * u).exp() - e0) / (1.0 - e0)
                })
                .collect()
        }
    }
}

/// Quantized envelope of `samples` words with peak `amplitude` (fraction of full scale).
pub fn synthesize_envelope(
    shape: Shape,
    samples: usize,
    amplitude: f64,
    amp_bits: u32,
    phase_mod_bits: u32,
) -> Result<Vec<EnvelopeEntry>> {
    if samples < 2 {
        return Err(CompileError::TooShort(samples));
    }
    if samples > ENVELOPE_CAPACITY {
        return Err(cryotwin_controller::ControllerError::Capacity {
            memory: cryotwin_controller::Memory::Envelope,
            limit: ENVELOPE_CAPACITY,
            requested: samples,
        }
        .into());
    }
    if !(amplitude.is_finite() && (0.0..1.0).contains(&amplitude)) {
        return Err(CompileError::Amplitude(amplitude));
    }
    shape_samples(shape, samples)
        .into_iter()
        .map(|g| Ok(EnvelopeEntry::from_fraction(amplitude * g, 0, amp_bits, phase_mod_bits)?))
        .collect()
}

/// Sum of the quantized amplitudes as fractions of full scale.
pub fn envelope_area(env: &[EnvelopeEntry], amp_bits: u32) -> f64 {
    env.iter().map(|e| e.fraction(amp_bits)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_is_flat() {
        let e = synthesize_envelope(Shape::Rect, 5000, 0.5, 10, 10).unwrap();
        assert_eq!(e.len(), 5000);
        assert!(e.iter().all(|w| w.amplitude == 256 && w.phase_mod == 0));
    }

    #[test]
    fn gaussian_peak_and_symmetry() {
        let g = shape_samples(Shape::Gaussian, 1000);
        assert_eq!(g[0], 0.0);
        let peak = (0..1000).max_by(|&a, &b| g[a].total_cmp(&g[b])).unwrap();
        assert_eq!(peak, 500);
        assert!((g[500] - 1.0).abs() < 1e-15);
        for k in 1..500 {
            assert!((g[500 - k] - g[500 + k]).abs() < 1e-12);
        }
        let e = synthesize_envelope(Shape::Gaussian, 1000, 0.5, 10, 10).unwrap();
        assert_eq!(e[500].amplitude, 256);
        assert_eq!(e[0].amplitude, 0);
    }

    #[test]
    fn limits() {
        assert_eq!(synthesize_envelope(Shape::Rect, 1, 0.5, 10, 10), Err(CompileError::TooShort(1)));
        assert_eq!(synthesize_envelope(Shape::Rect, 4, 1.0, 10, 10), Err(CompileError::Amplitude(1.0)));
        assert!(synthesize_envelope(Shape::Rect, ENVELOPE_CAPACITY + 1, 0.5, 10, 10).unwrap_err().is_capacity());
        assert!(synthesize_envelope(Shape::Rect, ENVELOPE_CAPACITY, 0.5, 10, 10).is_ok());
    }
}
