// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Windowed FFT power spectra of analytic RF signals.

use cryotwin_controller::RfSignal;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{MetricsError, Result};

/// Spectra never report below this level.
pub const DB_FLOOR: f64 = -400.0;

/// Default transform length: about 954 Hz bins at 1 GS/s.
pub const DEFAULT_FFT_LEN: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    Rectangular,
    Hann,
    BlackmanHarris,
}

impl Window {
    pub const ALL: [Window; 3] = [Window::Rectangular, Window::Hann, Window::BlackmanHarris];

    /// Periodic window coefficients.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        let x = |k: usize| std::f64::consts::TAU * k as f64 / n as f64;
        match self {
            Window::Rectangular => vec![1.0; n],
            Window::Hann => (0..n).map(|k| 0.5 - 0.5 * x(k).cos()).collect(),
            Window::BlackmanHarris => (0..n)
                .map(|k| {
                    let t = x(k);
                    0.35875 - 0.48829 * t.cos() + 0.14128 * (2.0 * t).cos() - 0.01168 * (3.0 * t).cos()
                })
                .collect(),
        }
    }

    /// Half-width in bins of the main lobe, widened by one for scalloping.
    pub fn lobe_half_width(self) -> usize {
        match self {
            Window::Rectangular => 1,
            Window::Hann => 2,
            Window::BlackmanHarris => 4,
        }
    }
}

/// Power spectrum in ascending frequency order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub carrier_freq: f64,
    pub sample_rate: f64,
    pub window: Window,
    /// Bin spacing in Hz.
    pub bin_hz: f64,
    /// Equivalent noise bandwidth of one bin, in bins.
    pub enbw_bins: f64,
    /// Per-bin power scaled so a coherent tone of amplitude `a` reads `a^2`.
    pub power: Vec<f64>,
    /// Index of the strongest bin.
    pub main_bin: usize,
    /// Power of the main tone integrated over its lobe.
    pub main_power: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    /// Resolution bandwidth in Hz.
    pub fn rbw(&self) -> f64 {
        self.bin_hz * self.enbw_bins
    }

    /// Baseband offset of bin `k`.
    pub fn offset(&self, k: usize) -> f64 {
        (k as f64 - (self.len() / 2) as f64) * self.bin_hz
    }

    /// Absolute RF frequency of bin `k`.
    pub fn freq(&self, k: usize) -> f64 {
        self.carrier_freq + self.offset(k)
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.freq(k)).collect()
    }

    /// Nearest bin to an absolute frequency, wrapping around the sample rate.
    pub fn bin_of(&self, freq: f64) -> usize {
        let n = self.len() as i64;
        let k = ((freq - self.carrier_freq) / self.bin_hz).round() as i64 + n / 2;
        k.rem_euclid(n) as usize
    }

    /// Level of bin `k` relative to the main tone.
    pub fn dbc(&self, k: usize) -> f64 {
        to_db(self.power[k] / self.main_power)
    }

    pub fn dbc_all(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.dbc(k)).collect()
    }

    /// Bins `center - w ..= center + w`, wrapped.
    pub fn around(&self, center: usize, w: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.len() as i64;
        (-(w as i64)..=w as i64).map(move |d| (center as i64 + d).rem_euclid(n) as usize)
    }

    /// Tone power at bin `k`: lobe sum corrected by the noise bandwidth.
    pub fn tone_power(&self, k: usize) -> f64 {
        self.around(k, self.window.lobe_half_width()).map(|j| self.power[j]).sum::<f64>() / self.enbw_bins
    }

    /// Total power, lobe-integrated the same way as a tone.
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum::<f64>() / self.enbw_bins
    }

    /// CSV with header `freq_hz,dbc`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 32 + 16);
        out.push_str("freq_hz,dbc\n");
        for k in 0..self.len() {
            out.push_str(&format!("{:.3},{:.4}\n", self.freq(k), self.dbc(k)));
        }
        out
    }

    /// Span between the outermost bins at or above `level_dbc`.
    pub fn width_at(&self, level_dbc: f64) -> f64 {
        let above: Vec<usize> = (0..self.len()).filter(|&k| self.dbc(k) >= level_dbc).collect();
        match (above.first(), above.last()) {
            (Some(a), Some(b)) => (b - a) as f64 * self.bin_hz,
            _ => 0.0,
        }
    }
}

pub fn to_db(ratio: f64) -> f64 {
    if ratio > 0.0 {
        (10.0 * ratio.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Power spectrum of the first `fft_len` samples of `rf`.
pub fn compute_spectrum(rf: &RfSignal, window: Window, fft_len: usize) -> Result<Spectrum> {
    if rf.is_empty() {
        return Err(MetricsError::EmptyWaveform);
    }
    if fft_len == 0 || fft_len > rf.len() {
        return Err(MetricsError::FftLength { fft_len, available: rf.len() });
    }
    let w = window.coefficients(fft_len);
    let sum_w: f64 = w.iter().sum();
    let sum_w2: f64 = w.iter().map(|x| x * x).sum();
    let mut buf: Vec<Complex64> = rf.envelope[..fft_len].iter().zip(&w).map(|(z, w)| z * w).collect();
    FftPlanner::new().plan_fft_forward(fft_len).process(&mut buf);

    let scale = 1.0 / (sum_w * sum_w);
    let half = fft_len / 2;
    let power: Vec<f64> = (0..fft_len).map(|k| buf[(k + fft_len - half) % fft_len].norm_sqr() * scale).collect();
    let main_bin = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let mut s = Spectrum {
        carrier_freq: rf.carrier_freq,
        sample_rate: rf.sample_rate,
        window,
        bin_hz: rf.sample_rate / fft_len as f64,
        enbw_bins: fft_len as f64 * sum_w2 / (sum_w * sum_w),
        power,
        main_bin,
        main_power: 0.0,
    };
    s.main_power = s.tone_power(main_bin);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(n: usize, bin: i64, amp: f64) -> RfSignal {
        let envelope = (0..n)
            .map(|k| Complex64::from_polar(amp, std::f64::consts::TAU * (bin * k as i64) as f64 / n as f64))
            .collect();
        RfSignal { carrier_freq: 10e9, sample_rate: 1e9, start_time: 0.0, envelope }
    }

    #[test]
    fn enbw_values() {
        let s = |w| compute_spectrum(&tone(4096, 3, 1.0), w, 4096).unwrap().enbw_bins;
        assert!((s(Window::Rectangular) - 1.0).abs() < 1e-12);
        assert!((s(Window::Hann) - 1.5).abs() < 1e-9);
        assert!((s(Window::BlackmanHarris) - 2.0044).abs() < 1e-3);
    }

    #[test]
    fn coherent_tone_single_bin() {
        let s = compute_spectrum(&tone(4096, -17, 0.5), Window::Rectangular, 4096).unwrap();
        assert_eq!(s.offset(s.main_bin), -17.0 * 1e9 / 4096.0);
        assert!((s.main_power - 0.25).abs() < 1e-12);
        for k in 0..s.len() {
            if k != s.main_bin {
                assert!(s.dbc(k) < -250.0, "bin {k} at {}", s.dbc(k));
            }
        }
    }

    #[test]
    fn parseval_rectangular() {
        let mut rf = tone(1000, 7, 0.3);
        for (k, z) in rf.envelope.iter_mut().enumerate() {
            *z += Complex64::new(((k * 7919) % 13) as f64 * 1e-3, 0.0);
        }
        let s = compute_spectrum(&rf, Window::Rectangular, 1000).unwrap();
        let time: f64 = rf.envelope.iter().map(|z| z.norm_sqr()).sum::<f64>() / 1000.0;
        assert!((10.0 * (s.total_power() / time).log10()).abs() < 0.1);
    }

    #[test]
    fn tone_power_window_invariant() {
        for amp in [1.0, 0.1] {
            let p: Vec<f64> = Window::ALL
                .iter()
                .map(|&w| compute_spectrum(&tone(8192, 100, amp), w, 8192).unwrap().main_power)
                .collect();
            for x in &p {
                assert!((10.0 * (x / p[0]).log10()).abs() < 0.2);
            }
        }
    }

    #[test]
    fn errors() {
        let empty = RfSignal { carrier_freq: 1.0, sample_rate: 1.0, start_time: 0.0, envelope: vec![] };
        assert!(matches!(compute_spectrum(&empty, Window::Hann, 8), Err(MetricsError::EmptyWaveform)));
        assert!(compute_spectrum(&tone(8, 1, 1.0), Window::Hann, 16).is_err());
    }
}
