// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scalar figures of merit derived from a [`Spectrum`].

use serde::{Deserialize, Serialize};

use crate::error::{MetricsError, Result};
use crate::spectrum::{to_db, Spectrum};

/// A bin is a spur when it exceeds the local median by this much.
pub const SPUR_THRESHOLD_DB: f64 = 20.0;
/// Half-width in bins of the neighbourhood used for the local median.
pub const MEDIAN_HALF_WIDTH: usize = 32;

/// Closed frequency interval in absolute Hz.
pub type Interval = (f64, f64);

/// LO leakage exclusion: carrier +/- 2 resolution bandwidths.
pub fn default_exclusions(s: &Spectrum) -> Vec<Interval> {
    let w = 2.0 * s.rbw();
    vec![(s.carrier_freq - w, s.carrier_freq + w)]
}

fn excluded(s: &Spectrum, k: usize, exclusions: &[Interval]) -> bool {
    let f = s.freq(k);
    exclusions.iter().any(|&(a, b)| f >= a && f <= b)
}

fn in_main_lobe(s: &Spectrum, k: usize) -> bool {
    let n = s.len() as i64;
    let d = (k as i64 - s.main_bin as i64).rem_euclid(n);
    let d = d.min(n - d);
    d <= s.window.lobe_half_width() as i64
}

fn local_median(s: &Spectrum, k: usize, scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend(s.around(k, MEDIAN_HALF_WIDTH).map(|j| s.power[j]));
    let mid = scratch.len() / 2;
    *scratch.select_nth_unstable_by(mid, |a, b| a.total_cmp(b)).1
}

/// Bins in `bins` that qualify as spurs under the local-median rule.
pub fn find_spurs(s: &Spectrum, bins: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let ratio = 10f64.powf(SPUR_THRESHOLD_DB / 10.0);
    let mut scratch = Vec::with_capacity(2 * MEDIAN_HALF_WIDTH + 1);
    bins.into_iter()
        .filter(|&k| {
            let m = local_median(s, k, &mut scratch);
            s.power[k] > ratio * m
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SfdrResult {
    pub sfdr_db: f64,
    pub spur_freq: f64,
    pub spur_dbc: f64,
}

/// Carrier minus the largest component outside the main lobe and the exclusions.
/// `band` limits the search to an absolute frequency interval.
pub fn sfdr(s: &Spectrum, exclusions: &[Interval], band: Option<Interval>) -> Result<SfdrResult> {
    let lobe = s.window.lobe_half_width();
    let allowed = |k: usize| {
        !in_main_lobe(s, k)
            && !excluded(s, k, exclusions)
            && band.is_none_or(|(a, b)| (a..=b).contains(&s.freq(k)))
    };
    let worst = (0..s.len()).filter(|&k| allowed(k)).max_by(|&a, &b| s.power[a].total_cmp(&s.power[b]));
    let Some(k) = worst else {
        return Err(MetricsError::NothingLeft);
    };
    let p = s.around(k, lobe).filter(|&j| allowed(j)).map(|j| s.power[j]).sum::<f64>() / s.enbw_bins;
    let spur_dbc = to_db(p / s.main_power);
    Ok(SfdrResult { sfdr_db: -spur_dbc, spur_freq: s.freq(k), spur_dbc })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrOptions {
    /// Drop spur bins from the noise estimate.
    pub exclude_spurs: bool,
}

impl Default for SnrOptions {
    fn default() -> Self {
        Self { exclude_spurs: true }
    }
}

/// Signal-to-noise ratio in a band of width `integration_bw` centred on `signal_bin`.
///
/// Noise is the mean power of the remaining band bins scaled to the full band,
/// so bins removed for the tone lobe and for spurs are filled in at the noise density.
pub fn snr(s: &Spectrum, signal_bin: usize, integration_bw: f64, opts: SnrOptions) -> Result<f64> {
    if integration_bw > s.sample_rate {
        return Err(MetricsError::BandTooWide { bw: integration_bw, limit: s.sample_rate });
    }
    if integration_bw < s.rbw() * (1.0 - 1e-9) {
        return Err(MetricsError::BandTooNarrow { bw: integration_bw, rbw: s.rbw() });
    }
    let n = s.len() as i64;
    let band_bins = ((integration_bw / s.bin_hz).round() as i64).clamp(1, n);
    let lobe = s.window.lobe_half_width();
    let near = |k: usize| {
        let d = (k as i64 - signal_bin as i64).rem_euclid(n);
        d.min(n - d) as usize
    };
    let first = signal_bin as i64 - band_bins / 2;
    let mut band: Vec<usize> =
        (first..first + band_bins).map(|k| k.rem_euclid(n) as usize).filter(|&k| near(k) > lobe).collect();
    if band.is_empty() {
        // Band inside the tone lobe: take the density from the lobe's flanks.
        band = s.around(signal_bin, lobe + 8).filter(|&k| near(k) > lobe).collect();
    }
    if opts.exclude_spurs {
        let spurs = find_spurs(s, band.iter().copied());
        band.retain(|k| !spurs.contains(k));
    }
    if band.is_empty() {
        return Err(MetricsError::NothingLeft);
    }
    let density = band.iter().map(|&k| s.power[k]).sum::<f64>() / band.len() as f64;
    let noise = density * band_bins as f64 / s.enbw_bins;
    Ok(10.0 * (s.tone_power(signal_bin) / noise).log10())
}

/// Carrier-tone power over power at the LO frequency, in dB.
pub fn lo_rejection(s: &Spectrum) -> f64 {
    let k = s.bin_of(s.carrier_freq);
    -to_db(s.tone_power(k) / s.main_power)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Product {
    pub m: i32,
    pub n: i32,
    pub freq: f64,
    /// Level relative to the weaker of the two tones.
    pub dbc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoToneReport {
    pub freq_a: f64,
    pub freq_b: f64,
    pub tone_a_db: f64,
    pub tone_b_db: f64,
    pub products: Vec<Product>,
    pub largest: Option<Product>,
    /// Stronger of the two third-order products `2a-b`, `2b-a`.
    pub imd3_dbc: f64,
}

/// Powers at `m*f_a + n*f_b` (offsets from the carrier) for `|m| + |n| <= 3`.
pub fn two_tone_report(s: &Spectrum, f_a: f64, f_b: f64) -> Result<TwoToneReport> {
    let ka = s.bin_of(f_a);
    let kb = s.bin_of(f_b);
    let sep = {
        let n = s.len() as i64;
        let d = (ka as i64 - kb as i64).rem_euclid(n);
        d.min(n - d) as usize
    };
    if sep <= 2 * s.window.lobe_half_width() {
        return Err(MetricsError::Unresolved { f_a, f_b });
    }
    let pa = s.tone_power(ka);
    let pb = s.tone_power(kb);
    let weaker = pa.min(pb);
    let (oa, ob) = (f_a - s.carrier_freq, f_b - s.carrier_freq);
    let mut products = Vec::new();
    for m in -3i32..=3 {
        for n in -3i32..=3 {
            if m.abs() + n.abs() > 3 || (m, n) == (0, 0) || (m, n) == (1, 0) || (m, n) == (0, 1) {
                continue;
            }
            let freq = s.carrier_freq + m as f64 * oa + n as f64 * ob;
            let k = s.bin_of(freq);
            let d = |x: usize| {
                let nn = s.len() as i64;
                let d = (k as i64 - x as i64).rem_euclid(nn);
                d.min(nn - d) as usize
            };
            // Products landing on a tone are not distinguishable from it.
            if d(ka) <= s.window.lobe_half_width() || d(kb) <= s.window.lobe_half_width() {
                continue;
            }
            products.push(Product { m, n, freq, dbc: to_db(s.tone_power(k) / weaker) });
        }
    }
    let largest = products.iter().copied().max_by(|a, b| a.dbc.total_cmp(&b.dbc));
    let imd3_dbc = products
        .iter()
        .filter(|p| (p.m, p.n) == (2, -1) || (p.m, p.n) == (-1, 2))
        .map(|p| p.dbc)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(TwoToneReport {
        freq_a: s.freq(ka),
        freq_b: s.freq(kb),
        tone_a_db: to_db(pa),
        tone_b_db: to_db(pb),
        products,
        largest,
        imd3_dbc,
    })
}

/// Summary written next to spectrum exports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema: u32,
    pub carrier_freq_hz: f64,
    pub tone_freq_hz: f64,
    pub snr_db: f64,
    pub snr_bw_hz: f64,
    pub sfdr_db: f64,
    pub lor_db: f64,
    pub imd3_dbc: Option<f64>,
}

/// SNR in `snr_bw`, SFDR with the default LO exclusion, LO rejection.
pub fn report(s: &Spectrum, snr_bw: f64) -> Result<MetricsReport> {
    Ok(MetricsReport {
        schema: 1,
        carrier_freq_hz: s.carrier_freq,
        tone_freq_hz: s.freq(s.main_bin),
        snr_db: snr(s, s.main_bin, snr_bw, SnrOptions::default())?,
        snr_bw_hz: snr_bw,
        sfdr_db: sfdr(s, &default_exclusions(s), None)?.sfdr_db,
        lor_db: lo_rejection(s),
        imd3_dbc: None,
    })
}
