// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_controller::*;
use cryotwin_metrics::signals::*;
use cryotwin_metrics::*;
use proptest::prelude::*;

const FS: f64 = 1e9;
const LO: f64 = 13.54e9;

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Quantization SNR of a full-scale sine, from the uniform-error model.
fn quantization_snr_db(bits: u32) -> f64 {
    let lsb: f64 = 2.0 / (1u64 << bits) as f64;
    db(0.5 / (lsb * lsb / 12.0))
}

#[test]
fn quantization_law_oracle() {
    assert!((quantization_snr_db(10) - (6.02 * 10.0 + 1.76)).abs() < 0.05);
}

#[test]
fn quantized_ten_bit_sine_noise() {
    let n = 1 << 16;
    let cfg = TxConfig { pac_addr_bits: 22, ..TxConfig::default() };
    let ftw = (1 << 22) / n as u32 * 1031;
    let w = continuous_wave(ftw, EnvelopeEntry { amplitude: 511, phase_mod: 0 }, n, &cfg);
    let s = compute_spectrum(&upconvert(&w, &cfg), Window::Rectangular, n).unwrap();
    let noise = s.total_power() - s.main_power;
    let level = db(noise / s.main_power);
    assert!((level + 61.96).abs() < 0.5, "{level}");

    let snr25 = snr(&s, s.main_bin, 25e6, SnrOptions::default()).unwrap();
    assert!(snr25 > 48.0, "{snr25}");
}

#[test]
fn dithered_snr_follows_law() {
    let n = 1 << 16;
    for bits in [8, 10, 12] {
        let lsb = 1.0 / (1u64 << (bits - 1)) as f64;
        let rf = dithered_tone(bits, n, FS, coherent_offset(4099, n, FS), 1.0 - lsb, 7);
        let s = compute_spectrum(&rf, Window::Rectangular, n).unwrap();
        let opts = SnrOptions { exclude_spurs: false };
        let got = snr(&s, s.main_bin, FS, opts).unwrap();
        let want = 6.02 * bits as f64 + 1.76;
        assert!((got - want).abs() < 1.0, "bits {bits}: {got} vs {want}");
    }
}

#[test]
fn snr_with_known_white_noise() {
    let n = 1 << 16;
    let sigma: f64 = 1e-3;
    let mut rf = tone(n, FS, LO, coherent_offset(1000, n, FS), 0.8, 0.3);
    add_white_noise(&mut rf, sigma, 11);
    let s = compute_spectrum(&rf, Window::Hann, n).unwrap();
    for bw in [25e6, 100e6] {
        // Complex noise power 2*sigma^2 spread evenly over FS.
        let want = db(0.64 / (2.0 * sigma * sigma * bw / FS));
        let got = snr(&s, s.main_bin, bw, SnrOptions::default()).unwrap();
        assert!((got - want).abs() < 0.5, "bw {bw}: {got} vs {want}");
    }
}

#[test]
fn snr_band_limits() {
    let n = 4096;
    let rf = tone(n, FS, LO, coherent_offset(10, n, FS), 1.0, 0.0);
    let s = compute_spectrum(&rf, Window::Rectangular, n).unwrap();
    assert!(matches!(snr(&s, s.main_bin, 2e9, SnrOptions::default()), Err(MetricsError::BandTooWide { .. })));
    assert!(matches!(snr(&s, s.main_bin, 1e3, SnrOptions::default()), Err(MetricsError::BandTooNarrow { .. })));
    let floor = snr(&s, s.main_bin, s.rbw(), SnrOptions::default()).unwrap();
    assert!(floor > 250.0, "{floor}");
}

#[test]
fn injected_spur_recovered() {
    let n = 1 << 18;
    let cfg = TxConfig {
        impairments: Impairments { lo_leakage_dbc: Some(-35.0), ..Impairments::default() },
        ..TxConfig::default()
    };
    let ftw = ((1u64 << 22) * 6007 / n as u64) as u32;
    let w = continuous_wave(ftw, EnvelopeEntry { amplitude: 511, phase_mod: 0 }, n, &cfg);
    let mut rf = upconvert(&w, &cfg);
    let clean = compute_spectrum(&rf, Window::BlackmanHarris, n).unwrap();
    let carrier_amp = clean.main_power.sqrt();
    add_tone(&mut rf, coherent_offset(-20011, n, FS), carrier_amp * 10f64.powf(-46.0 / 20.0), 1.0);
    let s = compute_spectrum(&rf, Window::BlackmanHarris, n).unwrap();
    let r = sfdr(&s, &default_exclusions(&s), None).unwrap();
    assert!((r.sfdr_db - 46.0).abs() < 0.1, "{r:?}");

    // Without the LO exclusion the -35 dBc leakage is the worst spur.
    let raw = sfdr(&s, &[], None).unwrap();
    assert!((raw.sfdr_db - 35.0).abs() < 0.1, "{raw:?}");
    assert!((lo_rejection(&s) - 35.0).abs() < 0.1);
}

#[test]
fn lo_leakage_level() {
    let n = 1 << 14;
    let cfg = TxConfig {
        impairments: Impairments { lo_leakage_dbc: Some(-40.0), ..Impairments::default() },
        ..TxConfig::high_resolution()
    };
    let ftw = offset_to_ftw(24e6, FS).unwrap() & !((1 << 8) - 1);
    let w = continuous_wave(ftw, EnvelopeEntry { amplitude: (1 << 23) - 1, phase_mod: 0 }, n, &cfg);
    let s = compute_spectrum(&upconvert(&w, &cfg), Window::BlackmanHarris, n).unwrap();
    assert!((lo_rejection(&s) - 40.0).abs() < 0.05, "{}", lo_rejection(&s));
}

#[test]
fn ideal_tone_sfdr_is_numerical_floor() {
    let n = 1 << 12;
    let rf = tone(n, FS, LO, coherent_offset(77, n, FS), 1.0, 0.0);
    let s = compute_spectrum(&rf, Window::Rectangular, n).unwrap();
    let r = sfdr(&s, &default_exclusions(&s), None).unwrap();
    assert!(r.sfdr_db > 250.0);
}

#[test]
fn exclusion_covering_band_is_error() {
    let n = 1 << 10;
    let rf = tone(n, FS, LO, coherent_offset(7, n, FS), 1.0, 0.0);
    let s = compute_spectrum(&rf, Window::Rectangular, n).unwrap();
    assert!(matches!(sfdr(&s, &[(LO - FS, LO + FS)], None), Err(MetricsError::NothingLeft)));
}

#[test]
fn two_tone_linear_and_cubic() {
    let n = 1 << 16;
    let fa = coherent_offset(1573, n, FS);
    let fb = coherent_offset(-5898, n, FS);
    let (a, b) = (0.3, 0.2);
    let mut rf = tone(n, FS, LO, fa, a, 0.1);
    add_tone(&mut rf, fb, b, 0.7);
    let s = compute_spectrum(&rf, Window::Rectangular, n).unwrap();
    let lin = two_tone_report(&s, LO + fa, LO + fb).unwrap();
    assert!(lin.largest.unwrap().dbc < -250.0);

    // Per-branch x + alpha*x^3 maps z to z + (3/4)*alpha*|z|^2*z + (alpha/4)*conj(z)^3,
    // so the product at 2a-b has amplitude (3/4)*alpha*a^2*b.
    let alpha = 0.05;
    branch_cubic(&mut rf, alpha);
    let s = compute_spectrum(&rf, Window::Rectangular, n).unwrap();
    let r = two_tone_report(&s, LO + fa, LO + fb).unwrap();
    let p = r.products.iter().find(|p| (p.m, p.n) == (2, -1)).unwrap();
    // Tone amplitudes shift slightly under compression; compare with measured tone powers.
    let weaker = 10f64.powf(r.tone_b_db / 10.0);
    let ta = 10f64.powf(r.tone_a_db / 20.0);
    let tb = weaker.sqrt();
    let want = 20.0 * (0.75 * alpha * ta * ta * tb / tb).log10();
    assert!((p.dbc - want).abs() < 0.5, "{} vs {want}", p.dbc);
    assert!(r.imd3_dbc >= p.dbc);
}

#[test]
fn two_tone_qubit_offsets() {
    let n = 1 << 16;
    let cfg = TxConfig::default();
    let mut img = MemoryImage::new(10, 10);
    let (s0, s1) = img.envelopes.extend(&vec![EnvelopeEntry { amplitude: 255, phase_mod: 0 }; 4096]).unwrap();
    img.set_nco(0, 0, NcoSetting { ftw: offset_to_ftw(24e6, FS).unwrap(), ref_phase: 0 });
    img.set_nco(1, 0, NcoSetting { ftw: offset_to_ftw(-90e6, FS).unwrap(), ref_phase: 0 });
    let a = img.table_mut(0, 0).insert(Instruction::burst(s0, s1)).unwrap();
    let b = img.table_mut(1, 0).insert(Instruction::burst(s0, s1)).unwrap();
    for _ in 0..16 {
        img.list.push(InstructionRef::new(0, 0, a)).unwrap();
        img.list.push(InstructionRef::new(1, 0, b).parallel()).unwrap();
    }
    let w = execute(&img, &cfg).unwrap();
    assert_eq!(w.len(), n);
    let s = compute_spectrum(&upconvert(&w, &cfg), Window::BlackmanHarris, n).unwrap();
    let r = two_tone_report(&s, 13.564e9, 13.450e9).unwrap();
    assert!((r.freq_a - 13.564e9).abs() <= s.bin_hz);
    assert!((r.freq_b - 13.450e9).abs() <= s.bin_hz);
    assert!((r.tone_a_db - r.tone_b_db).abs() < 0.2);
}

#[test]
fn gaussian_burst_is_narrower() {
    let cfg = TxConfig::default();
    let len = 1000;
    let pad = 1 << 14;
    let sigma = len as f64 / 6.0;
    let g = |k: usize| {
        let t = k as f64 + 0.5 - len as f64 / 2.0;
        let edge = (-(len as f64 / 2.0).powi(2) / (2.0 * sigma * sigma)).exp();
        ((-(t * t) / (2.0 * sigma * sigma)).exp() - edge) / (1.0 - edge)
    };
    let spectrum_of = |shape: &dyn Fn(usize) -> f64| {
        let mut img = MemoryImage::new(10, 10);
        let seg: Vec<EnvelopeEntry> =
            (0..len).map(|k| EnvelopeEntry::from_fraction(0.9 * shape(k), 0, 10, 10).unwrap()).collect();
        let (a, b) = img.envelopes.extend(&seg).unwrap();
        img.set_nco(0, 0, NcoSetting { ftw: offset_to_ftw(24e6, FS).unwrap(), ref_phase: 0 });
        let slot = img.table_mut(0, 0).insert(Instruction::burst(a, b)).unwrap();
        img.list.push(InstructionRef::new(0, 0, slot)).unwrap();
        let mut w = execute(&img, &cfg).unwrap();
        w.i.resize(pad, 0);
        w.q.resize(pad, 0);
        compute_spectrum(&upconvert(&w, &cfg), Window::Rectangular, pad).unwrap()
    };
    let rect = spectrum_of(&|_| 1.0);
    let gauss = spectrum_of(&g);
    assert!(gauss.width_at(-30.0) < rect.width_at(-30.0) / 2.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tone_power_window_invariant(bin in 1i64..2000, amp in 0.01f64..1.0) {
        let n = 4096;
        let rf = tone(n, FS, LO, coherent_offset(bin, n, FS), amp, 0.2);
        let p: Vec<f64> = Window::ALL.iter().map(|&w| compute_spectrum(&rf, w, n).unwrap().main_power).collect();
        for x in &p {
            prop_assert!(db(x / p[0]).abs() < 0.2);
        }
    }

    #[test]
    fn adding_spur_never_raises_sfdr(spur_bin in 100i64..1900, level in -90.0f64..-20.0, second in -90.0f64..-20.0) {
        let n = 4096;
        let mut rf = tone(n, FS, LO, coherent_offset(50, n, FS), 1.0, 0.0);
        add_tone(&mut rf, coherent_offset(spur_bin, n, FS), 10f64.powf(level / 20.0), 0.0);
        let before = sfdr(&compute_spectrum(&rf, Window::Rectangular, n).unwrap(), &[], None).unwrap().sfdr_db;
        add_tone(&mut rf, coherent_offset(-spur_bin, n, FS), 10f64.powf(second / 20.0), 0.0);
        let after = sfdr(&compute_spectrum(&rf, Window::Rectangular, n).unwrap(), &[], None).unwrap().sfdr_db;
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn adding_noise_never_raises_snr(seed in 0u64..1000, s1 in 1e-5f64..1e-3, k in 1.0f64..10.0) {
        let n = 4096;
        let base = tone(n, FS, LO, coherent_offset(300, n, FS), 1.0, 0.0);
        let eval = |sigma: f64| {
            let mut rf = base.clone();
            add_white_noise(&mut rf, sigma, seed);
            let s = compute_spectrum(&rf, Window::Hann, n).unwrap();
            snr(&s, s.main_bin, 50e6, SnrOptions::default()).unwrap()
        };
        let clean = compute_spectrum(&base, Window::Hann, n).unwrap();
        let floor = snr(&clean, clean.main_bin, 50e6, SnrOptions::default()).unwrap();
        let a = eval(s1);
        let b = eval(s1 * k);
        prop_assert!(a <= floor);
        prop_assert!(b <= a + 1e-6);
    }

    #[test]
    fn metrics_are_pure(seed in 0u64..100) {
        let n = 2048;
        let mut rf = tone(n, FS, LO, coherent_offset(33, n, FS), 0.5, 0.0);
        add_white_noise(&mut rf, 1e-3, seed);
        let a = compute_spectrum(&rf, Window::Hann, n).unwrap();
        let b = compute_spectrum(&rf, Window::Hann, n).unwrap();
        prop_assert_eq!(report(&a, 25e6).unwrap(), report(&b, 25e6).unwrap());
    }
}
