// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use cryotwin_controller::nco::resolution;
use cryotwin_controller::*;
use proptest::prelude::*;
use rustfft::{num_complex::Complex64, FftPlanner};

fn burst_image(cfg: &TxConfig, ftw: u32, len: usize, amp: i32) -> (MemoryImage, u8) {
    let mut img = MemoryImage::new(cfg.amp_bits, cfg.phase_mod_bits);
    let (a, b) = img.envelopes.extend(&vec![EnvelopeEntry { amplitude: amp, phase_mod: 0 }; len]).unwrap();
    img.set_nco(0, 2, NcoSetting { ftw, ref_phase: 0 });
    let slot = img.table_mut(0, 2).insert(Instruction::burst(a, b)).unwrap();
    (img, slot)
}

#[test]
fn phase_update_shifts_second_burst_by_pi() {
    let cfg = TxConfig::high_resolution();
    let ftw = 100663;
    let amp = (1 << 23) - 1;
    let (mut img, burst) = burst_image(&cfg, ftw, 300, amp);
    let flip = img.table_mut(0, 2).insert(Instruction::phase(1 << 21)).unwrap();
    for s in [burst, flip, burst] {
        img.list.push(InstructionRef::new(0, 2, s)).unwrap();
    }
    let w = execute(&img, &cfg).unwrap();
    assert_eq!(w.len(), 600);

    // Closed-form continuation of the first burst, shifted by pi for the second.
    let a = amp as f64 / (1u64 << 23) as f64;
    let fs = w.full_scale();
    for n in 0..600 {
        let extra = if n >= 300 { std::f64::consts::PI } else { 0.0 };
        let theta = TAU * ((n as f64 + 1.0) * ftw as f64) / (1u64 << 22) as f64 + extra;
        assert!((w.i[n] as f64 / fs - a * theta.sin()).abs() < 2e-6, "i at {n}");
        assert!((w.q[n] as f64 / fs - a * theta.cos()).abs() < 2e-6, "q at {n}");
    }
}

#[test]
fn fft_peak_at_ftw_bin() {
    let cfg = TxConfig::high_resolution();
    let n = 1 << 16;
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    for ftw in [1u32, 100663, 377487, (1 << 21) - 5, 2_000_001] {
        let w = continuous_wave(ftw, EnvelopeEntry { amplitude: (1 << 23) - 1, phase_mod: 0 }, n, &cfg);
        let rf = upconvert(&w, &cfg);
        let mut buf = rf.envelope.clone();
        fft.process(&mut buf);
        let peak = buf
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .unwrap()
            .0;
        let f_peak = peak as f64 * cfg.f_clk / n as f64;
        let f_expect = ftw as f64 * cfg.f_clk / (1u64 << 22) as f64;
        assert!((f_peak - f_expect).abs() <= cfg.f_clk / n as f64, "ftw {ftw}");
        assert_eq!(ftw_to_freq(ftw, cfg.f_clk), ftw as f64 * resolution(cfg.f_clk));
    }
}

#[test]
fn negative_offset_lands_below_carrier() {
    let cfg = TxConfig::high_resolution();
    let n = 1 << 14;
    let ftw = offset_to_ftw(-90e6, cfg.f_clk).unwrap();
    let w = continuous_wave(ftw, EnvelopeEntry { amplitude: 1 << 22, phase_mod: 0 }, n, &cfg);
    let mut buf: Vec<Complex64> = upconvert(&w, &cfg).envelope;
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let peak = buf.iter().enumerate().max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr())).unwrap().0;
    let bin_hz = cfg.f_clk / n as f64;
    let f = if peak > n / 2 { peak as f64 - n as f64 } else { peak as f64 } * bin_hz;
    assert!((f + 90e6).abs() <= bin_hz);
}

fn continuity_case(ftw: u32, first: usize, gap: usize, second: usize) {
    let cfg = TxConfig::default();
    let mut img = MemoryImage::new(cfg.amp_bits, cfg.phase_mod_bits);
    let env = EnvelopeEntry { amplitude: 400, phase_mod: 0 };
    let (a, _) = img.envelopes.extend(&vec![env; first.max(second)]).unwrap();
    let (z0, z1) = img.envelopes.extend(&vec![EnvelopeEntry::default(); gap]).unwrap();
    img.set_nco(0, 0, NcoSetting { ftw, ref_phase: 0 });
    img.set_nco(1, 5, NcoSetting { ftw: 999, ref_phase: 0 });
    let s1 = img.table_mut(0, 0).insert(Instruction::burst(a, a + first as u32 - 1)).unwrap();
    let s2 = img.table_mut(0, 0).insert(Instruction::burst(a, a + second as u32 - 1)).unwrap();
    // The gap is played by a different NCO on the other bank.
    let idle = img.table_mut(1, 5).insert(Instruction::burst(z0, z1)).unwrap();
    img.list.push(InstructionRef::new(0, 0, s1)).unwrap();
    img.list.push(InstructionRef::new(1, 5, idle)).unwrap();
    img.list.push(InstructionRef::new(0, 0, s2)).unwrap();
    let w = execute(&img, &cfg).unwrap();

    let cont = continuous_wave(ftw, env, first + gap + second, &cfg);
    assert_eq!(&w.i[..first], &cont.i[..first]);
    assert_eq!(&w.i[first + gap..], &cont.i[first + gap..]);
    assert_eq!(&w.q[first + gap..], &cont.q[first + gap..]);
    assert!(w.i[first..first + gap].iter().all(|&x| x == 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_coherent_across_gaps(ftw in 0u32..(1 << 22), first in 1usize..200, gap in 1usize..200, second in 1usize..200) {
        continuity_case(ftw, first, gap, second);
    }

    #[test]
    fn execution_is_deterministic(ftw in 0u32..(1 << 22), len in 1usize..500, amp in -512i32..512) {
        let cfg = TxConfig::default();
        let (mut img, slot) = burst_image(&cfg, ftw, len, amp);
        img.list.push(InstructionRef::new(0, 2, slot)).unwrap();
        img.list.push(InstructionRef::new(0, 2, slot)).unwrap();
        let a = execute(&img, &cfg).unwrap();
        let b = execute(&img, &cfg).unwrap();
        prop_assert_eq!(a.to_bytes(), b.to_bytes());
        let fs = 1i32 << (cfg.dac_bits - 1);
        prop_assert!(a.i.iter().chain(&a.q).all(|&x| (-fs..fs).contains(&x)));
    }

    #[test]
    fn image_round_trip(ftw in 0u32..(1 << 22), len in 1usize..50, amp in -512i32..512, phase in 0u32..(1 << 22)) {
        let cfg = TxConfig::default();
        let (mut img, slot) = burst_image(&cfg, ftw, len, amp);
        let p = img.table_mut(0, 2).insert(Instruction::phase(phase)).unwrap();
        img.list.push(InstructionRef::new(0, 2, p)).unwrap();
        img.list.push(InstructionRef::new(0, 2, slot)).unwrap();
        let back = image::decode(&image::encode(&img)).unwrap();
        prop_assert_eq!(execute(&back, &cfg).unwrap(), execute(&img, &cfg).unwrap());
        prop_assert_eq!(back, img);
    }
}
