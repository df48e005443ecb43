// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Per-tone pulse calibration.
//!
//! Amplitudes are set so the quantized envelope area gives the requested
//! rotation. With conditional tones, a burst on one tone also shifts the
//! levels of the neighbouring transitions. Those shifts are measured once by
//! simulating each burst and are undone by frame updates on the affected tones.

use std::f64::consts::TAU;

use cryotwin_controller::{
    upconvert, EnvelopeEntry, Instruction, InstructionList, InstructionRef, MemoryImage, Transmitter,
    Trigger, TxConfig,
};
use cryotwin_physics::{DeviceModel, Exchange, NoiseSample, QuantumState, Simulator};
use serde::{Deserialize, Serialize};

use crate::compile::aligned_nco;
use crate::envelope::{envelope_area, shape_samples, synthesize_envelope};
use crate::error::{CompileError, Result};
use crate::ir::{GateOp, Rotation, Shape};
use crate::plan::{FrequencyPlan, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurstCal {
    pub samples: usize,
    /// Peak amplitude as a fraction of full scale.
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotCal {
    pub shape: Shape,
    pub pi: BurstCal,
    pub half_pi: BurstCal,
    /// Frame update in radians for every plan slot after a pi burst on this one.
    pub corrections_pi: Vec<f64>,
    pub corrections_half_pi: Vec<f64>,
}

impl SlotCal {
    pub fn burst(&self, r: Rotation) -> BurstCal {
        match r {
            Rotation::Pi => self.pi,
            Rotation::HalfPi => self.half_pi,
        }
    }

    pub fn corrections(&self, r: Rotation) -> &[f64] {
        match r {
            Rotation::Pi => &self.corrections_pi,
            Rotation::HalfPi => &self.corrections_half_pi,
        }
    }
}

/// Resolved burst for one gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurstSpec {
    pub shape: Shape,
    pub samples: usize,
    pub amplitude: f64,
    /// Whether the calibrated frame corrections apply.
    pub calibrated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSet {
    pub amp_bits: u32,
    pub phase_mod_bits: u32,
    pub f_clk: f64,
    /// Rabi frequency per unit full-scale amplitude at the device, per qubit.
    pub rabi_per_unit: [f64; 2],
    pub slots: Vec<SlotCal>,
}

/// Default burst lengths in seconds: (shape, pi, pi/2).
fn defaults(conditional: bool) -> (Shape, f64, f64) {
    if conditional {
        (Shape::Gaussian, 2e-6, 1e-6)
    } else {
        (Shape::Rect, 500e-9, 250e-9)
    }
}

fn rotation_turns(r: Rotation) -> f64 {
    match r {
        Rotation::Pi => 0.5,
        Rotation::HalfPi => 0.25,
    }
}

/// Peak amplitude whose quantized envelope has the given area in full-scale samples.
pub fn area_matched(shape: Shape, samples: usize, area: f64, amp_bits: u32, phase_mod_bits: u32) -> Result<f64> {
    let unit: f64 = shape_samples(shape, samples).iter().sum();
    let mut amp = area / unit;
    if !(amp < 1.0) {
        return Err(CompileError::Calibration(format!(
            "{shape} burst of {samples} samples needs amplitude {amp:.4} for area {area:.3}"
        )));
    }
    // One refinement against the quantized area.
    let env = synthesize_envelope(shape, samples, amp, amp_bits, phase_mod_bits)?;
    let got = envelope_area(&env, amp_bits);
    if got > 0.0 {
        amp = (amp * area / got).min(1.0 - f64::EPSILON);
    }
    Ok(amp)
}

impl CalibrationSet {
    /// Area-matched bursts with no frame corrections.
    pub fn uncorrected(model: &DeviceModel, cfg: &TxConfig, plan: &FrequencyPlan) -> Result<Self> {
        let (shape, t_pi, t_half) = defaults(plan.conditional());
        let gain = cfg.gain_linear();
        let rabi = [model.drive_coupling[0] * gain, model.drive_coupling[1] * gain];
        let mut set = Self {
            amp_bits: cfg.amp_bits,
            phase_mod_bits: cfg.phase_mod_bits,
            f_clk: cfg.f_clk,
            rabi_per_unit: rabi,
            slots: Vec::with_capacity(plan.slots.len()),
        };
        for s in &plan.slots {
            let pi_n = (t_pi * cfg.f_clk).round() as usize;
            let half_n = (t_half * cfg.f_clk).round() as usize;
            let pi = BurstCal { samples: pi_n, amplitude: set.amplitude_for(s.qubit, shape, pi_n, Rotation::Pi)? };
            let half_pi =
                BurstCal { samples: half_n, amplitude: set.amplitude_for(s.qubit, shape, half_n, Rotation::HalfPi)? };
            set.slots.push(SlotCal {
                shape,
                pi,
                half_pi,
                corrections_pi: vec![0.0; plan.slots.len()],
                corrections_half_pi: vec![0.0; plan.slots.len()],
            });
        }
        Ok(set)
    }

    /// Calibrate against the device. Conditional plans also get measured
    /// frame corrections.
    pub fn from_device(model: &DeviceModel, cfg: &TxConfig, plan: &FrequencyPlan) -> Result<Self> {
        let mut set = Self::uncorrected(model, cfg, plan)?;
        if !plan.conditional() {
            return Ok(set);
        }
        let sim = Simulator::new(model.noiseless(), Exchange::On, cfg.f_clk)?;
        for s in 0..plan.slots.len() {
            for r in [Rotation::Pi, Rotation::HalfPi] {
                let cal = &set.slots[s];
                let b = cal.burst(r);
                let env = synthesize_envelope(cal.shape, b.samples, b.amplitude, cfg.amp_bits, cfg.phase_mod_bits)?;
                let phases = spectator_phases(&sim, cfg, plan, s, &env)?;
                let corr: Vec<f64> = plan
                    .slots
                    .iter()
                    .map(|t| {
                        let (lo, up) = transition(t);
                        phases[lo] - phases[up]
                    })
                    .collect();
                match r {
                    Rotation::Pi => set.slots[s].corrections_pi = corr,
                    Rotation::HalfPi => set.slots[s].corrections_half_pi = corr,
                }
            }
        }
        Ok(set)
    }

    fn amplitude_for(&self, qubit: usize, shape: Shape, samples: usize, r: Rotation) -> Result<f64> {
        let rabi = self.rabi_per_unit[qubit];
        if !(rabi > 0.0) {
            return Err(CompileError::Calibration(format!("qubit {} has no drive coupling", qubit + 1)));
        }
        let area = rotation_turns(r) * self.f_clk / rabi;
        area_matched(shape, samples, area, self.amp_bits, self.phase_mod_bits)
    }

    /// Burst for a gate on `slot`, applying any duration or shape override.
    /// A duration override alone keeps the amplitude, so the rotation angle
    /// scales with it. A shape override is area-matched to the gate's rotation
    /// at the final length.
    pub fn resolve(&self, plan: &FrequencyPlan, slot: usize, r: Rotation, op: &GateOp, index: usize) -> Result<BurstSpec> {
        let cal = &self.slots[slot];
        let base = cal.burst(r);
        let samples = match op.duration {
            None => base.samples,
            Some(d) => duration_samples(d, self.f_clk).ok_or(CompileError::Duration { index, seconds: d })?,
        };
        let shape = op.shape.unwrap_or(cal.shape);
        let amplitude = if op.shape.is_none() {
            base.amplitude
        } else {
            self.amplitude_for(plan.slots[slot].qubit, shape, samples, r)?
        };
        let calibrated = op.shape.is_none() && op.duration.is_none();
        Ok(BurstSpec { shape, samples, amplitude, calibrated })
    }
}

/// Whole number of clock periods, at least 2.
pub fn duration_samples(seconds: f64, f_clk: f64) -> Option<usize> {
    let n = seconds * f_clk;
    let r = n.round();
    ((n - r).abs() <= 1e-6 * r.max(1.0) && r >= 2.0).then_some(r as usize)
}

/// Levels `(lower, upper)` joined by a tone, basis index `2*b1 + b2`.
fn transition(s: &Slot) -> (usize, usize) {
    let c = s.condition.unwrap_or(0) as usize;
    match s.qubit {
        0 => (c, 2 + c),
        _ => (2 * c, 2 * c + 1),
    }
}

/// Phase picked up by each level during a burst on `slot`, relative to free
/// evolution. The two levels the burst drives are reported as zero.
fn spectator_phases(
    sim: &Simulator,
    cfg: &TxConfig,
    plan: &FrequencyPlan,
    slot: usize,
    env: &[EnvelopeEntry],
) -> Result<[f64; 4]> {
    let s = plan.slots[slot];
    let mut image = MemoryImage::new(cfg.amp_bits, cfg.phase_mod_bits);
    for t in &plan.slots {
        image.set_nco(t.bank, t.nco, aligned_nco(t.ftw));
    }
    let (start, stop) = image.envelopes.extend(env)?;
    let k = image.table_mut(s.bank, s.nco).insert(Instruction::burst(start, stop))?;
    image.list = InstructionList::from_refs(vec![InstructionRef::new(s.bank, s.nco, k)])?;
    let mut tx = Transmitter::new(image, *cfg)?;
    let bb = tx.trigger(Trigger::Execute)?.expect("execute yields a waveform");
    let rf = upconvert(&bb, cfg);
    let duration = rf.len() as f64 / cfg.f_clk;
    let (lo, up) = transition(&s);
    let mut out = [0.0; 4];
    for l in 0..4 {
        if l == lo || l == up {
            continue;
        }
        let mut driven = QuantumState::basis((l >> 1) as u8, (l & 1) as u8);
        sim.evolve(&mut driven, &rf, &NoiseSample::ZERO)?;
        let mut free = QuantumState::basis((l >> 1) as u8, (l & 1) as u8);
        sim.idle(&mut free, duration, &NoiseSample::ZERO);
        let ratio = driven.amps[l] / free.amps[l];
        out[l] = ratio.arg();
    }
    // Keep within (-pi, pi].
    for p in &mut out {
        *p -= TAU * (*p / TAU).round();
    }
    Ok(out)
}
