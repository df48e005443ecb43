// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lowering of gate programs to a transmitter memory image.
//!
//! Every burst is preceded, when needed, by its own zero-length phase-update
//! instruction that brings the tone's reference phase to
//! `frame + correction + axis`. Z gates are applied eagerly to all tones of
//! the qubit. Each gate becomes one parallel group in the instruction list.

use std::collections::HashMap;

use cryotwin_controller::config::{LIST_CAPACITY, PHASE_MASK};
use cryotwin_controller::nco::radians_to_phase;
use cryotwin_controller::{
    upconvert, BasebandWaveform, ControllerError, Instruction, InstructionList, InstructionRef, Memory, MemoryImage,
    NcoSetting, RfSignal, Transmitter, Trigger, TxConfig,
};
use serde::{Deserialize, Serialize};

use crate::calibration::{duration_samples, CalibrationSet};
use crate::envelope::synthesize_envelope;
use crate::error::{CompileError, Result};
use crate::ir::{Gate, GateOp, Program, Shape};
use crate::plan::FrequencyPlan;
use crate::report::CompileReport;

/// A quarter turn in phase-word units.
pub const QUARTER: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileOptions {
    /// Share envelope memory between identical bursts.
    pub dedup: bool,
    /// Split an over-long instruction list across sweep triggers instead of failing.
    pub allow_split: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { dedup: true, allow_split: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    /// Uploaded image; its list is the first chunk.
    pub image: MemoryImage,
    /// Every chunk in trigger order, the first equal to `image.list`.
    pub lists: Vec<InstructionList>,
    pub report: CompileReport,
}

impl Compiled {
    /// Run every chunk back to back and return the DAC output of each trigger.
    pub fn baseband(&self, cfg: &TxConfig) -> Result<Vec<BasebandWaveform>> {
        let mut tx = Transmitter::new(self.image.clone(), *cfg)?;
        let mut out = Vec::with_capacity(self.lists.len());
        out.push(tx.trigger(Trigger::Execute)?.expect("execute yields a waveform"));
        for list in &self.lists[1..] {
            tx.queue_list(list.clone())?;
            tx.trigger(Trigger::Sweep)?;
            out.push(tx.trigger(Trigger::Execute)?.expect("execute yields a waveform"));
        }
        Ok(out)
    }

    /// Same as [`baseband`](Self::baseband), upconverted.
    pub fn execute(&self, cfg: &TxConfig) -> Result<Vec<RfSignal>> {
        Ok(self.baseband(cfg)?.iter().map(|bb| upconvert(bb, cfg)).collect())
    }

    /// All triggers concatenated into one record.
    pub fn waveform(&self, cfg: &TxConfig) -> Result<BasebandWaveform> {
        let parts = self.baseband(cfg)?;
        let mut it = parts.into_iter();
        let mut first = it.next().expect("at least one trigger");
        for p in it {
            first.append(&p);
        }
        Ok(first)
    }
}

/// NCO setting whose output phase at clock `n` is exactly `n * ftw`. The
/// accumulator steps once before the first sample, so the reference phase
/// takes that step back and the tone starts in phase with the qubit frame.
pub fn aligned_nco(ftw: u32) -> NcoSetting {
    NcoSetting { ftw, ref_phase: ftw.wrapping_neg() & PHASE_MASK }
}

struct Lowering<'a> {
    plan: &'a FrequencyPlan,
    cal: &'a CalibrationSet,
    options: CompileOptions,
    image: MemoryImage,
    envelopes: HashMap<(Shape, usize, u64), (u32, u32)>,
    /// Z frame per qubit, phase-word units.
    frame: Vec<u32>,
    /// Accumulated correction per slot in radians.
    offset: Vec<f64>,
    /// Reference phase already applied per slot.
    applied: Vec<u32>,
    groups: Vec<Vec<InstructionRef>>,
}

impl Lowering<'_> {
    fn envelope(&mut self, shape: Shape, samples: usize, amplitude: f64) -> Result<(u32, u32)> {
        let key = (shape, samples, amplitude.to_bits());
        if self.options.dedup {
            if let Some(r) = self.envelopes.get(&key) {
                return Ok(*r);
            }
        }
        let env = synthesize_envelope(shape, samples, amplitude, self.cal.amp_bits, self.cal.phase_mod_bits)?;
        let r = self.image.envelopes.extend(&env)?;
        self.envelopes.insert(key, r);
        Ok(r)
    }

    fn reference(&self, slot: usize) -> InstructionRef {
        let s = &self.plan.slots[slot];
        InstructionRef::new(s.bank, s.nco, 0)
    }

    fn emit(&mut self, group: &mut Vec<InstructionRef>, slot: usize, ins: Instruction) -> Result<()> {
        let s = self.plan.slots[slot];
        let k = self.image.table_mut(s.bank, s.nco).find_or_insert(ins)?;
        let mut r = InstructionRef { slot: k, ..self.reference(slot) };
        if !group.is_empty() {
            r = r.parallel();
        }
        group.push(r);
        Ok(())
    }

    fn phase_to(&mut self, group: &mut Vec<InstructionRef>, slot: usize, desired: u32) -> Result<()> {
        let delta = desired.wrapping_sub(self.applied[slot]) & PHASE_MASK;
        if delta != 0 {
            self.emit(group, slot, Instruction::phase(delta))?;
            self.applied[slot] = desired & PHASE_MASK;
        }
        Ok(())
    }

    fn burst(&mut self, group: &mut Vec<InstructionRef>, slot: usize, op: &GateOp, index: usize) -> Result<()> {
        let (axis, rot) = op.gate.burst().expect("burst gate");
        let q = self.plan.slots[slot].qubit;
        let spec = self.cal.resolve(self.plan, slot, rot, op, index)?;
        let desired = self.frame[q]
            .wrapping_add(radians_to_phase(self.offset[slot]))
            .wrapping_add(axis * QUARTER);
        self.phase_to(group, slot, desired)?;
        let (a, b) = self.envelope(spec.shape, spec.samples, spec.amplitude)?;
        self.emit(group, slot, Instruction::burst(a, b))?;
        if spec.calibrated {
            let corr = self.cal.slots[slot].corrections(rot).to_vec();
            for (o, c) in self.offset.iter_mut().zip(corr) {
                *o += c;
            }
        }
        Ok(())
    }

    fn op(&mut self, index: usize, op: &GateOp) -> Result<()> {
        let plan = self.plan;
        let slots = plan.slots_for(op.target);
        if slots.is_empty() {
            return Err(CompileError::UnknownQubit { index, qubit: op.target + 1 });
        }
        if op.parallel {
            let why = if plan.conditional() {
                Some("parallel gates need the exchange-off frequency plan".to_string())
            } else if matches!(op.gate, Gate::Z(_)) {
                Some("a Z gate cannot run in parallel".to_string())
            } else if self.groups.is_empty() {
                Some("nothing to run in parallel with".to_string())
            } else {
                let bank = plan.slots[slots[0]].bank;
                let prev = self.groups.last().expect("checked");
                let busy = prev.iter().any(|r| {
                    r.bank == bank && self.image.table(r.bank, r.nco).get(r.slot).is_some_and(|i| i.range.is_some())
                });
                busy.then(|| format!("bank {bank} is already playing in this group"))
            };
            if let Some(reason) = why {
                return Err(CompileError::Parallel { index, reason });
            }
        }
        let mut groups: Vec<Vec<InstructionRef>> = Vec::new();
        let mut group = if op.parallel { self.groups.pop().expect("checked") } else { Vec::new() };
        match op.gate {
            Gate::Z(theta) => {
                let w = radians_to_phase(theta);
                self.frame[op.target] = self.frame[op.target].wrapping_add(w) & PHASE_MASK;
                if w != 0 {
                    for &s in &slots {
                        let desired = self.applied[s].wrapping_add(w);
                        self.phase_to(&mut group, s, desired)?;
                    }
                }
            }
            Gate::I => {
                let s = slots[0];
                let samples = match op.duration {
                    Some(d) => duration_samples(d, plan.f_clk).ok_or(CompileError::Duration { index, seconds: d })?,
                    None => self.cal.slots[s].half_pi.samples,
                };
                let (a, b) = self.envelope(Shape::Rect, samples, 0.0)?;
                self.emit(&mut group, s, Instruction::burst(a, b))?;
            }
            Gate::CrotHigh | Gate::CrotLow => {
                let s = plan.find(op.target, op.gate.condition()).ok_or_else(|| CompileError::Unassigned {
                    index,
                    gate: op.gate.to_string(),
                    qubit: op.target + 1,
                })?;
                self.burst(&mut group, s, op, index)?;
            }
            _ => {
                // One burst per tone of the qubit, in sequence.
                for (k, &s) in slots.iter().enumerate() {
                    if k > 0 {
                        groups.push(std::mem::take(&mut group));
                    }
                    self.burst(&mut group, s, op, index)?;
                }
            }
        }
        groups.push(group);
        self.groups.extend(groups.into_iter().filter(|g| !g.is_empty()));
        Ok(())
    }
}

/// Lower `program` for the given plan and calibration.
pub fn compile(
    program: &Program,
    plan: &FrequencyPlan,
    cal: &CalibrationSet,
    options: CompileOptions,
) -> Result<Compiled> {
    if cal.slots.len() != plan.slots.len() {
        return Err(CompileError::Calibration(format!(
            "{} calibrated tones for a plan with {}",
            cal.slots.len(),
            plan.slots.len()
        )));
    }
    let mut image = MemoryImage::new(cal.amp_bits, cal.phase_mod_bits);
    for s in &plan.slots {
        image.set_nco(s.bank, s.nco, aligned_nco(s.ftw));
    }
    let mut low = Lowering {
        plan,
        cal,
        options,
        image,
        envelopes: HashMap::new(),
        frame: vec![0; plan.qubits()],
        offset: vec![0.0; plan.slots.len()],
        applied: vec![0; plan.slots.len()],
        groups: Vec::new(),
    };
    for (i, op) in program.ops.iter().enumerate() {
        low.op(i, op)?;
    }

    let total: usize = low.groups.iter().map(Vec::len).sum();
    if total > LIST_CAPACITY && !options.allow_split {
        return Err(ControllerError::Capacity { memory: Memory::InstructionList, limit: LIST_CAPACITY, requested: total }
            .into());
    }
    let mut lists = Vec::new();
    let mut chunk: Vec<InstructionRef> = Vec::new();
    for g in low.groups {
        if chunk.len() + g.len() > LIST_CAPACITY {
            lists.push(InstructionList::from_refs(std::mem::take(&mut chunk))?);
        }
        chunk.extend(g);
    }
    lists.push(InstructionList::from_refs(chunk)?);

    let mut image = low.image;
    image.list = lists[0].clone();
    image.validate()?;
    for l in &lists[1..] {
        image.validate_list(l)?;
    }
    let report = CompileReport::new(&image, &lists, plan);
    Ok(Compiled { image, lists, report })
}
