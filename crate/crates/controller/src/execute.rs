// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Trigger-driven execution of the instruction list.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::config::{TxConfig, BANKS};
use crate::error::{ControllerError, Result};
use crate::memory::{nco_index, InstructionList, MemoryImage};
use crate::nco::NcoState;
use crate::pac::{EnvelopeEntry, Pac};

/// DAC output of one trigger, both banks summed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasebandWaveform {
    pub sample_rate: f64,
    /// Absolute time of the first sample since power-up.
    pub start_time: f64,
    pub dac_bits: u32,
    pub i: Vec<i32>,
    pub q: Vec<i32>,
}

impl BasebandWaveform {
    pub fn empty(sample_rate: f64, start_time: f64, dac_bits: u32) -> Self {
        Self { sample_rate, start_time, dac_bits, i: Vec::new(), q: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.len() as f64 / self.sample_rate
    }

    pub fn full_scale(&self) -> f64 {
        (1u64 << (self.dac_bits - 1)) as f64
    }

    /// Append another waveform that starts where this one ends.
    pub fn append(&mut self, other: &BasebandWaveform) {
        self.i.extend_from_slice(&other.i);
        self.q.extend_from_slice(&other.q);
    }

    /// CSV with header `time_s,i,q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 24 + 16);
        out.push_str("time_s,i,q\n");
        for (n, (i, q)) in self.i.iter().zip(&self.q).enumerate() {
            let t = self.start_time + n as f64 / self.sample_rate;
            out.push_str(&format!("{t:e},{i},{q}\n"));
        }
        out
    }

    /// Interleaved little-endian i32 pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len() * 8);
        for (i, q) in self.i.iter().zip(&self.q) {
            out.extend_from_slice(&i.to_le_bytes());
            out.extend_from_slice(&q.to_le_bytes());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trigger {
    /// Run the loaded instruction list.
    Execute,
    /// Replace the loaded list with the next queued one.
    Sweep,
}

/// One transmitter: two banks of 16 free-running NCOs behind a shared PAC per bank.
#[derive(Debug, Clone)]
pub struct Transmitter {
    cfg: TxConfig,
    image: MemoryImage,
    pac: Pac,
    ncos: Vec<NcoState>,
    clock: u64,
    queue: VecDeque<InstructionList>,
}

impl Transmitter {
    /// Upload an image. NCO accumulators start at zero and the clock at zero.
    pub fn new(image: MemoryImage, cfg: TxConfig) -> Result<Self> {
        cfg.validate()?;
        if image.envelopes.amp_bits != cfg.amp_bits {
            return Err(ControllerError::ImageMismatch {
                expected: "amp_bits",
                image: image.envelopes.amp_bits,
                config: cfg.amp_bits,
            });
        }
        if image.envelopes.phase_mod_bits != cfg.phase_mod_bits {
            return Err(ControllerError::ImageMismatch {
                expected: "phase_mod_bits",
                image: image.envelopes.phase_mod_bits,
                config: cfg.phase_mod_bits,
            });
        }
        image.validate()?;
        let ncos = image.ncos.iter().map(|s| NcoState::new(s.ftw, s.ref_phase)).collect();
        Ok(Self { pac: Pac::new(&cfg), cfg, image, ncos, clock: 0, queue: VecDeque::new() })
    }

    pub fn config(&self) -> &TxConfig {
        &self.cfg
    }

    pub fn image(&self) -> &MemoryImage {
        &self.image
    }

    pub fn ncos(&self) -> &[NcoState] {
        &self.ncos
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    /// Stage a list for a later sweep trigger. Validated on entry.
    pub fn queue_list(&mut self, list: InstructionList) -> Result<()> {
        self.image.validate_list(&list)?;
        self.queue.push_back(list);
        Ok(())
    }

    pub fn queued(&self) -> usize {
        self.queue.len()
    }

    /// Let time pass with no list running.
    pub fn idle(&mut self, samples: u64) {
        for s in &mut self.ncos {
            s.advance(samples);
        }
        self.clock += samples;
    }

    pub fn trigger(&mut self, t: Trigger) -> Result<Option<BasebandWaveform>> {
        match t {
            Trigger::Execute => Ok(Some(self.run())),
            Trigger::Sweep => {
                let next = self.queue.pop_front().ok_or_else(|| {
                    ControllerError::Config("sweep trigger with no queued instruction list".into())
                })?;
                self.image.list = next;
                Ok(None)
            }
        }
    }

    fn run(&mut self) -> BasebandWaveform {
        let cfg = self.cfg;
        let start_time = self.clock as f64 / cfg.f_clk;
        let mut out = BasebandWaveform::empty(cfg.f_clk, start_time, cfg.dac_bits);
        let rail = (1i64 << (cfg.dac_bits - 1)) as i32;
        let entries = self.image.list.entries().to_vec();

        let mut g = 0;
        while g < entries.len() {
            let mut end = g + 1;
            while end < entries.len() && entries[end].with_previous {
                end += 1;
            }
            let group = &entries[g..end];

            // Phase updates land at the start of the group, before any burst.
            let mut duration = 0u64;
            for r in group {
                let ins = *self.image.table(r.bank, r.nco).get(r.slot).expect("validated");
                if let Some(p) = ins.phase_update {
                    self.ncos[nco_index(r.bank, r.nco)].add_ref_phase(p);
                }
                duration = duration.max(ins.samples());
            }

            let base = out.i.len();
            let len = duration as usize;
            out.i.resize(base + len, 0);
            out.q.resize(base + len, 0);
            let mut used = [false; BANKS];
            for r in group {
                let ins = *self.image.table(r.bank, r.nco).get(r.slot).expect("validated");
                let Some((start, stop)) = ins.range else { continue };
                used[r.bank as usize] = true;
                let k = nco_index(r.bank, r.nco);
                self.ncos[k].active = true;
                let mut nco = self.ncos[k];
                let env = &self.image.envelopes.entries()[start as usize..=stop as usize];
                for (n, e) in env.iter().enumerate() {
                    let phase = nco.step();
                    let (i, q) = self.pac.convert(phase, *e);
                    out.i[base + n] += i;
                    out.q[base + n] += q;
                }
            }
            if used.iter().filter(|u| **u).count() > 1 {
                for v in out.i[base..].iter_mut().chain(out.q[base..].iter_mut()) {
                    *v = (*v).clamp(-rail, rail - 1);
                }
            }
            for s in &mut self.ncos {
                s.advance(duration);
                s.active = false;
            }
            self.clock += duration;
            g = end;
        }
        out
    }
}

/// Upload `image` and fire one execute trigger.
pub fn execute(image: &MemoryImage, cfg: &TxConfig) -> Result<BasebandWaveform> {
    let mut tx = Transmitter::new(image.clone(), *cfg)?;
    Ok(tx.trigger(Trigger::Execute)?.expect("execute yields a waveform"))
}

/// Free-running tone from a single NCO at constant envelope, starting at clock 0.
/// Bypasses the memories so the record can be longer than the envelope memory.
pub fn continuous_wave(ftw: u32, env: EnvelopeEntry, samples: usize, cfg: &TxConfig) -> BasebandWaveform {
    let pac = Pac::new(cfg);
    let mut nco = NcoState::new(ftw, 0);
    let mut out = BasebandWaveform::empty(cfg.f_clk, 0.0, cfg.dac_bits);
    out.i.reserve(samples);
    out.q.reserve(samples);
    for _ in 0..samples {
        let (i, q) = pac.convert(nco.step(), env);
        out.i.push(i);
        out.q.push(q);
    }
    out
}
