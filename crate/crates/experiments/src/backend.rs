// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Physics backends. Experiments hand a compiled image to a backend and get
//! back the distribution of shot records; nothing else crosses the boundary.

use std::f64::consts::TAU;

use cryotwin_compiler::Compiled;
use cryotwin_controller::config::PHASE_MODULUS;
use cryotwin_controller::memory::nco_index;
use cryotwin_controller::{ftw_to_offset, TxConfig};
use cryotwin_physics::{outcome_distribution, sample_noise, DeviceModel, Exchange, Simulator};
use rand::RngCore;
use num_complex::Complex64;

use crate::error::{ExperimentError, Result};
use crate::readout::ConfusionMatrix;

pub trait Backend: Sync {
    /// Basis populations `[P00, P01, P10, P11]` (index `2*q1 + q2`) after the program.
    fn populations(&self, program: &Compiled) -> Result<[f64; 4]>;

    /// Distribution of the recorded bit pairs given true populations.
    fn readout(&self, pops: &[f64; 4]) -> [f64; 4];

    /// Effective single-qubit assignment matrix, as used for readout correction.
    fn confusion(&self, qubit: usize) -> ConfusionMatrix;

    fn outcomes(&self, program: &Compiled) -> Result<[f64; 4]> {
        Ok(self.readout(&self.populations(program)?))
    }

    /// Populations averaged over `draws` random noise realizations instead of
    /// quadrature. Backends without noise ignore the generator.
    fn sampled_populations(&self, program: &Compiled, draws: usize, rng: &mut dyn RngCore) -> Result<[f64; 4]> {
        let _ = (draws, rng);
        self.populations(program)
    }
}

/// The full stack: transmitter emulation, upconversion and the two-spin simulator.
#[derive(Debug, Clone)]
pub struct DeviceBackend {
    sim: Simulator,
    tx: TxConfig,
    /// Gauss-Hermite nodes per noisy dimension.
    nodes: usize,
}

impl DeviceBackend {
    pub fn new(model: DeviceModel, exchange: Exchange, tx: TxConfig, nodes: usize) -> Result<Self> {
        tx.validate()?;
        Ok(Self { sim: Simulator::new(model, exchange, tx.f_clk)?, tx, nodes: nodes.max(1) })
    }

    pub fn model(&self) -> &DeviceModel {
        self.sim.model()
    }

    pub fn simulator(&self) -> &Simulator {
        &self.sim
    }
}

impl Backend for DeviceBackend {
    fn populations(&self, program: &Compiled) -> Result<[f64; 4]> {
        let segments = program.execute(&self.tx)?;
        Ok(self.sim.averaged_populations(&segments, self.nodes)?)
    }

    fn readout(&self, pops: &[f64; 4]) -> [f64; 4] {
        outcome_distribution(self.sim.model(), pops)
    }

    fn sampled_populations(&self, program: &Compiled, draws: usize, rng: &mut dyn RngCore) -> Result<[f64; 4]> {
        let m = self.sim.model();
        let noisy = m.sigma_detune.iter().any(|s| *s > 0.0) || m.sigma_j > 0.0;
        if !noisy || draws == 0 {
            return self.populations(program);
        }
        let segments = program.execute(&self.tx)?;
        let init = self.sim.initial_mixture();
        let mut out = [0.0; 4];
        for _ in 0..draws {
            let noise = sample_noise(m, rng);
            for (s0, p) in &init {
                let mut s = *s0;
                self.sim.run(&mut s, &segments, &noise)?;
                for (o, v) in out.iter_mut().zip(s.populations()) {
                    *o += p * v / draws as f64;
                }
            }
        }
        Ok(out)
    }

    fn confusion(&self, qubit: usize) -> ConfusionMatrix {
        let m = self.sim.model();
        let (f0, f1) = (m.readout.f0[qubit], m.readout.f1[qubit]);
        if qubit == 1 {
            return ConfusionMatrix::new(f0, f1);
        }
        // Q1 is read through a CROT that leaves a random bit when it fails.
        let c = m.crot_readout_fidelity;
        let one = |bit: f64| bit * f1 + (1.0 - bit) * (1.0 - f0);
        ConfusionMatrix::new(1.0 - one((1.0 - c) / 2.0), one(c + (1.0 - c) / 2.0))
    }
}

type Su2 = [[Complex64; 2]; 2];

const ID: Su2 = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];

fn mul(a: &Su2, b: &Su2) -> Su2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Rotation by `theta` about the equatorial axis at angle `phi`, in the basis (|0>, |1>).
fn rotation(theta: f64, phi: f64) -> Su2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let off = Complex64::new(0.0, -s);
    [
        [Complex64::new(c, 0.0), off * Complex64::from_polar(1.0, phi)],
        [off * Complex64::from_polar(1.0, -phi), Complex64::new(c, 0.0)],
    ]
}

/// Closed-form reference: two independent resonantly driven two-level
/// systems, no exchange and no noise. Reads the memory image directly, so it
/// shares nothing with the transmitter or the simulator.
#[derive(Debug, Clone)]
pub struct TwoLevelOracle {
    tx: TxConfig,
    freqs: [f64; 2],
    /// Rabi frequency per unit full-scale envelope.
    coupling: [f64; 2],
    confusion: [ConfusionMatrix; 2],
}

impl TwoLevelOracle {
    pub fn new(model: &DeviceModel, tx: TxConfig) -> Self {
        Self {
            tx,
            freqs: [model.f1, model.f2],
            coupling: model.drive_coupling,
            confusion: [0, 1].map(|q| ConfusionMatrix::new(model.readout.f0[q], model.readout.f1[q])),
        }
    }

    /// Unitary applied to each qubit by the program.
    pub fn unitaries(&self, program: &Compiled) -> Result<[Su2; 2]> {
        let img = &program.image;
        let plan = &program.report.plan;
        let mut owner = [None; 32];
        for s in &plan.slots {
            if s.condition.is_some() {
                return Err(ExperimentError::Unsupported("conditional tones need the exchange".into()));
            }
            let offset = ftw_to_offset(s.ftw, self.tx.f_clk);
            let detuning = self.tx.carrier_freq() + offset - self.freqs[s.qubit];
            if detuning.abs() > 1e-6 {
                return Err(ExperimentError::Unsupported(format!(
                    "tone for qubit {} is {detuning} Hz off resonance",
                    s.qubit + 1
                )));
            }
            owner[nco_index(s.bank, s.nco)] = Some(s.qubit);
        }
        let amp_bits = img.envelopes.amp_bits;
        let pm_turn = (1u64 << img.envelopes.phase_mod_bits) as f64;
        let gain = self.tx.gain_linear();
        let mut refs: Vec<u32> = img.ncos.iter().map(|n| n.ref_phase).collect();
        let mut u = [ID; 2];
        for list in &program.lists {
            for r in list.entries() {
                let k = nco_index(r.bank, r.nco);
                let ins = img.table(r.bank, r.nco).get(r.slot).copied().ok_or_else(|| {
                    ExperimentError::Unsupported(format!("missing instruction b{} n{} s{}", r.bank, r.nco, r.slot))
                })?;
                if let Some(p) = ins.phase_update {
                    refs[k] = refs[k].wrapping_add(p) % PHASE_MODULUS;
                }
                let Some((start, stop)) = ins.range else { continue };
                let q = owner[k].ok_or_else(|| ExperimentError::Unsupported(format!("NCO b{} n{} has no qubit", r.bank, r.nco)))?;
                let base = (refs[k] as u64 + img.ncos[k].ftw as u64) as f64 / PHASE_MODULUS as f64;
                let words = &img.envelopes.entries()[start as usize..=stop as usize];
                let mut i = 0;
                while i < words.len() {
                    let mut j = i + 1;
                    while j < words.len() && words[j] == words[i] {
                        j += 1;
                    }
                    let w = words[i];
                    let a = w.fraction(amp_bits) * gain;
                    if a != 0.0 {
                        let phi = TAU * (base + w.phase_mod as f64 / pm_turn) + if a < 0.0 { std::f64::consts::PI } else { 0.0 };
                        let theta = TAU * self.coupling[q] * a.abs() * (j - i) as f64 / self.tx.f_clk;
                        u[q] = mul(&rotation(theta, phi), &u[q]);
                    }
                    i = j;
                }
            }
        }
        Ok(u)
    }

    /// Final single-qubit states.
    pub fn states(&self, program: &Compiled) -> Result<[[Complex64; 2]; 2]> {
        Ok(self.unitaries(program)?.map(|m| [m[0][0], m[1][0]]))
    }
}

impl Backend for TwoLevelOracle {
    fn populations(&self, program: &Compiled) -> Result<[f64; 4]> {
        let [a, b] = self.states(program)?;
        let p1 = [a[1].norm_sqr(), b[1].norm_sqr()];
        let mut pops = [0.0; 4];
        for (k, p) in pops.iter_mut().enumerate() {
            let (b1, b2) = (k >> 1, k & 1);
            let f = |q: usize, bit: usize| if bit == 1 { p1[q] } else { 1.0 - p1[q] };
            *p = f(0, b1) * f(1, b2);
        }
        Ok(pops)
    }

    fn readout(&self, pops: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (k, p) in pops.iter().enumerate() {
            let r1 = self.confusion[0].apply(if k >> 1 == 1 { [0.0, 1.0] } else { [1.0, 0.0] });
            let r2 = self.confusion[1].apply(if k & 1 == 1 { [0.0, 1.0] } else { [1.0, 0.0] });
            for (m, o) in out.iter_mut().enumerate() {
                *o += p * r1[m >> 1] * r2[m & 1];
            }
        }
        out
    }

    fn confusion(&self, qubit: usize) -> ConfusionMatrix {
        self.confusion[qubit]
    }
}
