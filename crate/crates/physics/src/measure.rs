// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-step single-shot readout.
//!
//! Q2 is read directly. Q2 is then reset, Q1 is mapped onto it with a CROT
//! that succeeds with probability `crot_readout_fidelity` (otherwise it leaves
//! a random bit), and Q2 is read a second time to give the Q1 record.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::device::DeviceModel;
use crate::state::{index, QuantumState};

/// One shot record: `(q1_bit, q2_bit)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shot {
    pub q1: u8,
    pub q2: u8,
}

/// P(read 1 | true bit), given a qubit's assignment fidelities.
fn read_one(bit: f64, f0: f64, f1: f64) -> f64 {
    // `bit` is the probability the true bit is 1.
    bit * f1 + (1.0 - bit) * (1.0 - f0)
}

/// Distribution of the recorded `(q1, q2)` pair, indexed `2*q1 + q2`, given
/// the true basis populations.
pub fn outcome_distribution(model: &DeviceModel, pops: &[f64; 4]) -> [f64; 4] {
    let r = &model.readout;
    let c = model.crot_readout_fidelity;
    let mut out = [0.0; 4];
    for b1 in 0..2u8 {
        for b2 in 0..2u8 {
            let p = pops[index(b1, b2)];
            if p == 0.0 {
                continue;
            }
            let q2_one = read_one(b2 as f64, r.f0[1], r.f1[1]);
            let mapped_one = c * b1 as f64 + (1.0 - c) * 0.5;
            let q1_one = read_one(mapped_one, r.f0[0], r.f1[0]);
            out[index(1, 1)] += p * q1_one * q2_one;
            out[index(1, 0)] += p * q1_one * (1.0 - q2_one);
            out[index(0, 1)] += p * (1.0 - q1_one) * q2_one;
            out[index(0, 0)] += p * (1.0 - q1_one) * (1.0 - q2_one);
        }
    }
    out
}

/// Draw one outcome from a distribution over the four records.
pub fn sample_outcome<R: Rng + ?Sized>(dist: &[f64; 4], rng: &mut R) -> Shot {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (k, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return Shot { q1: (k >> 1) as u8, q2: (k & 1) as u8 };
        }
    }
    // Rounding left the total just under one.
    let k = dist.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    Shot { q1: (k >> 1) as u8, q2: (k & 1) as u8 }
}

/// Measure both qubits. Returns the record and the post-measurement state,
/// which has Q1 in the sampled true state and Q2 reset to |0>.
pub fn measure<R: Rng + ?Sized>(model: &DeviceModel, state: &QuantumState, rng: &mut R) -> (Shot, QuantumState) {
    let pops = state.populations();
    let total: f64 = pops.iter().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut truth = 3;
    for (k, p) in pops.iter().enumerate() {
        acc += p;
        if u < acc {
            truth = k;
            break;
        }
    }
    let (b1, b2) = ((truth >> 1) as u8, (truth & 1) as u8);
    let r = &model.readout;
    let flip = |bit: u8, f0: f64, f1: f64, u: f64| -> u8 {
        let keep = if bit == 1 { f1 } else { f0 };
        if u < keep {
            bit
        } else {
            1 - bit
        }
    };
    let q2 = flip(b2, r.f0[1], r.f1[1], rng.random());
    let mapped = if rng.random::<f64>() < model.crot_readout_fidelity { b1 } else { rng.random_range(0..2u8) };
    let q1 = flip(mapped, r.f0[0], r.f1[0], rng.random());
    (Shot { q1, q2 }, QuantumState::basis(b1, 0))
}
