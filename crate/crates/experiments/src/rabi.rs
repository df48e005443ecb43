// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Rabi oscillations: a rectangular burst at the calibrated pi amplitude whose
//! length is swept through the stop address.

use cryotwin_compiler::{Gate, GateOp, Program, Rotation};
use cryotwin_controller::EnvelopeEntry;
use serde::Serialize;

use crate::context::{Context, Point};
use crate::error::{ExperimentError, Result};
use crate::output::{Cell, Table};
use crate::parallel::par_map;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RabiResult {
    pub simultaneous: bool,
    /// Driven qubits, zero-based.
    pub qubits: Vec<usize>,
    pub durations: Vec<f64>,
    /// Rabi frequency implied by the quantized calibrated amplitude, per qubit.
    pub rabi_hz: [f64; 2],
    pub points: Vec<Point>,
}

/// Burst program for one sweep point. A zero duration is an empty program.
pub fn rabi_program(qubits: &[usize], duration: f64) -> Program {
    let mut p = Program::new();
    if duration > 0.0 {
        for (k, &q) in qubits.iter().enumerate() {
            let op = GateOp::new(Gate::X2, q).with_duration(duration);
            p.push(if k > 0 { op.in_parallel() } else { op });
        }
    }
    p
}

/// Rabi frequency of the calibrated pi burst on `qubit` after amplitude quantization.
pub fn calibrated_rabi_hz(ctx: &Context<'_>, qubit: usize) -> Result<f64> {
    let st = ctx.stack;
    let slot = st.plan.slots_for(qubit)[0];
    let amp = st.cal.slots[slot].burst(Rotation::Pi).amplitude;
    let word = EnvelopeEntry::from_fraction(amp, 0, st.cal.amp_bits, st.cal.phase_mod_bits)?;
    Ok(st.cal.rabi_per_unit[qubit] * word.fraction(st.cal.amp_bits))
}

pub fn run_rabi(ctx: &Context<'_>, simultaneous: bool) -> Result<RabiResult> {
    let qubits = if simultaneous { vec![0, 1] } else { vec![ctx.spec.target()] };
    let durations = ctx.spec.sweep().ok_or_else(|| ExperimentError::Spec(vec!["rabi needs a sweep".into()]))?.values();
    let rabi_hz = [calibrated_rabi_hz(ctx, 0)?, calibrated_rabi_hz(ctx, 1)?];
    let points = par_map(&durations, ctx.jobs, |i, &t| {
        let c = ctx.compile(&rabi_program(&qubits, t))?;
        ctx.measure(&c, i as u32)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(RabiResult { simultaneous, qubits, durations, rabi_hz, points })
}

impl RabiResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "p1_q1", "p1_q2", "stderr"]);
        for (x, p) in self.durations.iter().zip(&self.points) {
            let e = &p.estimate;
            t.push(vec![Cell::Num(*x), e.p1[0].into(), e.p1[1].into(), e.stderr[0].max(e.stderr[1]).into()]);
        }
        t
    }
}
