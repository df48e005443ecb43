// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Burst spectroscopy: one pi burst per point with the tone retuned across
//! each resonance line of the plan.

use cryotwin_compiler::{Gate, GateOp, Program};
use serde::Serialize;

use crate::context::{Context, Point};
use crate::error::{ExperimentError, Result};
use crate::output::Table;
use crate::parallel::par_map;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Line {
    /// Zero-based probed qubit.
    pub qubit: usize,
    /// State the other qubit was prepared in, for conditional lines.
    pub condition: Option<u8>,
    /// Planned resonance.
    pub nominal_hz: f64,
    /// Synthesized probe frequency per point.
    pub freqs: Vec<f64>,
    pub points: Vec<Point>,
    /// Centroid of the points above half maximum.
    pub peak_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectroscopyResult {
    pub lines: Vec<Line>,
}

/// Prepare the other qubit in `condition`, then play a pi burst of the spec's shape on the tone for `(qubit, condition)`.
pub fn probe_program(ctx: &Context<'_>, qubit: usize, condition: Option<u8>) -> Program {
    let mut p = Program::new();
    if condition == Some(1) {
        p.gate(Gate::X2, 1 - qubit);
    }
    let gate = match condition {
        None => Gate::X2,
        Some(0) => Gate::CrotLow,
        Some(_) => Gate::CrotHigh,
    };
    p.push(GateOp::new(gate, qubit).with_shape(ctx.spec.shape));
    p
}

/// Centroid of the contiguous run of points at or above half the maximum,
/// weighted by height above the half level.
pub fn half_max_centroid(x: &[f64], y: &[f64]) -> Option<f64> {
    let (imax, &ymax) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    if !(ymax > 0.0) {
        return None;
    }
    let half = ymax / 2.0;
    let mut lo = imax;
    while lo > 0 && y[lo - 1] >= half {
        lo -= 1;
    }
    let mut hi = imax;
    while hi + 1 < y.len() && y[hi + 1] >= half {
        hi += 1;
    }
    let (mut sw, mut swx) = (0.0, 0.0);
    for k in lo..=hi {
        let w = y[k] - half;
        sw += w;
        swx += w * x[k];
    }
    Some(if sw > 0.0 { swx / sw } else { x[imax] })
}

pub fn run_spectroscopy(ctx: &Context<'_>) -> Result<SpectroscopyResult> {
    let plan = &ctx.stack.plan;
    let offsets = ctx.spec.sweep().ok_or_else(|| ExperimentError::Spec(vec!["spectroscopy needs a sweep".into()]))?.values();
    let mut lines = Vec::new();
    let mut stream = 0u32;
    for (slot, s) in plan.slots.iter().enumerate() {
        let program = probe_program(ctx, s.qubit, s.condition);
        let plans = offsets.iter().map(|df| plan.with_slot_freq(slot, s.freq_hz + df)).collect::<std::result::Result<Vec<_>, _>>()?;
        let first = stream;
        let points = par_map(&plans, ctx.jobs, |i, p| {
            let c = ctx.stack.compile_with(&program, p)?;
            ctx.measure(&c, first + i as u32)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        stream += plans.len() as u32;
        let freqs: Vec<f64> =
            plans.iter().map(|p| p.carrier_hz + p.slots[slot].synthesized_offset(p.f_clk)).collect();
        let y: Vec<f64> = points.iter().map(|p| p.estimate.p1[s.qubit]).collect();
        lines.push(Line {
            qubit: s.qubit,
            condition: s.condition,
            nominal_hz: s.freq_hz,
            peak_hz: half_max_centroid(&freqs, &y),
            freqs,
            points,
        });
    }
    Ok(SpectroscopyResult { lines })
}

impl SpectroscopyResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["line", "x", "p1_q1", "p1_q2", "stderr"]);
        for (k, l) in self.lines.iter().enumerate() {
            for (f, p) in l.freqs.iter().zip(&l.points) {
                let e = &p.estimate;
                t.push(vec![k.into(), (*f).into(), e.p1[0].into(), e.p1[1].into(), e.stderr[l.qubit].into()]);
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centroid_of_symmetric_peak() {
        let x: Vec<f64> = (0..41).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| (-(v - 20.3f64).powi(2) / 20.0).exp()).collect();
        let c = half_max_centroid(&x, &y).unwrap();
        assert!((c - 20.3).abs() < 0.1, "{c}");
        assert_eq!(half_max_centroid(&x, &vec![0.0; 41]), None);
    }
}
