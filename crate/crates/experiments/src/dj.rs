// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Deutsch-Jozsa with the exchange on. Both qubits are prepared
//! with -Y, the oracle runs, both are unprepared with Y and Q2 is read.

use std::f64::consts::FRAC_PI_2;

use cryotwin_compiler::{Gate, Program};
use serde::Serialize;

use crate::context::{Context, Point};
use crate::error::{ExperimentError, Result};
use crate::output::Table;
use crate::parallel::par_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    Cnot,
    ZCnot,
    Identity,
    X2,
}

impl Oracle {
    pub const ALL: [Oracle; 4] = [Oracle::Cnot, Oracle::ZCnot, Oracle::Identity, Oracle::X2];

    pub fn name(&self) -> &'static str {
        match self {
            Oracle::Cnot => "cnot",
            Oracle::ZCnot => "z_cnot",
            Oracle::Identity => "i",
            Oracle::X2 => "x2",
        }
    }

    /// Ideal P(Q2 = 1).
    pub fn expected(&self) -> f64 {
        match self {
            Oracle::Cnot | Oracle::ZCnot => 1.0,
            Oracle::Identity | Oracle::X2 => 0.0,
        }
    }

    /// Gates on (Q1, Q2). A CROT on Q1 conditioned on Q2 kicks a quarter
    /// turn of phase back onto Q2, which the Z gate removes.
    pub fn program(&self) -> Program {
        let mut p = Program::new();
        match self {
            Oracle::Cnot => {
                p.gate(Gate::CrotHigh, 0).gate(Gate::Z(-FRAC_PI_2), 1);
            }
            Oracle::ZCnot => {
                p.gate(Gate::CrotLow, 0).gate(Gate::Z(FRAC_PI_2), 1);
            }
            Oracle::Identity => {}
            Oracle::X2 => {
                p.gate(Gate::X2, 0);
            }
        }
        p
    }
}

pub fn dj_program(oracle: Oracle) -> Program {
    let mut p = Program::new();
    p.gate(Gate::MY, 0).gate(Gate::MY, 1);
    p.extend(&oracle.program());
    p.gate(Gate::Y, 0).gate(Gate::Y, 1);
    p
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DjResult {
    pub oracles: Vec<Oracle>,
    /// Corrected P(Q2 = 1) from shots.
    pub p1: Vec<f64>,
    pub expected: Vec<f64>,
    pub points: Vec<Point>,
    pub triggers: Vec<usize>,
}

pub fn run_dj(ctx: &Context<'_>) -> Result<DjResult> {
    if !ctx.stack.plan.conditional() {
        return Err(ExperimentError::Unsupported("Deutsch-Jozsa needs the conditional frequency plan".into()));
    }
    let out = par_map(&Oracle::ALL, ctx.jobs, |i, o| {
        let c = ctx.compile(&dj_program(*o))?;
        Ok::<_, ExperimentError>((ctx.measure(&c, i as u32)?, c.report.triggers))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (points, triggers): (Vec<Point>, Vec<usize>) = out.into_iter().unzip();
    Ok(DjResult {
        oracles: Oracle::ALL.to_vec(),
        p1: points.iter().map(|p| p.estimate.p1[1]).collect(),
        expected: Oracle::ALL.iter().map(Oracle::expected).collect(),
        points,
        triggers,
    })
}

impl DjResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "label", "p1_q1", "p1_q2", "stderr"]);
        for (i, p) in self.points.iter().enumerate() {
            let e = &p.estimate;
            t.push(vec![i.into(), self.oracles[i].name().into(), e.p1[0].into(), e.p1[1].into(), e.stderr[1].into()]);
        }
        t
    }
}
