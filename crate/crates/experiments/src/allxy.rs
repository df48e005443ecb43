// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! AllXY: 21 gate pairs from {I, X, Y, X2, Y2} whose ideal `<sigma_z>` is -1,
//! 0 or +1. Upper case is a pi rotation, lower case pi/2.

use cryotwin_compiler::{Gate, Program};
use serde::Serialize;

use crate::context::{Context, Point};
use crate::error::Result;
use crate::output::{Cell, Table};
use crate::parallel::par_map;

/// Pair labels in measurement order.
pub const ALLXY_PAIRS: [&str; 21] = [
    "II", "XX", "YY", "XY", "YX", "xI", "yI", "xy", "yx", "xY", "yX", "Xy", "Yx", "xX", "Xx", "yY", "Yy", "XI", "YI",
    "xx", "yy",
];

fn gate(c: char) -> Gate {
    match c {
        'I' => Gate::I,
        'X' => Gate::X2,
        'Y' => Gate::Y2,
        'x' => Gate::X,
        'y' => Gate::Y,
        _ => unreachable!("fixed pair table"),
    }
}

pub fn allxy_program(pair: &str, qubit: usize) -> Program {
    let mut p = Program::new();
    for c in pair.chars() {
        p.gate(gate(c), qubit);
    }
    p
}

/// Ideal `<sigma_z>` (|1> as +1) for each pair.
pub fn ideal_signature() -> [f64; 21] {
    let mut s = [0.0; 21];
    s[..5].fill(-1.0);
    s[17..].fill(1.0);
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllxyResult {
    pub qubit: usize,
    pub labels: Vec<String>,
    pub sigma_z: Vec<f64>,
    pub stderr: Vec<f64>,
    pub ideal: Vec<f64>,
    pub points: Vec<Point>,
}

pub fn run_allxy(ctx: &Context<'_>) -> Result<AllxyResult> {
    let q = ctx.spec.target();
    let points = par_map(&ALLXY_PAIRS, ctx.jobs, |i, pair| {
        let c = ctx.compile(&allxy_program(pair, q))?;
        ctx.measure(&c, i as u32)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(AllxyResult {
        qubit: q,
        labels: ALLXY_PAIRS.iter().map(|s| s.to_string()).collect(),
        sigma_z: points.iter().map(|p| p.estimate.sigma_z(q)).collect(),
        stderr: points.iter().map(|p| 2.0 * p.estimate.stderr[q]).collect(),
        ideal: ideal_signature().to_vec(),
        points,
    })
}

impl AllxyResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "label", "p1_q1", "p1_q2", "stderr", "sigma_z"]);
        for (i, p) in self.points.iter().enumerate() {
            let e = &p.estimate;
            t.push(vec![
                i.into(),
                self.labels[i].as_str().into(),
                e.p1[0].into(),
                e.p1[1].into(),
                e.stderr[self.qubit].into(),
                Cell::Num(self.sigma_z[i]),
            ]);
        }
        t
    }
}
