// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-qubit state tomography along a truncated pi burst.
//!
//! Each state is measured after four pre-rotations (I, Y, X, X2), which give
//! `2*P0 - 1` projections onto -z, +x, -y and +z. The linear estimate is
//! projected onto the nearest physical state by clipping the density
//! matrix's negative eigenvalue and renormalizing.

use cryotwin_compiler::{Gate, GateOp, Program};
use num_complex::Complex64;
use serde::Serialize;

use crate::context::{Context, Point};
use crate::error::{ExperimentError, Result};
use crate::output::Table;
use crate::parallel::par_map;

pub const PRE_ROTATIONS: [Gate; 4] = [Gate::I, Gate::Y, Gate::X, Gate::X2];

/// Bloch vector from the four projections `(p_I, p_Y, p_X, p_X2)`.
pub fn linear_bloch(p: [f64; 4]) -> [f64; 3] {
    [p[1], -p[2], (p[3] - p[0]) / 2.0]
}

/// `(I + r.sigma) / 2` in the basis (|0>, |1>) with |1> at +z.
pub fn density_matrix(r: [f64; 3]) -> [[Complex64; 2]; 2] {
    // x + iy = 2 <0|rho|1>, so rho01 = (x + iy)/2 and rho11 = (1 + z)/2.
    [
        [Complex64::new((1.0 - r[2]) / 2.0, 0.0), Complex64::new(r[0] / 2.0, r[1] / 2.0)],
        [Complex64::new(r[0] / 2.0, -r[1] / 2.0), Complex64::new((1.0 + r[2]) / 2.0, 0.0)],
    ]
}

/// Eigenvalues of a 2x2 Hermitian matrix, largest first.
pub fn eigenvalues(m: &[[Complex64; 2]; 2]) -> [f64; 2] {
    let (a, d) = (m[0][0].re, m[1][1].re);
    let mean = (a + d) / 2.0;
    let half = (((a - d) / 2.0).powi(2) + m[0][1].norm_sqr()).sqrt();
    [mean + half, mean - half]
}

/// Closest physical state: eigenvalues clipped at zero and renormalized,
/// eigenvectors kept. For a qubit that shortens `r` to unit length when it
/// points outside the Bloch ball.
pub fn mle_project(r: [f64; 3]) -> [f64; 3] {
    let [hi, lo] = eigenvalues(&density_matrix(r));
    if lo >= 0.0 {
        return r;
    }
    // Clip and renormalize; the Bloch length is the eigenvalue gap over the trace.
    let (hi, lo) = (hi.max(0.0), 0.0);
    let length = (hi - lo) / (hi + lo);
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let scale = length / norm;
    r.map(|v| v * scale)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomoPoint {
    pub duration: f64,
    /// Projections onto (-z, +x, -y, +z).
    pub projections: [f64; 4],
    pub linear: [f64; 3],
    pub bloch: [f64; 3],
    /// The same reconstruction from exact record probabilities.
    pub expected: [f64; 3],
    /// Standard error of each Bloch component.
    pub stderr: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomoResult {
    pub qubit: usize,
    pub points: Vec<TomoPoint>,
}

pub fn qst_program(qubit: usize, duration: f64, pre: Gate) -> Program {
    let mut p = Program::new();
    if duration > 0.0 {
        p.push(GateOp::new(Gate::X2, qubit).with_duration(duration));
    }
    if pre != Gate::I {
        p.gate(pre, qubit);
    }
    p
}

fn reconstruct(p0: [f64; 4]) -> ([f64; 4], [f64; 3]) {
    let proj = p0.map(|p| 2.0 * p - 1.0);
    let lin = linear_bloch(proj);
    (proj, lin)
}

pub fn run_qst_trajectory(ctx: &Context<'_>) -> Result<TomoResult> {
    let q = ctx.spec.target();
    let durations = ctx.spec.sweep().ok_or_else(|| ExperimentError::Spec(vec!["qst needs a sweep".into()]))?.values();
    let jobs: Vec<(f64, usize)> = durations.iter().flat_map(|&t| (0..4).map(move |b| (t, b))).collect();
    let measured = par_map(&jobs, ctx.jobs, |i, &(t, b)| {
        let c = ctx.compile(&qst_program(q, t, PRE_ROTATIONS[b]))?;
        let pops = ctx.backend.populations(&c)?;
        Ok::<(Point, f64), ExperimentError>((ctx.measure_populations(&pops, i as u32)?, ctx.expected(&pops)?.p1[q]))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let n = ctx.spec.shots as f64;
    let points = durations
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let set = &measured[4 * k..4 * k + 4];
            let (projections, linear) = reconstruct([0, 1, 2, 3].map(|b| 1.0 - set[b].0.estimate.p1[q]));
            let (_, expected) = reconstruct([0, 1, 2, 3].map(|b| 1.0 - set[b].1));
            let var = [0, 1, 2, 3].map(|b| {
                let e = set[b].0.estimate;
                let s = e.stderr[q];
                // A fully certain record still carries the one-shot resolution.
                (2.0 * s).powi(2).max(1.0 / (n * n))
            });
            TomoPoint {
                duration: t,
                projections,
                linear,
                bloch: mle_project(linear),
                expected,
                stderr: [var[1].sqrt(), var[2].sqrt(), ((var[0] + var[3]) / 4.0).sqrt()],
            }
        })
        .collect();
    Ok(TomoResult { qubit: q, points })
}

impl TomoResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "proj_mz", "proj_px", "proj_my", "proj_pz", "bx", "by", "bz", "stderr"]);
        for p in &self.points {
            let mut row = vec![p.duration.into()];
            row.extend(p.projections.iter().map(|v| (*v).into()));
            row.extend(p.bloch.iter().map(|v| (*v).into()));
            row.push(p.stderr.iter().cloned().fold(0.0, f64::max).into());
            t.push(row);
        }
        t
    }
}
