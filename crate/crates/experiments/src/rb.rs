// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-qubit randomized benchmarking.
//!
//! Random strings of Cliffords, each built from the primitives
//! {I, +/-X, +/-Y, X2, Y2}, are closed by the Clifford that undoes them.
//! The survival probability is fitted to `A p^m + B`.

use cryotwin_compiler::{CompileOptions, Gate, Program};
use cryotwin_physics::shot_rng;
use rand::Rng;
use serde::Serialize;

use crate::context::Context;
use crate::error::{ExperimentError, Result};
use crate::output::Table;
use crate::parallel::par_map;
use crate::shots::sample_counts;
use crate::spec::ExperimentSpec;
use crate::stack::Stack;

/// The 24 single-qubit Cliffords as primitive strings in time order.
pub const CLIFFORDS: [&[Gate]; 24] = [
    // Paulis
    &[Gate::I],
    &[Gate::X2],
    &[Gate::Y2],
    &[Gate::Y2, Gate::X2],
    // 2pi/3 rotations
    &[Gate::X, Gate::Y],
    &[Gate::X, Gate::MY],
    &[Gate::MX, Gate::Y],
    &[Gate::MX, Gate::MY],
    &[Gate::Y, Gate::X],
    &[Gate::Y, Gate::MX],
    &[Gate::MY, Gate::X],
    &[Gate::MY, Gate::MX],
    // pi/2 rotations
    &[Gate::X],
    &[Gate::MX],
    &[Gate::Y],
    &[Gate::MY],
    &[Gate::MX, Gate::Y, Gate::X],
    &[Gate::MX, Gate::MY, Gate::X],
    // Hadamard-like
    &[Gate::X2, Gate::Y],
    &[Gate::X2, Gate::MY],
    &[Gate::Y2, Gate::X],
    &[Gate::Y2, Gate::MX],
    &[Gate::X, Gate::Y, Gate::X],
    &[Gate::MX, Gate::Y, Gate::MX],
];

/// Average primitive count per Clifford in [`CLIFFORDS`].
pub fn primitives_per_clifford() -> f64 {
    CLIFFORDS.iter().map(|c| c.len()).sum::<usize>() as f64 / CLIFFORDS.len() as f64
}

pub type So3 = [[f64; 3]; 3];

fn so3_mul(a: &So3, b: &So3) -> So3 {
    let mut m = [[0.0; 3]; 3];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = (0..3).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    m
}

const SO3_ID: So3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Right-handed rotation of the Bloch sphere by a primitive.
pub fn primitive_so3(g: Gate) -> So3 {
    // (axis, sin, cos) of the rotation angle.
    let (axis, s, c) = match g {
        Gate::I => return SO3_ID,
        Gate::X => (0, 1.0, 0.0),
        Gate::MX => (0, -1.0, 0.0),
        Gate::X2 => (0, 0.0, -1.0),
        Gate::Y => (1, 1.0, 0.0),
        Gate::MY => (1, -1.0, 0.0),
        Gate::Y2 => (1, 0.0, -1.0),
        other => panic!("{other} is not a Clifford primitive"),
    };
    if axis == 0 {
        [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
    } else {
        [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
    }
}

pub fn clifford_so3(index: usize) -> So3 {
    CLIFFORDS[index].iter().fold(SO3_ID, |acc, g| so3_mul(&primitive_so3(*g), &acc))
}

fn same(a: &So3, b: &So3) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).abs() < 1e-9)
}

/// Index of the Clifford equal to `m`.
pub fn find_clifford(m: &So3) -> Option<usize> {
    (0..24).find(|&k| same(&clifford_so3(k), m))
}

/// Check that the table holds 24 distinct elements closed under composition.
pub fn verify_group() -> std::result::Result<(), String> {
    let mats: Vec<So3> = (0..24).map(clifford_so3).collect();
    for i in 0..24 {
        for j in 0..i {
            if same(&mats[i], &mats[j]) {
                return Err(format!("Cliffords {i} and {j} coincide"));
            }
        }
    }
    for a in &mats {
        for b in &mats {
            if find_clifford(&so3_mul(a, b)).is_none() {
                return Err("table is not closed".into());
            }
        }
    }
    Ok(())
}

fn transpose(m: &So3) -> So3 {
    let mut t = [[0.0; 3]; 3];
    for (r, row) in m.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            t[c][r] = *v;
        }
    }
    t
}

/// `m` random Cliffords followed by the recovery Clifford.
pub fn random_sequence<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut seq: Vec<usize> = (0..m).map(|_| rng.random_range(0..24)).collect();
    let total = seq.iter().fold(SO3_ID, |acc, &k| so3_mul(&clifford_so3(k), &acc));
    seq.push(find_clifford(&transpose(&total)).expect("the table is a group"));
    seq
}

pub fn sequence_program(seq: &[usize], qubit: usize) -> Program {
    let mut p = Program::new();
    for &k in seq {
        for g in CLIFFORDS[k] {
            p.gate(*g, qubit);
        }
    }
    p
}

/// Stream tags keeping sequence and noise draws apart from the shot streams.
const SEQUENCE_STREAM: u32 = 1 << 31;
const NOISE_STREAM: u32 = 1 << 30;

fn sequence_rng(seed: u64, l: usize, s: usize) -> rand_chacha::ChaCha8Rng {
    shot_rng(seed, SEQUENCE_STREAM | l as u32, s as u32)
}

/// Simulated populations of every sequence, before any depolarizing mix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RbData {
    pub qubit: usize,
    pub lengths: Vec<usize>,
    /// `[length][sequence]` populations.
    pub populations: Vec<Vec<[f64; 4]>>,
    /// Instruction-list triggers needed by the longest sequence.
    pub max_triggers: usize,
}

pub fn simulate_rb(ctx: &Context<'_>) -> Result<RbData> {
    verify_group().map_err(ExperimentError::Fit)?;
    let spec = ctx.spec;
    let q = spec.target();
    let lengths = spec.rb.lengths.clone();
    let jobs: Vec<(usize, usize)> =
        (0..lengths.len()).flat_map(|l| (0..spec.rb.sequences).map(move |s| (l, s))).collect();
    let mut stack = ctx.stack.clone();
    stack.options = CompileOptions { allow_split: true, ..stack.options };
    let results = par_map(&jobs, ctx.jobs, |_, &(l, s)| {
        let seq = random_sequence(lengths[l], &mut sequence_rng(spec.seed, l, s));
        let c = stack.compile(&sequence_program(&seq, q))?;
        let pops = if spec.rb.noise_draws == 0 {
            ctx.backend.populations(&c)?
        } else {
            let mut rng = shot_rng(spec.seed, NOISE_STREAM | l as u32, s as u32);
            ctx.backend.sampled_populations(&c, spec.rb.noise_draws, &mut rng)?
        };
        Ok::<_, ExperimentError>((pops, c.report.triggers))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut populations = vec![Vec::with_capacity(spec.rb.sequences); lengths.len()];
    let mut max_triggers = 0;
    for (&(l, _), (pops, trig)) in jobs.iter().zip(results) {
        populations[l].push(pops);
        max_triggers = max_triggers.max(trig);
    }
    Ok(RbData { qubit: q, lengths, populations, max_triggers })
}

/// Mix `qubit` toward the maximally mixed state with weight `lambda`.
pub fn depolarize(pops: &[f64; 4], qubit: usize, lambda: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, p) in pops.iter().enumerate() {
        let partner = if qubit == 0 { k ^ 2 } else { k ^ 1 };
        out[k] += (1.0 - lambda / 2.0) * p;
        out[partner] += lambda / 2.0 * p;
    }
    out
}

/// Least-squares fit of `A p^m + B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub a: f64,
    pub p: f64,
    pub b: f64,
    pub sigma_a: f64,
    pub sigma_p: f64,
    pub sigma_b: f64,
    pub rms_residual: f64,
}

fn solve3(m: [[f64; 3]; 3], v: [f64; 3]) -> Option<[f64; 3]> {
    let inv = invert3(m)?;
    Some([0, 1, 2].map(|r| (0..3).map(|c| inv[r][c] * v[c]).sum()))
}

fn invert3(m: [[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let cof = [
        [c(1, 2, 1, 2), -c(1, 2, 0, 2), c(1, 2, 0, 1)],
        [-c(0, 2, 1, 2), c(0, 2, 0, 2), -c(0, 2, 0, 1)],
        [c(0, 1, 1, 2), -c(0, 1, 0, 2), c(0, 1, 0, 1)],
    ];
    let det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2];
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    if !(det.abs() > 1e-14 * scale.powi(3)) {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for (r, row) in inv.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = cof[k][r] / det;
        }
    }
    Some(inv)
}

/// Levenberg-Marquardt on unweighted points `(m, y)`, with `p` kept in (0, 1].
pub fn fit_decay(points: &[(f64, f64)]) -> Result<DecayFit> {
    if points.len() < 4 {
        return Err(ExperimentError::Fit(format!("{} points for three parameters", points.len())));
    }
    let y0 = points[0].1;
    if points.iter().all(|&(_, y)| y == y0) {
        // No decay at all: the amplitude is unidentifiable, so report p = 1 exactly.
        return Ok(DecayFit { a: 0.0, p: 1.0, b: y0, sigma_a: 0.0, sigma_p: 0.0, sigma_b: 0.0, rms_residual: 0.0 });
    }
    let model = |a: f64, p: f64, b: f64, m: f64| a * p.powf(m) + b;
    let rss = |x: [f64; 3]| points.iter().map(|&(m, y)| (y - model(x[0], x[1], x[2], m)).powi(2)).sum::<f64>();
    // Start from the asymptote 1/2 and a log-linear slope.
    let b0 = 0.5;
    let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(m, y) in points {
        if y - b0 > 1e-3 {
            let l = (y - b0).ln();
            sx += m;
            sy += l;
            sxx += m * m;
            sxy += m * l;
            n += 1.0;
        }
    }
    let slope = if n >= 2.0 && n * sxx - sx * sx > 0.0 { (n * sxy - sx * sy) / (n * sxx - sx * sx) } else { -1e-3 };
    let p0 = slope.exp().clamp(0.5, 1.0 - 1e-9);
    let a0 = if n > 0.0 { ((sy - slope * sx) / n).exp() } else { 0.5 };
    let mut x = [a0, p0, b0];
    let mut cost = rss(x);
    let mut lambda = 1e-3;
    let jac = |x: [f64; 3], m: f64| [x[1].powf(m), x[0] * m * x[1].powf(m - 1.0), 1.0];
    for _ in 0..500 {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for &(m, y) in points {
            let j = jac(x, m);
            let r = y - model(x[0], x[1], x[2], m);
            for a in 0..3 {
                jtr[a] += j[a] * r;
                for b in 0..3 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj;
            for (k, row) in damped.iter_mut().enumerate() {
                row[k] += lambda * jtj[k][k].max(1e-12);
            }
            let Some(step) = solve3(damped, jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [x[0] + step[0], (x[1] + step[1]).clamp(1e-9, 1.0), x[2] + step[2]];
            let c = rss(trial);
            if c < cost {
                let rel = (cost - c) / cost.max(1e-300);
                x = trial;
                cost = c;
                lambda = (lambda / 10.0).max(1e-12);
                improved = rel > 1e-15;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let dof = (points.len() - 3) as f64;
    let s2 = cost / dof;
    let mut jtj = [[0.0; 3]; 3];
    for &(m, _) in points {
        let j = jac(x, m);
        for a in 0..3 {
            for b in 0..3 {
                jtj[a][b] += j[a] * j[b];
            }
        }
    }
    let cov = invert3(jtj).ok_or_else(|| {
        // At p = 1 the amplitude and offset are interchangeable.
        ExperimentError::Fit(if x[1] >= 1.0 - 1e-9 {
            "no decay resolved; the fit reached p = 1, try longer sequences".into()
        } else {
            "singular normal matrix".into()
        })
    })?;
    Ok(DecayFit {
        a: x[0],
        p: x[1],
        b: x[2],
        sigma_a: (s2 * cov[0][0]).sqrt(),
        sigma_p: (s2 * cov[1][1]).sqrt(),
        sigma_b: (s2 * cov[2][2]).sqrt(),
        rms_residual: s2.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RbResult {
    pub qubit: usize,
    pub lengths: Vec<usize>,
    pub mean_survival: Vec<f64>,
    /// Standard error of the mean over sequences.
    pub stderr: Vec<f64>,
    pub fit: DecayFit,
    /// Average fidelity per Clifford, `1 - (1 - p)/2`.
    pub clifford_fidelity: f64,
    pub clifford_fidelity_sigma: f64,
    pub primitives_per_clifford: f64,
    /// Average fidelity per primitive gate.
    pub gate_fidelity: f64,
    pub gate_fidelity_sigma: f64,
    pub depolarizing: Option<f64>,
    pub max_triggers: usize,
}

/// Sample shots from simulated sequences and fit. `depolarizing` is the
/// probability per Clifford (recovery included) of fully depolarizing the qubit.
pub fn analyze_rb(data: &RbData, depolarizing: Option<f64>, shots: u32, seed: u64) -> Result<RbResult> {
    let q = data.qubit;
    let mut points = Vec::new();
    let mut mean_survival = Vec::new();
    let mut stderr = Vec::new();
    let mut stream = 0u32;
    for (l, &m) in data.lengths.iter().enumerate() {
        let lambda = depolarizing.map_or(0.0, |e| 1.0 - (1.0 - e).powi(m as i32 + 1));
        let mut ys = Vec::new();
        for pops in &data.populations[l] {
            // Readout is ideal here; the fitted offset absorbs any asymmetry.
            let dist = depolarize(pops, q, lambda);
            let counts = sample_counts(&dist, seed, stream, shots);
            stream += 1;
            let zero = if q == 0 { counts[0] + counts[1] } else { counts[0] + counts[2] };
            let y = zero as f64 / shots as f64;
            points.push((m as f64, y));
            ys.push(y);
        }
        let n = ys.len() as f64;
        let mean = ys.iter().sum::<f64>() / n;
        let var = if n > 1.0 { ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        mean_survival.push(mean);
        stderr.push((var / n).sqrt());
    }
    let fit = fit_decay(&points)?;
    let k = primitives_per_clifford();
    Ok(RbResult {
        qubit: q,
        lengths: data.lengths.clone(),
        mean_survival,
        stderr,
        fit,
        clifford_fidelity: 1.0 - (1.0 - fit.p) / 2.0,
        clifford_fidelity_sigma: fit.sigma_p / 2.0,
        primitives_per_clifford: k,
        gate_fidelity: 1.0 - (1.0 - fit.p) / 2.0 / k,
        gate_fidelity_sigma: fit.sigma_p / 2.0 / k,
        depolarizing,
        max_triggers: data.max_triggers,
    })
}

pub fn run_rb(ctx: &Context<'_>) -> Result<RbResult> {
    let data = simulate_rb(ctx)?;
    analyze_rb(&data, ctx.spec.rb.depolarizing, ctx.spec.shots, ctx.spec.seed)
}

/// Outcome of tuning the quasi-static detuning on the benchmarked qubit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tuning {
    /// Detuning spread tried at each round, Hz.
    pub sigmas: Vec<f64>,
    /// Gate fidelity found at each round.
    pub fidelities: Vec<f64>,
    pub result: RbResult,
}

/// Scale `sigma_detune` on the target qubit until the per-gate fidelity lands
/// in `window`. Infidelity grows as the square of the spread, so each round
/// rescales by the square root of the infidelity ratio.
pub fn tune_detuning(
    stack: &Stack,
    spec: &ExperimentSpec,
    window: (f64, f64),
    pilot_sigma: f64,
    rounds: usize,
    jobs: usize,
) -> Result<Tuning> {
    let q = spec.target();
    let goal = 1.0 - (window.0 + window.1) / 2.0;
    let mut sigma = pilot_sigma;
    let mut sigmas = Vec::new();
    let mut fidelities = Vec::new();
    for round in 0..rounds.max(1) {
        let mut st = stack.clone();
        st.model.sigma_detune[q] = sigma;
        let backend = st.device(spec.nodes)?;
        let ctx = Context { stack: &st, backend: &backend, spec, jobs };
        let r = run_rb(&ctx)?;
        sigmas.push(sigma);
        fidelities.push(r.gate_fidelity);
        let inside = (window.0..=window.1).contains(&r.gate_fidelity);
        if inside || round + 1 == rounds.max(1) {
            return Ok(Tuning { sigmas, fidelities, result: r });
        }
        let infidelity = (1.0 - r.gate_fidelity).max(1e-9);
        sigma *= (goal / infidelity).sqrt();
    }
    unreachable!("the loop returns on its last round")
}

impl RbResult {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "survival", "stderr", "fit"]);
        for (i, &m) in self.lengths.iter().enumerate() {
            let f = self.fit.a * self.fit.p.powf(m as f64) + self.fit.b;
            t.push(vec![m.into(), self.mean_survival[i].into(), self.stderr[i].into(), f.into()]);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn table_is_the_clifford_group() {
        verify_group().unwrap();
        assert_eq!(primitives_per_clifford(), 1.875);
        assert_eq!(find_clifford(&SO3_ID), Some(0));
    }

    #[test]
    fn fit_recovers_exact_decay() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]
            .iter()
            .map(|&m| (m, 0.47 * 0.985f64.powf(m) + 0.51))
            .collect();
        let f = fit_decay(&pts).unwrap();
        assert!((f.p - 0.985).abs() < 1e-9 && (f.a - 0.47).abs() < 1e-8 && (f.b - 0.51).abs() < 1e-8, "{f:?}");
    }

    #[test]
    fn depolarizing_mix() {
        let p = depolarize(&[1.0, 0.0, 0.0, 0.0], 1, 0.3);
        assert!((p[0] - 0.85).abs() < 1e-15 && (p[1] - 0.15).abs() < 1e-15);
        let p = depolarize(&[0.0, 1.0, 0.0, 0.0], 0, 1.0);
        assert_eq!(p, [0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn sequences_are_reproducible() {
        let mut a = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut b = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        assert_eq!(random_sequence(50, &mut a), random_sequence(50, &mut b));
    }
}
