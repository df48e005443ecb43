// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_compiler::{Compiled, Program};
use serde::Serialize;

use crate::backend::Backend;
use crate::error::Result;
use crate::shots::{count_marginals, marginals, sample_counts, Estimate};
use crate::spec::ExperimentSpec;
use crate::stack::Stack;

/// What a protocol runs against.
#[derive(Clone, Copy)]
pub struct Context<'a> {
    pub stack: &'a Stack,
    pub backend: &'a dyn Backend,
    pub spec: &'a ExperimentSpec,
    pub jobs: usize,
}

/// One measured program.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    /// True P(1) per qubit, before readout.
    pub exact: [f64; 2],
    /// Shot estimate, readout-corrected when the spec asks for it.
    pub estimate: Estimate,
    pub counts: [u32; 4],
}

impl Context<'_> {
    pub fn compile(&self, program: &Program) -> Result<Compiled> {
        self.stack.compile(program)
    }

    /// Run `compiled` and sample `spec.shots` records on stream `point`.
    pub fn measure(&self, compiled: &Compiled, point: u32) -> Result<Point> {
        let pops = self.backend.populations(compiled)?;
        self.measure_populations(&pops, point)
    }

    pub fn measure_populations(&self, pops: &[f64; 4], point: u32) -> Result<Point> {
        let dist = self.backend.readout(pops);
        let counts = sample_counts(&dist, self.spec.seed, point, self.spec.shots);
        let conf = self.spec.readout_correction.then(|| [0, 1].map(|q| self.backend.confusion(q)));
        let estimate = Estimate::new(count_marginals(&counts), self.spec.shots, conf)?;
        Ok(Point { exact: marginals(pops), estimate, counts })
    }

    /// Estimate without shot noise: the corrected expectation of the records.
    pub fn expected(&self, pops: &[f64; 4]) -> Result<Estimate> {
        let conf = self.spec.readout_correction.then(|| [0, 1].map(|q| self.backend.confusion(q)));
        Estimate::new(marginals(&self.backend.readout(pops)), 0, conf)
    }
}
