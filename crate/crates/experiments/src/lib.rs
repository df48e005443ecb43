// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Calibration and benchmarking protocols run end to end: gate programs are
//! compiled to memory images, played by the transmitter model, applied to the
//! simulated device and read out shot by shot.

pub mod allxy;
pub mod backend;
pub mod context;
pub mod dj;
pub mod error;
pub mod output;
pub mod parallel;
pub mod qst;
pub mod rabi;
pub mod rb;
pub mod readout;
pub mod shots;
pub mod spec;
pub mod spectroscopy;
pub mod stack;

pub use backend::{Backend, DeviceBackend, TwoLevelOracle};
pub use context::{Context, Point};
pub use error::{ExperimentError, Result};
pub use readout::{readout_correct, ConfusionMatrix, Corrected};
pub use spec::{ExperimentSpec, Kind, RbParams, Sweep};
pub use stack::Stack;

use output::{to_json, Summary, Table};

/// Result of any experiment kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Rabi(rabi::RabiResult),
    Spectroscopy(spectroscopy::SpectroscopyResult),
    Allxy(allxy::AllxyResult),
    Qst(qst::TomoResult),
    Rb(rb::RbResult),
    Dj(dj::DjResult),
}

impl Outcome {
    pub fn table(&self) -> Table {
        match self {
            Outcome::Rabi(r) => r.table(),
            Outcome::Spectroscopy(r) => r.table(),
            Outcome::Allxy(r) => r.table(),
            Outcome::Qst(r) => r.table(),
            Outcome::Rb(r) => r.table(),
            Outcome::Dj(r) => r.table(),
        }
    }

    /// Versioned JSON summary.
    pub fn summary_json(&self, spec: &ExperimentSpec) -> String {
        let (kind, seed, shots) = (spec.kind.name(), spec.seed, spec.shots);
        match self {
            Outcome::Rabi(r) => to_json(&Summary::new(kind, seed, shots, r)),
            Outcome::Spectroscopy(r) => to_json(&Summary::new(kind, seed, shots, r)),
            Outcome::Allxy(r) => to_json(&Summary::new(kind, seed, shots, r)),
            Outcome::Qst(r) => to_json(&Summary::new(kind, seed, shots, r)),
            Outcome::Rb(r) => to_json(&Summary::new(kind, seed, shots, r)),
            Outcome::Dj(r) => to_json(&Summary::new(kind, seed, shots, r)),
        }
    }

    pub fn csv(&self, spec: &ExperimentSpec) -> String {
        self.table().to_csv(spec.kind.name(), spec.seed)
    }
}

/// Run `ctx.spec` against its stack and backend.
pub fn run(ctx: &Context<'_>) -> Result<Outcome> {
    ctx.spec.validate()?;
    Ok(match ctx.spec.kind {
        Kind::Rabi => Outcome::Rabi(rabi::run_rabi(ctx, false)?),
        Kind::RabiSimultaneous => Outcome::Rabi(rabi::run_rabi(ctx, true)?),
        Kind::Spectroscopy => Outcome::Spectroscopy(spectroscopy::run_spectroscopy(ctx)?),
        Kind::Allxy => Outcome::Allxy(allxy::run_allxy(ctx)?),
        Kind::QstTrajectory => Outcome::Qst(qst::run_qst_trajectory(ctx)?),
        Kind::Rb => Outcome::Rb(rb::run_rb(ctx)?),
        Kind::Dj => Outcome::Dj(dj::run_dj(ctx)?),
    })
}

/// Build the stack and full device backend for `spec`, then run it.
pub fn run_on_device(
    spec: &ExperimentSpec,
    model: cryotwin_physics::DeviceModel,
    tx: cryotwin_controller::TxConfig,
    jobs: usize,
) -> Result<Outcome> {
    spec.validate()?;
    let stack = Stack::new(model, tx, spec.exchange())?;
    let backend = stack.device(spec.nodes)?;
    run(&Context { stack: &stack, backend: &backend, spec, jobs })
}
