// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use cryotwin_compiler::CompileError;
use cryotwin_controller::ControllerError;
use cryotwin_experiments::ExperimentError;
use cryotwin_metrics::MetricsError;
use cryotwin_physics::PhysicsError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// Bad configuration, program text or arguments (clap also uses 2).
    pub const CONFIG: u8 = 2;
    /// A controller memory would overflow.
    pub const CAPACITY: u8 = 3;
    pub const RUNTIME: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Every problem found in the configuration, one per entry.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Compile(#[from] CompileError),

    #[error(transparent)]
    Controller(#[from] ControllerError),

    #[error(transparent)]
    Physics(#[from] PhysicsError),

    #[error(transparent)]
    Experiment(#[from] ExperimentError),

    #[error(transparent)]
    Metrics(#[from] MetricsError),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn is_capacity(&self) -> bool {
        match self {
            CliError::Compile(e) => e.is_capacity(),
            CliError::Controller(e) => e.is_capacity(),
            CliError::Experiment(e) => e.is_capacity(),
            _ => false,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.is_capacity() {
            return exit::CAPACITY;
        }
        match self {
            CliError::Config(_)
            | CliError::Compile(CompileError::Parse { .. })
            | CliError::Experiment(ExperimentError::Spec(_))
            | CliError::Physics(PhysicsError::Config(_))
            | CliError::Controller(ControllerError::Config(_)) => exit::CONFIG,
            _ => exit::RUNTIME,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
