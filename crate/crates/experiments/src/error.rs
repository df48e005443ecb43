// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_compiler::CompileError;
use cryotwin_controller::ControllerError;
use cryotwin_physics::PhysicsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Compile(#[from] CompileError),

    #[error(transparent)]
    Physics(#[from] PhysicsError),

    #[error(transparent)]
    Controller(#[from] ControllerError),

    /// Every problem found in an experiment description.
    #[error("invalid experiment: {}", .0.join("; "))]
    Spec(Vec<String>),

    #[error("confusion matrix is singular: F0 + F1 = {0}")]
    Singular(f64),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("backend cannot run this program: {0}")]
    Unsupported(String),
}

impl ExperimentError {
    pub fn is_capacity(&self) -> bool {
        match self {
            ExperimentError::Compile(e) => e.is_capacity(),
            ExperimentError::Controller(e) => e.is_capacity(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
