// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_controller::ControllerError;
use cryotwin_physics::PhysicsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Controller(#[from] ControllerError),

    #[error(transparent)]
    Physics(#[from] PhysicsError),

    #[error("qubit {qubit} at {freq_hz} Hz is {offset_hz} Hz from the carrier, beyond the +/-{limit_hz} Hz Nyquist range")]
    Nyquist { qubit: usize, freq_hz: f64, offset_hz: f64, limit_hz: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("gate {index}: qubit {qubit} has no frequency assignment")]
    UnknownQubit { index: usize, qubit: usize },

    #[error("gate {index}: {gate} on qubit {qubit} needs the exchange-on frequency plan")]
    Unassigned { index: usize, gate: String, qubit: usize },

    #[error("gate {index}: duration {seconds} s is not a whole number of at least 2 clock periods")]
    Duration { index: usize, seconds: f64 },

    #[error("envelope needs at least 2 samples, got {0}")]
    TooShort(usize),

    #[error("envelope amplitude {0} outside [0, 1)")]
    Amplitude(f64),

    #[error("gate {index}: {reason}")]
    Parallel { index: usize, reason: String },

    #[error("calibration: {0}")]
    Calibration(String),
}

impl CompileError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, CompileError::Controller(e) if e.is_capacity())
    }
}

pub type Result<T> = std::result::Result<T, CompileError>;
