// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("invalid device model: {0}")]
    Config(String),

    #[error("drive sampled at {got} Hz, simulator expects {expected} Hz")]
    SampleRate { got: f64, expected: f64 },

    #[error("drive starts at {start} s, before the current state time {now} s")]
    TimeOrder { start: f64, now: f64 },

    #[error("shots must be at least 1")]
    NoShots,
}

pub type Result<T> = std::result::Result<T, PhysicsError>;
