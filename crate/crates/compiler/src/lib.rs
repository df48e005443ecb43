// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Compiler from two-qubit gate sequences to transmitter memory images.
//!
//! A [`Program`] is lowered against a [`FrequencyPlan`] (which NCO plays which
//! tone) and a [`CalibrationSet`] (burst shapes and amplitudes) into a
//! [`MemoryImage`](cryotwin_controller::MemoryImage). Z gates cost no time;
//! they only move the reference phase of later bursts.

pub mod calibration;
pub mod compile;
pub mod envelope;
pub mod error;
pub mod ir;
pub mod listing;
pub mod plan;
pub mod report;

pub use calibration::{BurstCal, CalibrationSet, SlotCal};
pub use compile::{compile, CompileOptions, Compiled, QUARTER};
pub use envelope::synthesize_envelope;
pub use error::{CompileError, Result};
pub use ir::{Gate, GateOp, Program, Rotation, Shape};
pub use listing::{assemble, disassemble, disassemble_bytes};
pub use plan::{allocate_frequencies, FrequencyPlan, Slot};
pub use report::CompileReport;
