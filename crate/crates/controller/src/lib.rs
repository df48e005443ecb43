// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bit-exact model of a cryogenic multiplexed microwave transmitter.
//!
//! Two banks of 16 NCOs feed per-bank phase-to-amplitude converters. Bursts
//! are described by an envelope memory, per-NCO instruction tables and an
//! instruction list that runs on an external trigger. The summed bank outputs
//! are quantized to the DAC grid and upconverted with an I/Q mixer model.

pub mod config;
pub mod error;
pub mod execute;
pub mod image;
pub mod memory;
pub mod nco;
pub mod pac;
pub mod upconvert;

pub use config::{Impairments, TxConfig};
pub use error::{ControllerError, Memory, Result};
pub use execute::{continuous_wave, execute, BasebandWaveform, Transmitter, Trigger};
pub use memory::{
    EnvelopeMemory, Instruction, InstructionList, InstructionRef, InstructionTable, MemoryImage, NcoSetting,
    Occupancy,
};
pub use nco::{freq_to_ftw, ftw_to_freq, ftw_to_offset, nco_step, offset_to_ftw, NcoState};
pub use pac::{pac_convert, EnvelopeEntry};
pub use upconvert::{upconvert, RfSignal};
