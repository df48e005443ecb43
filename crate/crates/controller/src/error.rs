// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Which on-chip memory a capacity error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Memory {
    Envelope,
    InstructionTable,
    InstructionList,
}

impl std::fmt::Display for Memory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Memory::Envelope => "envelope memory",
            Memory::InstructionTable => "instruction table",
            Memory::InstructionList => "instruction list",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControllerError {
    #[error("frequency {freq_hz} Hz outside the synthesizable range for f_clk = {f_clk_hz} Hz")]
    NyquistRange { freq_hz: f64, f_clk_hz: f64 },

    #[error("{memory} full: capacity is {limit} entries, {requested} requested")]
    Capacity {
        memory: Memory,
        limit: usize,
        requested: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("list entry {entry}: bank {bank} nco {nco} slot {slot} is empty")]
    DanglingSlot {
        entry: usize,
        bank: u8,
        nco: u8,
        slot: u8,
    },

    #[error("list entry {entry}: bank {bank} or nco {nco} index out of range")]
    BadIndex { entry: usize, bank: u8, nco: u8 },

    #[error("envelope range {start}..={stop} invalid for memory of length {len}")]
    EnvelopeRange { start: u32, stop: u32, len: usize },

    #[error("list entry {entry}: bank {bank} already busy in this parallel group")]
    BankConflict { entry: usize, bank: u8 },

    #[error("value {value} does not fit {bits} bits")]
    Width { value: i64, bits: u32 },

    #[error("image {expected} mismatch: image has {image}, config has {config}")]
    ImageMismatch {
        expected: &'static str,
        image: u32,
        config: u32,
    },

    #[error("corrupt memory image at byte {offset}: {reason}")]
    Corrupt { offset: usize, reason: String },
}

impl ControllerError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, ControllerError::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, ControllerError>;
