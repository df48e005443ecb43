// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("waveform is empty")]
    EmptyWaveform,

    #[error("fft length {fft_len} invalid for a waveform of {available} samples")]
    FftLength { fft_len: usize, available: usize },

    #[error("integration band {bw} Hz exceeds the {limit} Hz Nyquist span")]
    BandTooWide { bw: f64, limit: f64 },

    #[error("integration band {bw} Hz is narrower than the resolution bandwidth {rbw} Hz")]
    BandTooNarrow { bw: f64, rbw: f64 },

    #[error("exclusions and band leave no bins to evaluate")]
    NothingLeft,

    #[error("tones at {f_a} Hz and {f_b} Hz are not resolved at this fft length")]
    Unresolved { f_a: f64, f_b: f64 },
}

pub type Result<T> = std::result::Result<T, MetricsError>;
