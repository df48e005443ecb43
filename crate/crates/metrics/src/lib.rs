// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Signal-quality measurements on upconverted transmitter output.
//!
//! Spectra are computed on the complex envelope and labelled with absolute RF
//! frequencies. Powers are scaled so that a coherent tone of amplitude `a`
//! reads `a^2`, and levels are reported relative to the strongest tone.

pub mod error;
pub mod measure;
pub mod signals;
pub mod spectrum;

pub use error::{MetricsError, Result};
pub use measure::{
    default_exclusions, find_spurs, lo_rejection, report, sfdr, snr, two_tone_report, MetricsReport, SfdrResult,
    SnrOptions, TwoToneReport,
};
pub use spectrum::{compute_spectrum, Spectrum, Window, DEFAULT_FFT_LEN};
