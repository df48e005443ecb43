// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration, read from one TOML file.
//!
//! ```toml
//! schema = 1
//!
//! [device]            # qubit model; every field optional
//! j_on = 10e6
//! sigma_detune = [0.0, 40e3]
//! readout = { f0 = [0.95, 0.95], f1 = [0.8, 0.8] }
//!
//! [tx]                # transmitter, without impairments
//! gain_db = 6.0
//!
//! [impairments]
//! lo_leakage_dbc = -35.0
//! spurs = [{ offset_hz = -20e6, dbc = -46.0 }]
//!
//! [experiment]
//! kind = "allxy"
//! shots = 10000
//!
//! [waveform]
//! window = "blackman-harris"
//! snr_bw_hz = 25e6
//! ```
//!
//! Missing sections and fields take their defaults. Unknown keys are errors.

use std::path::Path;

use cryotwin_controller::{Impairments, TxConfig};
use cryotwin_experiments::ExperimentSpec;
use cryotwin_metrics::Window;
use cryotwin_physics::DeviceModel;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CONFIG_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    pub device: DeviceModel,
    pub tx: TxSection,
    pub impairments: ImpairmentSection,
    pub experiment: ExperimentSpec,
    pub waveform: WaveformSection,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            schema: CONFIG_SCHEMA,
            device: DeviceModel::default(),
            tx: TxSection::default(),
            impairments: ImpairmentSection::default(),
            experiment: ExperimentSpec::default(),
            waveform: WaveformSection::default(),
        }
    }
}

/// Transmitter settings; see `TxConfig`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TxSection {
    pub f_clk: f64,
    pub lo_freq: f64,
    pub dac_bits: u32,
    pub amp_bits: u32,
    pub phase_mod_bits: u32,
    pub pac_addr_bits: u32,
    pub gain_db: f64,
    pub rf_high: bool,
}

impl Default for TxSection {
    fn default() -> Self {
        let t = TxConfig::default();
        Self {
            f_clk: t.f_clk,
            lo_freq: t.lo_freq,
            dac_bits: t.dac_bits,
            amp_bits: t.amp_bits,
            phase_mod_bits: t.phase_mod_bits,
            pac_addr_bits: t.pac_addr_bits,
            gain_db: t.gain_db,
            rf_high: t.rf_high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImpairmentSection {
    pub lo_leakage_dbc: Option<f64>,
    pub iq_gain_mismatch: f64,
    pub iq_phase_error: f64,
    /// Extra tones added to the RF output by the waveform command.
    pub spurs: Vec<Spur>,
}

impl Default for ImpairmentSection {
    fn default() -> Self {
        let i = Impairments::default();
        Self {
            lo_leakage_dbc: i.lo_leakage_dbc,
            iq_gain_mismatch: i.iq_gain_mismatch,
            iq_phase_error: i.iq_phase_error,
            spurs: Vec::new(),
        }
    }
}

/// A tone at `offset_hz` from the LO, `dbc` below the strongest tone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Spur {
    pub offset_hz: f64,
    pub dbc: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaveformSection {
    pub window: Window,
    /// FFT length; defaults to the record length rounded up to a power of two, zero-padded.
    pub fft_len: Option<usize>,
    pub snr_bw_hz: f64,
}

impl Default for WaveformSection {
    fn default() -> Self {
        Self { window: Window::BlackmanHarris, fft_len: None, snr_bw_hz: 25e6 }
    }
}

impl Config {
    /// Read and validate `path`, or the defaults when `None`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let config = match path {
            None => Self::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                Self::parse(&text)?
            }
        };
        config.validate()?;
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(vec![e.to_string().trim_end().to_string()]))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn tx(&self) -> TxConfig {
        let t = &self.tx;
        let i = &self.impairments;
        TxConfig {
            f_clk: t.f_clk,
            lo_freq: t.lo_freq,
            dac_bits: t.dac_bits,
            amp_bits: t.amp_bits,
            phase_mod_bits: t.phase_mod_bits,
            pac_addr_bits: t.pac_addr_bits,
            gain_db: t.gain_db,
            rf_high: t.rf_high,
            impairments: Impairments {
                lo_leakage_dbc: i.lo_leakage_dbc,
                iq_gain_mismatch: i.iq_gain_mismatch,
                iq_phase_error: i.iq_phase_error,
            },
        }
    }

    /// Check every section and report all problems together.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.schema != CONFIG_SCHEMA {
            problems.push(format!("schema {} is not supported, expected {CONFIG_SCHEMA}", self.schema));
        }
        if let Err(e) = self.device.validate() {
            problems.push(format!("[device] {e}"));
        }
        if let Err(e) = self.tx().validate() {
            problems.push(format!("[tx] {e}"));
        }
        for (k, s) in self.impairments.spurs.iter().enumerate() {
            if !(s.offset_hz.is_finite() && s.dbc.is_finite() && s.dbc <= 0.0 && s.phase.is_finite()) {
                problems.push(format!("[impairments] spur {k} needs a finite offset and dbc <= 0"));
            }
        }
        if let Err(e) = self.experiment.validate() {
            match e {
                cryotwin_experiments::ExperimentError::Spec(list) => {
                    problems.extend(list.into_iter().map(|p| format!("[experiment] {p}")))
                }
                other => problems.push(format!("[experiment] {other}")),
            }
        }
        let w = &self.waveform;
        if w.fft_len == Some(0) {
            problems.push("[waveform] fft_len must be positive".into());
        }
        if !(w.snr_bw_hz.is_finite() && w.snr_bw_hz > 0.0) {
            problems.push("[waveform] snr_bw_hz must be positive".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(problems))
        }
    }
}
