// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use cryotwin_compiler::{disassemble, disassemble_bytes, Program};
use cryotwin_controller::{execute, image, upconvert, BasebandWaveform, MemoryImage, RfSignal};
use cryotwin_experiments::output::to_json;
use cryotwin_experiments::{run_on_device, Stack};
use cryotwin_metrics::{compute_spectrum, report, Spectrum};
use cryotwin_metrics::signals::add_tone;
use cryotwin_physics::Exchange;
use serde::Serialize;

use crate::artifacts::Run;
use crate::config::Config;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

/// Compile a gate program: `image.bin`, `listing.txt`, `report.json` and a copy of the program.
pub fn compile(program_path: &Path, config: &Config, exchange: Exchange, run: &mut Run) -> Result<()> {
    let text = String::from_utf8_lossy(&read(program_path)?).into_owned();
    let program = Program::parse(&text)?;
    let stack = Stack::new(config.device, config.tx(), exchange)?;
    let compiled = stack.compile(&program)?;
    run.add("program.txt", text);
    run.add("image.bin", image::encode(&compiled.image));
    run.add("listing.txt", disassemble(&compiled.image));
    run.add("report.json", to_json(&compiled.report));
    Ok(())
}

#[derive(Serialize)]
struct WaveformJson<'a> {
    schema: u32,
    sample_rate: f64,
    start_time: f64,
    i: &'a [i32],
    q: &'a [i32],
}

#[derive(Serialize)]
struct SpectrumJson {
    schema: u32,
    carrier_freq_hz: f64,
    bin_hz: f64,
    freq_hz: Vec<f64>,
    dbc: Vec<f64>,
}


/// Play an image through the transmitter, add configured spurs and measure the spectrum.
pub fn spectrum_of(img: &MemoryImage, config: &Config) -> Result<(BasebandWaveform, RfSignal, Spectrum)> {
    let tx = config.tx();
    let bb = execute(img, &tx)?;
    let mut rf = upconvert(&bb, &tx);
    // Zero-pad bursts; a record that is already a power of two is used as is.
    let n = config.waveform.fft_len.unwrap_or(rf.len().next_power_of_two());
    if n > rf.len() {
        rf.envelope.resize(n, Default::default());
    }
    if !config.impairments.spurs.is_empty() {
        let clean = compute_spectrum(&rf, config.waveform.window, n)?;
        let carrier = clean.main_power.sqrt();
        for s in &config.impairments.spurs {
            add_tone(&mut rf, s.offset_hz, carrier * 10f64.powf(s.dbc / 20.0), s.phase);
        }
    }
    let s = compute_spectrum(&rf, config.waveform.window, n)?;
    Ok((bb, rf, s))
}

/// Waveform, spectrum and `metrics.json` for a binary image.
pub fn waveform(image_path: &Path, config: &Config, format: Format, binary: bool, run: &mut Run) -> Result<()> {
    let img = image::decode(&read(image_path)?)?;
    let (bb, _, s) = spectrum_of(&img, config)?;
    let metrics = report(&s, config.waveform.snr_bw_hz)?;
    match format {
        Format::Csv => {
            run.add("waveform.csv", bb.to_csv());
            run.add("spectrum.csv", s.to_csv());
        }
        Format::Json => {
            let w = WaveformJson { schema: 1, sample_rate: bb.sample_rate, start_time: bb.start_time, i: &bb.i, q: &bb.q };
            run.add("waveform.json", to_json(&w));
            let sj = SpectrumJson {
                schema: 1,
                carrier_freq_hz: s.carrier_freq,
                bin_hz: s.bin_hz,
                freq_hz: s.freqs(),
                dbc: s.dbc_all(),
            };
            run.add("spectrum.json", to_json(&sj));
        }
    }
    if binary {
        run.add("waveform.bin", bb.to_bytes());
    }
    run.add("metrics.json", to_json(&metrics));
    Ok(())
}

/// Run the configured experiment: the result table, `summary.json`.
pub fn experiment(config: &Config, jobs: usize, format: Format, run: &mut Run) -> Result<()> {
    let spec = &config.experiment;
    let outcome = run_on_device(spec, config.device, config.tx(), jobs)?;
    let table = outcome.table();
    match format {
        Format::Csv => run.add("results.csv", table.to_csv(spec.kind.name(), spec.seed)),
        Format::Json => run.add("results.json", table.to_json(spec.kind.name(), spec.seed)),
    }
    run.add("summary.json", outcome.summary_json(spec));
    Ok(())
}

/// Listing of a binary image.
pub fn disasm(image_path: &Path) -> Result<String> {
    Ok(disassemble_bytes(&read(image_path)?)?)
}

pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

pub fn display(path: &Path) -> String {
    PathBuf::from(path).display().to_string()
}
