// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! The `cryotwin` command: compile gate programs, play images through the
//! transmitter model and run experiments, writing versioned artifacts and a
//! manifest to an output directory.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use cryotwin_physics::Exchange;

use artifacts::{output_dir, Run};
use commands::{display, stem, Format};
use config::Config;
pub use error::{exit, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "cryotwin", version, about = "Simulated cryogenic qubit controller", propagate_version = true)]
pub struct Cli {
    /// TOML configuration with [device], [tx], [impairments], [experiment] and [waveform] sections.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output directory. Defaults to a per-run directory under $CRYOTWIN_OUT_DIR, or ./cryotwin-out.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    /// Format of tabular outputs.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a gate program into a memory image.
    Compile {
        program: PathBuf,
        /// Exchange setting the program runs under.
        #[arg(long, value_enum, default_value = "off")]
        exchange: ExchangeArg,
    },
    /// Play a memory image and measure its spectrum.
    Waveform {
        image: PathBuf,
        /// Also write the raw DAC words as waveform.bin.
        #[arg(long)]
        binary: bool,
    },
    /// Run the experiment described by the [experiment] section.
    Experiment {
        /// Override the experiment seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for sweep points.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
    },
    /// Print the listing of a memory image.
    Disasm { image: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExchangeArg {
    Off,
    On,
}

impl From<ExchangeArg> for Exchange {
    fn from(e: ExchangeArg) -> Self {
        match e {
            ExchangeArg::Off => Exchange::Off,
            ExchangeArg::On => Exchange::On,
        }
    }
}

/// Execute a parsed command line. Returns the output directory, if any.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Option<PathBuf>> {
    let mut config = Config::load(cli.config.as_deref())?;
    let mut run = Run::new();
    let mut inputs: Vec<String> = cli.config.iter().map(|p| display(p)).collect();
    let (dir, seed) = match &cli.command {
        Command::Disasm { image } => {
            print!("{}", commands::disasm(image)?);
            return Ok(None);
        }
        Command::Compile { program, exchange } => {
            commands::compile(program, &config, (*exchange).into(), &mut run)?;
            inputs.push(display(program));
            (output_dir(cli.out_dir.as_deref(), &format!("compile-{}", stem(program))), None)
        }
        Command::Waveform { image, binary } => {
            commands::waveform(image, &config, cli.format, *binary, &mut run)?;
            inputs.push(display(image));
            (output_dir(cli.out_dir.as_deref(), &format!("waveform-{}", stem(image))), None)
        }
        Command::Experiment { seed, jobs } => {
            if let Some(s) = seed {
                config.experiment.seed = *s;
            }
            let jobs = jobs.map_or_else(cryotwin_experiments::parallel::default_jobs, |j| j as usize);
            commands::experiment(&config, jobs, cli.format, &mut run)?;
            let spec = &config.experiment;
            let name = format!("experiment-{}-seed{}", spec.kind.name(), spec.seed);
            (output_dir(cli.out_dir.as_deref(), &name), Some(spec.seed))
        }
    };
    run.commit(&dir, argv, seed, &config, inputs)?;
    Ok(Some(dir))
}

/// Parse `args`, run, report errors on stderr and return the exit code.
pub fn main_with<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::CONFIG } else { exit::OK };
        }
    };
    let argv = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(&cli, argv) {
        Ok(Some(dir)) => {
            println!("{}", dir.display());
            exit::OK
        }
        Ok(None) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
