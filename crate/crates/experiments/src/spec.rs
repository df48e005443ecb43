// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment descriptions as read from a config file.

use cryotwin_compiler::Shape;
use cryotwin_physics::Exchange;
use serde::{Deserialize, Serialize};

use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Rabi,
    RabiSimultaneous,
    Spectroscopy,
    Allxy,
    QstTrajectory,
    Rb,
    Dj,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Rabi => "rabi",
            Kind::RabiSimultaneous => "rabi_simultaneous",
            Kind::Spectroscopy => "spectroscopy",
            Kind::Allxy => "allxy",
            Kind::QstTrajectory => "qst_trajectory",
            Kind::Rb => "rb",
            Kind::Dj => "dj",
        }
    }

    /// Exchange setting used when the config leaves it out.
    pub fn default_exchange(&self) -> Exchange {
        match self {
            Kind::Dj => Exchange::On,
            _ => Exchange::Off,
        }
    }

    /// Sweep used when the config leaves it out.
    pub fn default_sweep(&self) -> Option<Sweep> {
        match self {
            Kind::Rabi | Kind::RabiSimultaneous => Some(Sweep { start: 0.0, stop: 5e-6, points: 101 }),
            Kind::QstTrajectory => Some(Sweep { start: 0.0, stop: 500e-9, points: 21 }),
            Kind::Spectroscopy => Some(Sweep { start: -1.5e6, stop: 1.5e6, points: 201 }),
            Kind::Allxy | Kind::Rb | Kind::Dj => None,
        }
    }
}

/// Evenly spaced sweep values, both ends included. Burst durations in
/// seconds, or probe detuning in Hz for spectroscopy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.start + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RbParams {
    /// Clifford counts before the recovery gate.
    pub lengths: Vec<usize>,
    pub sequences: usize,
    /// Depolarizing probability per Clifford, applied to the target qubit's populations.
    pub depolarizing: Option<f64>,
    /// Quasi-static noise draws averaged per sequence; 0 integrates by quadrature instead.
    pub noise_draws: usize,
}

impl Default for RbParams {
    fn default() -> Self {
        Self { lengths: (1..=10).map(|k| 1usize << k).collect(), sequences: 32, depolarizing: None, noise_draws: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: Kind,
    pub sweep: Option<Sweep>,
    /// Repetitions per point (per sequence for RB).
    pub shots: u32,
    pub seed: u64,
    /// Measured or driven qubit, numbered from 1.
    pub qubit: usize,
    pub exchange: Option<Exchange>,
    /// Gauss-Hermite nodes per noisy dimension.
    pub nodes: usize,
    /// Probe burst shape for spectroscopy.
    pub shape: Shape,
    pub readout_correction: bool,
    pub rb: RbParams,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            kind: Kind::Rabi,
            sweep: None,
            shots: 1000,
            seed: 0,
            qubit: 2,
            exchange: None,
            nodes: 7,
            shape: Shape::Rect,
            readout_correction: true,
            rb: RbParams::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn new(kind: Kind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn exchange(&self) -> Exchange {
        self.exchange.unwrap_or(self.kind.default_exchange())
    }

    pub fn sweep(&self) -> Option<Sweep> {
        self.sweep.or(self.kind.default_sweep())
    }

    /// Zero-based target qubit.
    pub fn target(&self) -> usize {
        self.qubit - 1
    }

    /// Check everything and report all problems together.
    pub fn validate(&self) -> Result<()> {
        let mut p = Vec::new();
        if self.shots < 1 {
            p.push("shots must be at least 1".to_string());
        }
        if !(1..=2).contains(&self.qubit) {
            p.push(format!("qubit must be 1 or 2, got {}", self.qubit));
        }
        if !(1..=64).contains(&self.nodes) {
            p.push(format!("nodes must lie in [1, 64], got {}", self.nodes));
        }
        if let Some(s) = self.sweep {
            if s.points < 1 {
                p.push("sweep.points must be at least 1".into());
            }
            if !(s.start.is_finite() && s.stop.is_finite()) {
                p.push("sweep bounds must be finite".into());
            }
            let durations = matches!(self.kind, Kind::Rabi | Kind::RabiSimultaneous | Kind::QstTrajectory);
            if durations && (s.start < 0.0 || s.stop < 0.0) {
                p.push("burst durations must be non-negative".into());
            }
            if matches!(self.kind, Kind::Allxy | Kind::Rb | Kind::Dj) {
                p.push(format!("{} takes no sweep", self.kind.name()));
            }
        }
        match (self.kind, self.exchange()) {
            (Kind::Dj, Exchange::Off) => p.push("dj needs exchange = \"on\"".into()),
            (Kind::Rabi | Kind::RabiSimultaneous | Kind::Allxy | Kind::QstTrajectory | Kind::Rb, Exchange::On) => {
                p.push(format!("{} runs with exchange = \"off\"", self.kind.name()))
            }
            _ => {}
        }
        if self.kind == Kind::Rb {
            let rb = &self.rb;
            if rb.lengths.is_empty() {
                p.push("rb.lengths must not be empty".into());
            }
            if rb.lengths.contains(&0) {
                p.push("rb.lengths must be positive".into());
            }
            if rb.sequences < 1 {
                p.push("rb.sequences must be at least 1".into());
            }
            if let Some(e) = rb.depolarizing {
                if !(0.0..1.0).contains(&e) {
                    p.push(format!("rb.depolarizing must lie in [0, 1), got {e}"));
                }
            }
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(ExperimentError::Spec(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_values() {
        let s = Sweep { start: 0.0, stop: 1.0, points: 5 };
        assert_eq!(s.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Sweep { start: 3.0, stop: 9.0, points: 1 }.values(), vec![3.0]);
    }

    #[test]
    fn all_problems_reported() {
        let mut s = ExperimentSpec::new(Kind::Dj);
        s.shots = 0;
        s.qubit = 3;
        s.exchange = Some(Exchange::Off);
        s.sweep = Some(Sweep { start: 0.0, stop: 1.0, points: 0 });
        let Err(ExperimentError::Spec(p)) = s.validate() else { panic!("expected spec error") };
        assert_eq!(p.len(), 5, "{p:?}");
    }

    #[test]
    fn defaults_validate() {
        for k in [Kind::Rabi, Kind::RabiSimultaneous, Kind::Spectroscopy, Kind::Allxy, Kind::QstTrajectory, Kind::Rb, Kind::Dj] {
            ExperimentSpec::new(k).validate().unwrap();
        }
    }
}
