// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Gate-level programs and their text form.
//!
//! One gate per line: `<gate> q<n> [dur=<time>] [shape=rect|gaussian]`, with
//! qubits numbered from 1. Gates are `i x y x2 y2 mx my crot_high crot_low`
//! and `z(<angle>)`, where the angle is radians or a multiple of `pi`
//! (`z(pi/2)`, `z(-0.3)`, `z(3pi/4)`). Times take `s`, `ms`, `us` or `ns`.
//! A line starting with `|` runs in parallel with the line before it.
//! `#` starts a comment.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CompileError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Rect,
    Gaussian,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Rect => "rect",
            Shape::Gaussian => "gaussian",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    I,
    /// pi/2 about +x.
    X,
    /// pi/2 about +y.
    Y,
    /// pi about +x.
    X2,
    Y2,
    /// Advance the drive frame of the qubit by the angle in radians. Later
    /// bursts play about axes turned by the angle, which acts on the qubit as
    /// a rotation by the negative angle about z. Takes no time.
    Z(f64),
    /// pi/2 about -x.
    MX,
    MY,
    /// pi about +x on the target, only when the other qubit is |1>.
    CrotHigh,
    /// Same, when the other qubit is |0>.
    CrotLow,
}

/// Rotation angle of a drive burst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    HalfPi,
    Pi,
}

impl Gate {
    /// Drive axis as a quarter-turn index and rotation angle, for burst gates.
    pub fn burst(&self) -> Option<(u32, Rotation)> {
        match self {
            Gate::X => Some((0, Rotation::HalfPi)),
            Gate::Y => Some((1, Rotation::HalfPi)),
            Gate::MX => Some((2, Rotation::HalfPi)),
            Gate::MY => Some((3, Rotation::HalfPi)),
            Gate::X2 | Gate::CrotHigh | Gate::CrotLow => Some((0, Rotation::Pi)),
            Gate::Y2 => Some((1, Rotation::Pi)),
            Gate::I | Gate::Z(_) => None,
        }
    }

    /// Control state selected by a CROT.
    pub fn condition(&self) -> Option<u8> {
        match self {
            Gate::CrotHigh => Some(1),
            Gate::CrotLow => Some(0),
            _ => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::I => f.write_str("i"),
            Gate::X => f.write_str("x"),
            Gate::Y => f.write_str("y"),
            Gate::X2 => f.write_str("x2"),
            Gate::Y2 => f.write_str("y2"),
            Gate::MX => f.write_str("mx"),
            Gate::MY => f.write_str("my"),
            Gate::CrotHigh => f.write_str("crot_high"),
            Gate::CrotLow => f.write_str("crot_low"),
            // Shortest round-tripping decimal.
            Gate::Z(t) => write!(f, "z({t:?})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub gate: Gate,
    /// Zero-based qubit index.
    pub target: usize,
    /// `None` uses the calibrated shape.
    pub shape: Option<Shape>,
    /// Seconds; `None` uses the calibrated duration.
    pub duration: Option<f64>,
    /// Start together with the previous gate.
    pub parallel: bool,
}

impl GateOp {
    pub fn new(gate: Gate, target: usize) -> Self {
        Self { gate, target, shape: None, duration: None, parallel: false }
    }

    pub fn with_duration(self, seconds: f64) -> Self {
        Self { duration: Some(seconds), ..self }
    }

    pub fn with_shape(self, shape: Shape) -> Self {
        Self { shape: Some(shape), ..self }
    }

    pub fn in_parallel(self) -> Self {
        Self { parallel: true, ..self }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parallel {
            f.write_str("| ")?;
        }
        write!(f, "{} q{}", self.gate, self.target + 1)?;
        if let Some(d) = self.duration {
            write!(f, " dur={d:?}s")?;
        }
        if let Some(s) = self.shape {
            write!(f, " shape={s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Program {
    pub ops: Vec<GateOp>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: GateOp) -> &mut Self {
        self.ops.push(op);
        self
    }

    pub fn gate(&mut self, gate: Gate, target: usize) -> &mut Self {
        self.push(GateOp::new(gate, target))
    }

    pub fn extend(&mut self, other: &Program) -> &mut Self {
        self.ops.extend_from_slice(&other.ops);
        self
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Parse the text form.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| CompileError::Parse { line, message };
            let (parallel, body) = match body.strip_prefix('|') {
                Some(rest) => (true, rest.trim_start()),
                None => (false, body),
            };
            if parallel && ops.is_empty() {
                return Err(err("parallel marker on the first gate".into()));
            }
            let mut words = body.split_whitespace();
            let gate = parse_gate(words.next().unwrap_or("")).map_err(&err)?;
            let target = words
                .next()
                .and_then(|w| w.strip_prefix('q'))
                .and_then(|w| w.parse::<usize>().ok())
                .filter(|&q| q >= 1)
                .ok_or_else(|| err("expected a qubit such as q1".into()))?;
            let mut op = GateOp { gate, target: target - 1, shape: None, duration: None, parallel };
            for w in words {
                let (key, value) = w.split_once('=').ok_or_else(|| err(format!("unexpected `{w}`")))?;
                match key {
                    "dur" => op.duration = parse_duration(value).map_err(&err)?,
                    "shape" => {
                        op.shape = Some(match value {
                            "rect" | "rectangular" => Shape::Rect,
                            "gaussian" => Shape::Gaussian,
                            _ => return Err(err(format!("unknown shape `{value}`"))),
                        })
                    }
                    _ => return Err(err(format!("unknown option `{key}`"))),
                }
            }
            ops.push(op);
        }
        Ok(Self { ops })
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

fn parse_gate(word: &str) -> std::result::Result<Gate, String> {
    let lower = word.to_ascii_lowercase();
    Ok(match lower.as_str() {
        "i" => Gate::I,
        "x" => Gate::X,
        "y" => Gate::Y,
        "x2" => Gate::X2,
        "y2" => Gate::Y2,
        "mx" => Gate::MX,
        "my" => Gate::MY,
        "crot_high" => Gate::CrotHigh,
        "crot_low" => Gate::CrotLow,
        _ => {
            let inner = lower
                .strip_prefix("z(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| format!("unknown gate `{word}`"))?;
            Gate::Z(parse_angle(inner).ok_or_else(|| format!("bad angle `{inner}`"))?)
        }
    })
}

/// Radians, or `[-][k]pi[/d]`.
fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    let Some(pos) = s.find("pi") else {
        return s.parse().ok().filter(|v: &f64| v.is_finite());
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let k = match head {
        "" => 1.0,
        "-" => -1.0,
        _ => head.trim_end_matches('*').parse::<f64>().ok()?,
    };
    let d = match tail {
        "" => 1.0,
        _ => tail.strip_prefix('/')?.parse::<f64>().ok().filter(|d| *d != 0.0)?,
    };
    Some(k * PI / d)
}

fn parse_duration(s: &str) -> std::result::Result<Option<f64>, String> {
    if s == "auto" {
        return Ok(None);
    }
    let (num, scale) = [("ns", 1e-9), ("us", 1e-6), ("ms", 1e-3), ("s", 1.0)]
        .iter()
        .find_map(|(u, k)| s.strip_suffix(u).map(|n| (n, *k)))
        .unwrap_or((s, 1.0));
    let v: f64 = num.parse().map_err(|_| format!("bad duration `{s}`"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("duration must be positive, got `{s}`"));
    }
    Ok(Some(v * scale))
}
