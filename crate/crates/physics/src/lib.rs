// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two exchange-coupled spin qubits driven by a sampled microwave signal.
//!
//! Evolution is unitary per shot; charge noise enters as quasi-static
//! Gaussian offsets of the Larmor frequencies and of the exchange.

pub mod device;
pub mod error;
pub mod evolve;
pub mod hamiltonian;
pub mod measure;
pub mod noise;
pub mod state;

pub use device::{DeviceModel, Exchange, ReadoutModel};
pub use error::{PhysicsError, Result};
pub use evolve::Simulator;
pub use measure::{measure, outcome_distribution, sample_outcome, Shot};
pub use noise::{gauss_hermite, noise_quadrature, sample_noise, shot_rng, NoiseSample};
pub use state::QuantumState;
