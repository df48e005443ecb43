// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-spin Hamiltonian in the frame rotating at each qubit's nominal Larmor frequency.
//!
//! All entries are in Hz; the propagator over `dt` is `exp(-i 2 pi dt H)`.
//! Each spin sees `H_k = 1/2 (Omega_k |0><1| + conj(Omega_k) |1><0|)`, where
//! `Omega_k` is the Rabi drive after removing the frame rotation, so a drive
//! phase of 0 rotates about +x and pi/2 about +y.

use num_complex::Complex64;

use crate::device::DeviceModel;
use crate::noise::NoiseSample;

/// Diagonal relative to the rotating frame for coupling `j`.
///
/// Antiparallel states are lowered by `j/2`; quasi-static detunings add to the |1> levels.
pub fn frame_diagonal(j: f64, noise: &NoiseSample) -> [f64; 4] {
    let j = j + noise.delta_j;
    let [d1, d2] = noise.detune;
    [0.0, -j / 2.0 + d2, -j / 2.0 + d1, d1 + d2]
}

/// Lab-frame diagonal: the level energies shifted by the quasi-static noise.
pub fn lab_diagonal(model: &DeviceModel, j: f64, noise: &NoiseSample) -> [f64; 4] {
    let f = frame_diagonal(j, noise);
    [f[0], f[1] + model.f2, f[2] + model.f1, f[3] + model.f1 + model.f2]
}

/// `H psi` with half-Rabi drives `w = Omega / 2` on each qubit.
#[inline]
pub fn apply(d: &[f64; 4], w1: Complex64, w2: Complex64, psi: &[Complex64; 4]) -> [Complex64; 4] {
    [
        d[0] * psi[0] + w2 * psi[1] + w1 * psi[2],
        d[1] * psi[1] + w2.conj() * psi[0] + w1 * psi[3],
        d[2] * psi[2] + w1.conj() * psi[0] + w2 * psi[3],
        d[3] * psi[3] + w1.conj() * psi[1] + w2.conj() * psi[2],
    ]
}

/// Dense form of the same operator, row-major.
pub fn matrix(d: &[f64; 4], w1: Complex64, w2: Complex64) -> [[Complex64; 4]; 4] {
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (c, col) in (0..4).map(|c| {
        let mut e = [Complex64::new(0.0, 0.0); 4];
        e[c] = Complex64::new(1.0, 0.0);
        (c, apply(d, w1, w2, &e))
    }) {
        for r in 0..4 {
            m[r][c] = col[r];
        }
    }
    m
}
