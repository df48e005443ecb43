// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
/// Two-qubit pure state over |00>, |01>, |10>, |11>; the first label is Q1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    pub amps: [Complex64; 4],
}

/// Basis index of `(q1, q2)`.
pub fn index(q1: u8, q2: u8) -> usize {
    2 * q1 as usize + q2 as usize
}

impl QuantumState {
    pub fn ground() -> Self {
        Self::basis(0, 0)
    }

    pub fn basis(q1: u8, q2: u8) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[index(q1, q2)] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn populations(&self) -> [f64; 4] {
        self.amps.map(|a| a.norm_sqr())
    }

    /// Probability that `qubit` (0 = Q1) is in |1>.
    pub fn p1(&self, qubit: usize) -> f64 {
        p1(&self.populations(), qubit)
    }

    /// Bloch vector of one qubit's reduced state, right-handed with |0> at z = -1.
    pub fn bloch(&self, qubit: usize) -> [f64; 3] {
        let a = &self.amps;
        // Pairs (|..0..>, |..1..>) with the other qubit fixed.
        let pairs: [(usize, usize); 2] = if qubit == 0 { [(0, 2), (1, 3)] } else { [(0, 1), (2, 3)] };
        let mut rho01 = Complex64::new(0.0, 0.0);
        let mut z = 0.0;
        for (i0, i1) in pairs {
            rho01 += a[i0] * a[i1].conj();
            z += a[i0].norm_sqr() - a[i1].norm_sqr();
        }
        // |1> is the north pole, so x + iy = 2 <0|rho|1>.
        [2.0 * rho01.re, 2.0 * rho01.im, -z]
    }

    /// |<a|b>|^2
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }
}

/// Marginal P(|1>) of `qubit` from basis populations.
pub fn p1(pops: &[f64; 4], qubit: usize) -> f64 {
    if qubit == 0 {
        pops[2] + pops[3]
    } else {
        pops[1] + pops[3]
    }
}
