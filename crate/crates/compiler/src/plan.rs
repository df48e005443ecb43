// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Assignment of qubit drive tones to NCOs.
//!
//! With the exchange off each qubit gets one NCO. With it on, each qubit gets
//! two, one per state of the other qubit, at `f -/+ J/2`.

use cryotwin_controller::nco::{ftw_to_offset, offset_to_ftw};
use cryotwin_controller::TxConfig;
use cryotwin_physics::{DeviceModel, Exchange};
use serde::{Deserialize, Serialize};

use crate::error::{CompileError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    pub qubit: usize,
    /// State of the other qubit this tone addresses; `None` when uncoupled.
    pub condition: Option<u8>,
    /// Target RF frequency in Hz.
    pub freq_hz: f64,
    /// Requested offset from the carrier in Hz.
    pub offset_hz: f64,
    pub ftw: u32,
    pub bank: u8,
    pub nco: u8,
}

impl Slot {
    /// Offset actually synthesized by the tuning word.
    pub fn synthesized_offset(&self, f_clk: f64) -> f64 {
        ftw_to_offset(self.ftw, f_clk)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPlan {
    pub carrier_hz: f64,
    pub f_clk: f64,
    /// Exchange used to place conditional tones; `None` for one tone per qubit.
    pub exchange_hz: Option<f64>,
    pub slots: Vec<Slot>,
}

/// Place tones for the given qubit frequencies. `j` selects conditional
/// tones split by the exchange.
pub fn allocate_frequencies(freqs: &[f64], carrier: f64, f_clk: f64, j: Option<f64>) -> Result<FrequencyPlan> {
    let limit = f_clk / 2.0;
    let mut slots = Vec::new();
    for (q, &f) in freqs.iter().enumerate() {
        let bank = (q % 2) as u8;
        let base_nco = (q / 2 * 2) as u8;
        let tones: Vec<(Option<u8>, f64, u8)> = match j {
            None => vec![(None, f, (q / 2) as u8)],
            Some(j) => vec![(Some(0), f - j / 2.0, base_nco), (Some(1), f + j / 2.0, base_nco + 1)],
        };
        for (condition, freq_hz, nco) in tones {
            let offset_hz = freq_hz - carrier;
            let ftw = offset_to_ftw(offset_hz, f_clk)
                .map_err(|_| CompileError::Nyquist { qubit: q + 1, freq_hz, offset_hz, limit_hz: limit })?;
            slots.push(Slot { qubit: q, condition, freq_hz, offset_hz, ftw, bank, nco });
        }
    }
    Ok(FrequencyPlan { carrier_hz: carrier, f_clk, exchange_hz: j, slots })
}

impl FrequencyPlan {
    pub fn for_device(model: &DeviceModel, exchange: Exchange, cfg: &TxConfig) -> Result<Self> {
        let j = match exchange {
            Exchange::Off => None,
            Exchange::On => Some(model.j_on),
        };
        allocate_frequencies(&[model.f1, model.f2], cfg.carrier_freq(), cfg.f_clk, j)
    }

    pub fn conditional(&self) -> bool {
        self.exchange_hz.is_some()
    }

    pub fn qubits(&self) -> usize {
        self.slots.iter().map(|s| s.qubit + 1).max().unwrap_or(0)
    }

    /// Indices of the slots driving `qubit`, low condition first.
    pub fn slots_for(&self, qubit: usize) -> Vec<usize> {
        (0..self.slots.len()).filter(|&i| self.slots[i].qubit == qubit).collect()
    }

    pub fn find(&self, qubit: usize, condition: Option<u8>) -> Option<usize> {
        self.slots.iter().position(|s| s.qubit == qubit && s.condition == condition)
    }

    /// Copy with one slot retuned, as used when sweeping a probe tone.
    pub fn with_slot_freq(&self, slot: usize, freq_hz: f64) -> Result<Self> {
        let mut out = self.clone();
        let s = &mut out.slots[slot];
        let offset_hz = freq_hz - self.carrier_hz;
        s.ftw = offset_to_ftw(offset_hz, self.f_clk).map_err(|_| CompileError::Nyquist {
            qubit: s.qubit + 1,
            freq_hz,
            offset_hz,
            limit_hz: self.f_clk / 2.0,
        })?;
        s.freq_hz = freq_hz;
        s.offset_hz = offset_hz;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LO: f64 = 13.54e9;

    #[test]
    fn uncoupled_plan() {
        let p = allocate_frequencies(&[LO + 24e6, LO - 90e6], LO, 1e9, None).unwrap();
        assert_eq!(p.slots.len(), 2);
        assert_eq!((p.slots[0].bank, p.slots[0].nco), (0, 0));
        assert_eq!((p.slots[1].bank, p.slots[1].nco), (1, 0));
        assert!((p.slots[0].offset_hz - 24e6).abs() < 1e-3);
        assert!((p.slots[1].offset_hz + 90e6).abs() < 1e-3);
        assert!((p.slots[0].synthesized_offset(1e9) - 24e6).abs() <= 119.3);
    }

    #[test]
    fn coupled_plan_splits_by_exchange() {
        let p = allocate_frequencies(&[LO + 24e6, LO - 90e6], LO, 1e9, Some(10e6)).unwrap();
        let q1: Vec<f64> = p.slots_for(0).iter().map(|&i| p.slots[i].offset_hz).collect();
        assert!((q1[0] - 19e6).abs() < 1e-3 && (q1[1] - 29e6).abs() < 1e-3);
        assert_eq!(p.find(0, Some(1)), Some(1));
        assert_eq!((p.slots[3].bank, p.slots[3].nco, p.slots[3].condition), (1, 1, Some(1)));
    }

    #[test]
    fn out_of_band_names_qubit() {
        let e = allocate_frequencies(&[LO, LO + 600e6], LO, 1e9, None).unwrap_err();
        assert!(matches!(e, CompileError::Nyquist { qubit: 2, .. }));
    }
}
