// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Envelope memory, instruction tables and the instruction list.
//!
//! All three memories reject writes past their capacity. Nothing is ever
//! truncated.

use serde::{Deserialize, Serialize};

use crate::config::{BANKS, ENVELOPE_CAPACITY, LIST_CAPACITY, NCOS_PER_BANK, PHASE_MASK, TABLE_CAPACITY};
use crate::error::{ControllerError, Memory, Result};
use crate::pac::EnvelopeEntry;

fn full(memory: Memory, limit: usize, requested: usize) -> ControllerError {
    ControllerError::Capacity { memory, limit, requested }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeMemory {
    pub amp_bits: u32,
    pub phase_mod_bits: u32,
    entries: Vec<EnvelopeEntry>,
}

impl EnvelopeMemory {
    pub fn new(amp_bits: u32, phase_mod_bits: u32) -> Self {
        Self { amp_bits, phase_mod_bits, entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn remaining(&self) -> usize {
        ENVELOPE_CAPACITY - self.entries.len()
    }

    pub fn entries(&self) -> &[EnvelopeEntry] {
        &self.entries
    }

    pub fn get(&self, addr: u32) -> Option<EnvelopeEntry> {
        self.entries.get(addr as usize).copied()
    }

    fn check_entry(&self, e: &EnvelopeEntry) -> Result<()> {
        EnvelopeEntry::new(e.amplitude, e.phase_mod, self.amp_bits, self.phase_mod_bits).map(|_| ())
    }

    /// Append one word and return its address.
    pub fn push(&mut self, entry: EnvelopeEntry) -> Result<u32> {
        if self.entries.len() >= ENVELOPE_CAPACITY {
            return Err(full(Memory::Envelope, ENVELOPE_CAPACITY, self.entries.len() + 1));
        }
        self.check_entry(&entry)?;
        self.entries.push(entry);
        Ok((self.entries.len() - 1) as u32)
    }

    /// Append a segment; either all of it is stored or none. Returns the inclusive address range.
    pub fn extend(&mut self, segment: &[EnvelopeEntry]) -> Result<(u32, u32)> {
        if segment.is_empty() {
            return Err(ControllerError::Config("empty envelope segment".into()));
        }
        let requested = self.entries.len() + segment.len();
        if requested > ENVELOPE_CAPACITY {
            return Err(full(Memory::Envelope, ENVELOPE_CAPACITY, requested));
        }
        for e in segment {
            self.check_entry(e)?;
        }
        let start = self.entries.len() as u32;
        self.entries.extend_from_slice(segment);
        Ok((start, self.entries.len() as u32 - 1))
    }

    /// Overwrite an existing word or append at `addr == len`.
    pub fn write(&mut self, addr: usize, entry: EnvelopeEntry) -> Result<()> {
        if addr >= ENVELOPE_CAPACITY {
            return Err(full(Memory::Envelope, ENVELOPE_CAPACITY, addr + 1));
        }
        self.check_entry(&entry)?;
        match addr.cmp(&self.entries.len()) {
            std::cmp::Ordering::Less => self.entries[addr] = entry,
            std::cmp::Ordering::Equal => self.entries.push(entry),
            std::cmp::Ordering::Greater => {
                return Err(ControllerError::EnvelopeRange {
                    start: addr as u32,
                    stop: addr as u32,
                    len: self.entries.len(),
                })
            }
        }
        Ok(())
    }
}

/// One instruction table entry. A range plays a burst; a phase update alone takes no time.
/// When both are present the phase update is applied before the burst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instruction {
    /// Inclusive envelope address range.
    pub range: Option<(u32, u32)>,
    pub phase_update: Option<u32>,
}

impl Instruction {
    pub fn burst(start: u32, stop: u32) -> Self {
        Self { range: Some((start, stop)), phase_update: None }
    }

    pub fn phase(update: u32) -> Self {
        Self { range: None, phase_update: Some(update & PHASE_MASK) }
    }

    pub fn samples(&self) -> u64 {
        self.range.map_or(0, |(a, b)| (b as u64).saturating_sub(a as u64) + 1)
    }

    pub fn validate(&self, env_len: usize) -> Result<()> {
        if let Some((start, stop)) = self.range {
            if start > stop || stop as usize >= env_len {
                return Err(ControllerError::EnvelopeRange { start, stop, len: env_len });
            }
        }
        if let Some(p) = self.phase_update {
            if p > PHASE_MASK {
                return Err(ControllerError::Width { value: p as i64, bits: 22 });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionTable {
    slots: Vec<Instruction>,
}

impl InstructionTable {
    pub fn insert(&mut self, ins: Instruction) -> Result<u8> {
        if self.slots.len() >= TABLE_CAPACITY {
            return Err(full(Memory::InstructionTable, TABLE_CAPACITY, self.slots.len() + 1));
        }
        self.slots.push(ins);
        Ok((self.slots.len() - 1) as u8)
    }

    /// Slot holding `ins`, inserting it if absent.
    pub fn find_or_insert(&mut self, ins: Instruction) -> Result<u8> {
        match self.slots.iter().position(|s| *s == ins) {
            Some(i) => Ok(i as u8),
            None => self.insert(ins),
        }
    }

    pub fn get(&self, slot: u8) -> Option<&Instruction> {
        self.slots.get(slot as usize)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Instruction] {
        &self.slots
    }
}

/// Reference from the instruction list into a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstructionRef {
    pub bank: u8,
    pub nco: u8,
    pub slot: u8,
    /// Start together with the previous entry instead of after it.
    pub with_previous: bool,
}

impl InstructionRef {
    pub fn new(bank: u8, nco: u8, slot: u8) -> Self {
        Self { bank, nco, slot, with_previous: false }
    }

    pub fn parallel(self) -> Self {
        Self { with_previous: true, ..self }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionList {
    entries: Vec<InstructionRef>,
}

impl InstructionList {
    pub fn push(&mut self, r: InstructionRef) -> Result<()> {
        if self.entries.len() >= LIST_CAPACITY {
            return Err(full(Memory::InstructionList, LIST_CAPACITY, self.entries.len() + 1));
        }
        self.entries.push(r);
        Ok(())
    }

    pub fn from_refs(refs: Vec<InstructionRef>) -> Result<Self> {
        if refs.len() > LIST_CAPACITY {
            return Err(full(Memory::InstructionList, LIST_CAPACITY, refs.len()));
        }
        Ok(Self { entries: refs })
    }

    pub fn entries(&self) -> &[InstructionRef] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Power-up frequency and reference phase of one NCO.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NcoSetting {
    pub ftw: u32,
    pub ref_phase: u32,
}

/// Everything uploaded to one transmitter before a trigger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryImage {
    pub envelopes: EnvelopeMemory,
    /// Indexed `[bank * 16 + nco]`.
    pub ncos: Vec<NcoSetting>,
    /// Indexed `[bank * 16 + nco]`.
    pub tables: Vec<InstructionTable>,
    pub list: InstructionList,
}

pub fn nco_index(bank: u8, nco: u8) -> usize {
    bank as usize * NCOS_PER_BANK + nco as usize
}

impl MemoryImage {
    pub fn new(amp_bits: u32, phase_mod_bits: u32) -> Self {
        Self {
            envelopes: EnvelopeMemory::new(amp_bits, phase_mod_bits),
            ncos: vec![NcoSetting::default(); BANKS * NCOS_PER_BANK],
            tables: vec![InstructionTable::default(); BANKS * NCOS_PER_BANK],
            list: InstructionList::default(),
        }
    }

    pub fn table(&self, bank: u8, nco: u8) -> &InstructionTable {
        &self.tables[nco_index(bank, nco)]
    }

    pub fn table_mut(&mut self, bank: u8, nco: u8) -> &mut InstructionTable {
        &mut self.tables[nco_index(bank, nco)]
    }

    pub fn nco(&self, bank: u8, nco: u8) -> NcoSetting {
        self.ncos[nco_index(bank, nco)]
    }

    pub fn set_nco(&mut self, bank: u8, nco: u8, setting: NcoSetting) {
        self.ncos[nco_index(bank, nco)] = NcoSetting {
            ftw: setting.ftw & PHASE_MASK,
            ref_phase: setting.ref_phase & PHASE_MASK,
        };
    }

    /// Check every table entry and the given list against this image.
    pub fn validate_list(&self, list: &InstructionList) -> Result<()> {
        if list.len() > LIST_CAPACITY {
            return Err(full(Memory::InstructionList, LIST_CAPACITY, list.len()));
        }
        let mut busy = [false; BANKS];
        for (entry, r) in list.entries().iter().enumerate() {
            if r.bank as usize >= BANKS || r.nco as usize >= NCOS_PER_BANK {
                return Err(ControllerError::BadIndex { entry, bank: r.bank, nco: r.nco });
            }
            let ins = self.table(r.bank, r.nco).get(r.slot).ok_or(ControllerError::DanglingSlot {
                entry,
                bank: r.bank,
                nco: r.nco,
                slot: r.slot,
            })?;
            ins.validate(self.envelopes.len())?;
            if !r.with_previous {
                busy = [false; BANKS];
            }
            if ins.range.is_some() {
                if busy[r.bank as usize] {
                    return Err(ControllerError::BankConflict { entry, bank: r.bank });
                }
                busy[r.bank as usize] = true;
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.ncos.len() != BANKS * NCOS_PER_BANK || self.tables.len() != BANKS * NCOS_PER_BANK {
            return Err(ControllerError::Config("image must describe 2 banks of 16 NCOs".into()));
        }
        for t in &self.tables {
            if t.len() > TABLE_CAPACITY {
                return Err(full(Memory::InstructionTable, TABLE_CAPACITY, t.len()));
            }
            for ins in t.slots() {
                ins.validate(self.envelopes.len())?;
            }
        }
        if self.envelopes.len() > ENVELOPE_CAPACITY {
            return Err(full(Memory::Envelope, ENVELOPE_CAPACITY, self.envelopes.len()));
        }
        self.validate_list(&self.list)
    }

    /// Envelope words, table entries and list entries in use.
    pub fn occupancy(&self) -> Occupancy {
        Occupancy {
            envelope_words: self.envelopes.len(),
            table_entries: self.tables.iter().map(|t| t.len()).sum(),
            max_table_entries: self.tables.iter().map(|t| t.len()).max().unwrap_or(0),
            list_entries: self.list.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occupancy {
    pub envelope_words: usize,
    pub table_entries: usize,
    pub max_table_entries: usize,
    pub list_entries: usize,
}
