// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Binary memory-image format, version 1. All integers little-endian.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "CTXI"
//! 4       2     version (1)
//! 6       1     amp_bits
//! 7       1     phase_mod_bits
//! 8       4     envelope word count E (<= 40960)
//! 12      8*E   envelope words: amplitude i32, phase_mod u32
//! ..      8*32  NCO settings, bank-major: ftw u32, ref_phase u32
//! ..      var   32 tables, bank-major: count u8 (<= 8), then per entry:
//!               flags u8 (bit0 range, bit1 phase), start u32, stop u32, phase u32
//! ..      4     list length L (<= 2048)
//! ..      4*L   list entries: bank u8, nco u8, slot u8, flags u8 (bit0 with_previous)
//! ```
//!
//! Unused fields are written as zero. Trailing bytes are an error.

use crate::config::{BANKS, ENVELOPE_CAPACITY, LIST_CAPACITY, NCOS_PER_BANK, TABLE_CAPACITY};
use crate::error::{ControllerError, Result};
use crate::memory::{Instruction, InstructionRef, MemoryImage, NcoSetting};
use crate::pac::EnvelopeEntry;

pub const MAGIC: &[u8; 4] = b"CTXI";
pub const VERSION: u16 = 1;

pub fn encode(image: &MemoryImage) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(image.envelopes.amp_bits as u8);
    out.push(image.envelopes.phase_mod_bits as u8);
    out.extend_from_slice(&(image.envelopes.len() as u32).to_le_bytes());
    for e in image.envelopes.entries() {
        out.extend_from_slice(&e.amplitude.to_le_bytes());
        out.extend_from_slice(&e.phase_mod.to_le_bytes());
    }
    for s in &image.ncos {
        out.extend_from_slice(&s.ftw.to_le_bytes());
        out.extend_from_slice(&s.ref_phase.to_le_bytes());
    }
    for t in &image.tables {
        out.push(t.len() as u8);
        for ins in t.slots() {
            let flags = ins.range.is_some() as u8 | (ins.phase_update.is_some() as u8) << 1;
            let (a, b) = ins.range.unwrap_or((0, 0));
            out.push(flags);
            out.extend_from_slice(&a.to_le_bytes());
            out.extend_from_slice(&b.to_le_bytes());
            out.extend_from_slice(&ins.phase_update.unwrap_or(0).to_le_bytes());
        }
    }
    out.extend_from_slice(&(image.list.len() as u32).to_le_bytes());
    for r in image.list.entries() {
        out.extend_from_slice(&[r.bank, r.nco, r.slot, r.with_previous as u8]);
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn corrupt(&self, at: usize, reason: impl Into<String>) -> ControllerError {
        ControllerError::Corrupt { offset: at, reason: reason.into() }
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(self.corrupt(self.buf.len(), format!("truncated while reading {what}")));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn i32(&mut self, what: &str) -> Result<i32> {
        Ok(i32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }
}

pub fn decode(buf: &[u8]) -> Result<MemoryImage> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(4, "magic")? != MAGIC {
        return Err(r.corrupt(0, "bad magic"));
    }
    let at = r.pos;
    let version = r.u16("version")?;
    if version != VERSION {
        return Err(r.corrupt(at, format!("unsupported version {version}")));
    }
    let at = r.pos;
    let amp_bits = r.u8("amp_bits")? as u32;
    let phase_mod_bits = r.u8("phase_mod_bits")? as u32;
    if !(2..=24).contains(&amp_bits) || !(1..=22).contains(&phase_mod_bits) {
        return Err(r.corrupt(at, "bit widths out of range"));
    }
    let mut image = MemoryImage::new(amp_bits, phase_mod_bits);

    let at = r.pos;
    let n_env = r.u32("envelope count")? as usize;
    if n_env > ENVELOPE_CAPACITY {
        return Err(r.corrupt(at, format!("envelope holds {n_env} words, limit {ENVELOPE_CAPACITY}")));
    }
    for _ in 0..n_env {
        let at = r.pos;
        let amplitude = r.i32("envelope amplitude")?;
        let phase_mod = r.u32("envelope phase")?;
        image
            .envelopes
            .push(EnvelopeEntry { amplitude, phase_mod })
            .map_err(|e| r.corrupt(at, e.to_string()))?;
    }

    for k in 0..BANKS * NCOS_PER_BANK {
        let ftw = r.u32("nco ftw")?;
        let ref_phase = r.u32("nco reference phase")?;
        image.ncos[k] = NcoSetting { ftw, ref_phase };
        if ftw >= 1 << 22 || ref_phase >= 1 << 22 {
            return Err(r.corrupt(r.pos - 8, "nco word exceeds 22 bits"));
        }
    }

    for k in 0..BANKS * NCOS_PER_BANK {
        let at = r.pos;
        let count = r.u8("table count")? as usize;
        if count > TABLE_CAPACITY {
            return Err(r.corrupt(at, format!("table holds {count} entries, limit {TABLE_CAPACITY}")));
        }
        for _ in 0..count {
            let at = r.pos;
            let flags = r.u8("instruction flags")?;
            let a = r.u32("start address")?;
            let b = r.u32("stop address")?;
            let p = r.u32("phase update")?;
            if flags & !3 != 0 {
                return Err(r.corrupt(at, format!("unknown instruction flags {flags:#x}")));
            }
            let ins = Instruction {
                range: (flags & 1 != 0).then_some((a, b)),
                phase_update: (flags & 2 != 0).then_some(p),
            };
            ins.validate(image.envelopes.len()).map_err(|e| r.corrupt(at, e.to_string()))?;
            image.tables[k].insert(ins).map_err(|e| r.corrupt(at, e.to_string()))?;
        }
    }

    let at = r.pos;
    let n_list = r.u32("list length")? as usize;
    if n_list > LIST_CAPACITY {
        return Err(r.corrupt(at, format!("list holds {n_list} entries, limit {LIST_CAPACITY}")));
    }
    for _ in 0..n_list {
        let at = r.pos;
        let e = r.take(4, "list entry")?;
        if e[3] & !1 != 0 {
            return Err(r.corrupt(at, "unknown list flags"));
        }
        image
            .list
            .push(InstructionRef { bank: e[0], nco: e[1], slot: e[2], with_previous: e[3] & 1 != 0 })
            .map_err(|err| r.corrupt(at, err.to_string()))?;
    }
    if r.pos != buf.len() {
        return Err(r.corrupt(r.pos, "trailing bytes"));
    }
    image
        .validate_list(&image.list)
        .map_err(|e| ControllerError::Corrupt { offset: at, reason: e.to_string() })?;
    Ok(image)
}
