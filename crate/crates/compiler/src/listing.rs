// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Text listing of a memory image, and its inverse.
//!
//! ```text
//! amp_bits 10
//! phase_mod_bits 10
//! nco b0 n0 ftw=100663 ref=0
//! env @0 x250 amp=256 pm=0          # run of 250 identical words
//! table b0 n0 s0 burst=0..249
//! table b0 n0 s1 phase=1048576
//! list b0 n0 s1
//! list b1 n0 s0 +                   # + starts with the previous entry
//! ```
//!
//! Only NCOs with a nonzero setting are listed. Table lines must appear in
//! slot order.

use std::fmt::Write as _;

use cryotwin_controller::config::{BANKS, NCOS_PER_BANK};
use cryotwin_controller::{image, EnvelopeEntry, Instruction, InstructionRef, MemoryImage, NcoSetting};

use crate::error::{CompileError, Result};

pub fn disassemble(img: &MemoryImage) -> String {
    let mut out = String::new();
    let env = &img.envelopes;
    let _ = writeln!(out, "amp_bits {}", env.amp_bits);
    let _ = writeln!(out, "phase_mod_bits {}", env.phase_mod_bits);
    for b in 0..BANKS as u8 {
        for n in 0..NCOS_PER_BANK as u8 {
            let s = img.nco(b, n);
            if s != NcoSetting::default() {
                let _ = writeln!(out, "nco b{b} n{n} ftw={} ref={}", s.ftw, s.ref_phase);
            }
        }
    }
    let words = env.entries();
    let mut i = 0;
    while i < words.len() {
        let mut j = i + 1;
        while j < words.len() && words[j] == words[i] {
            j += 1;
        }
        let _ = writeln!(out, "env @{i} x{} amp={} pm={}", j - i, words[i].amplitude, words[i].phase_mod);
        i = j;
    }
    for b in 0..BANKS as u8 {
        for n in 0..NCOS_PER_BANK as u8 {
            for (k, ins) in img.table(b, n).slots().iter().enumerate() {
                let _ = write!(out, "table b{b} n{n} s{k}");
                if let Some((a, z)) = ins.range {
                    let _ = write!(out, " burst={a}..{z}");
                }
                if let Some(p) = ins.phase_update {
                    let _ = write!(out, " phase={p}");
                }
                out.push('\n');
            }
        }
    }
    for r in img.list.entries() {
        let _ = writeln!(out, "list b{} n{} s{}{}", r.bank, r.nco, r.slot, if r.with_previous { " +" } else { "" });
    }
    out
}

/// Decode a binary image and list it.
pub fn disassemble_bytes(bytes: &[u8]) -> Result<String> {
    Ok(disassemble(&image::decode(bytes)?))
}

fn field<'a>(word: Option<&'a str>, prefix: &str) -> std::result::Result<&'a str, String> {
    word.and_then(|w| w.strip_prefix(prefix)).ok_or_else(|| format!("expected `{prefix}...`"))
}

fn num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|_| format!("bad number `{s}`"))
}

pub fn assemble(text: &str) -> Result<MemoryImage> {
    let mut amp_bits = None;
    let mut pm_bits = None;
    let mut img: Option<MemoryImage> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| CompileError::Parse { line, message };
        let mut w = body.split_whitespace();
        let head = w.next().unwrap_or("");
        match head {
            "amp_bits" => amp_bits = Some(num::<u32>(w.next().unwrap_or("")).map_err(err)?),
            "phase_mod_bits" => pm_bits = Some(num::<u32>(w.next().unwrap_or("")).map_err(err)?),
            _ => {
                if img.is_none() {
                    let (Some(a), Some(p)) = (amp_bits, pm_bits) else {
                        return Err(err("amp_bits and phase_mod_bits must come first".into()));
                    };
                    if !(2..=24).contains(&a) || !(1..=22).contains(&p) {
                        return Err(err("word widths out of range".into()));
                    }
                    img = Some(MemoryImage::new(a, p));
                }
                let im = img.as_mut().expect("created above");
                let parsed: std::result::Result<(), String> = (|| {
                    match head {
                        "nco" => {
                            let b: u8 = num(field(w.next(), "b")?)?;
                            let k: u8 = num(field(w.next(), "n")?)?;
                            let ftw = num(field(w.next(), "ftw=")?)?;
                            let ref_phase = num(field(w.next(), "ref=")?)?;
                            if b as usize >= BANKS || k as usize >= NCOS_PER_BANK {
                                return Err(format!("no NCO b{b} n{k}"));
                            }
                            im.set_nco(b, k, NcoSetting { ftw, ref_phase });
                        }
                        "env" => {
                            let at: usize = num(field(w.next(), "@")?)?;
                            let count: usize = num(field(w.next(), "x")?)?;
                            let amp = num(field(w.next(), "amp=")?)?;
                            let pm = num(field(w.next(), "pm=")?)?;
                            if at != im.envelopes.len() {
                                return Err(format!("envelope run at {at}, expected {}", im.envelopes.len()));
                            }
                            let e = EnvelopeEntry::new(amp, pm, im.envelopes.amp_bits, im.envelopes.phase_mod_bits)
                                .map_err(|e| e.to_string())?;
                            im.envelopes.extend(&vec![e; count]).map_err(|e| e.to_string())?;
                        }
                        "table" => {
                            let b: u8 = num(field(w.next(), "b")?)?;
                            let k: u8 = num(field(w.next(), "n")?)?;
                            let s: usize = num(field(w.next(), "s")?)?;
                            if b as usize >= BANKS || k as usize >= NCOS_PER_BANK {
                                return Err(format!("no NCO b{b} n{k}"));
                            }
                            let mut ins = Instruction { range: None, phase_update: None };
                            for f in w.by_ref() {
                                if let Some(r) = f.strip_prefix("burst=") {
                                    let (a, z) = r.split_once("..").ok_or("expected burst=A..B")?;
                                    ins.range = Some((num(a)?, num(z)?));
                                } else if let Some(p) = f.strip_prefix("phase=") {
                                    ins.phase_update = Some(num(p)?);
                                } else {
                                    return Err(format!("unexpected `{f}`"));
                                }
                            }
                            let t = im.table_mut(b, k);
                            if s != t.len() {
                                return Err(format!("slot s{s} out of order, expected s{}", t.len()));
                            }
                            t.insert(ins).map_err(|e| e.to_string())?;
                        }
                        "list" => {
                            let b = num(field(w.next(), "b")?)?;
                            let k = num(field(w.next(), "n")?)?;
                            let s = num(field(w.next(), "s")?)?;
                            let mut r = InstructionRef::new(b, k, s);
                            match w.next() {
                                None => {}
                                Some("+") => r = r.parallel(),
                                Some(x) => return Err(format!("unexpected `{x}`")),
                            }
                            im.list.push(r).map_err(|e| e.to_string())?;
                        }
                        _ => return Err(format!("unknown directive `{head}`")),
                    }
                    match w.next() {
                        Some(x) => Err(format!("unexpected `{x}`")),
                        None => Ok(()),
                    }
                })();
                parsed.map_err(err)?;
            }
        }
    }
    let img = match img {
        Some(i) => i,
        None => match (amp_bits, pm_bits) {
            (Some(a), Some(p)) => MemoryImage::new(a, p),
            _ => return Err(CompileError::Parse { line: 0, message: "empty listing".into() }),
        },
    };
    img.validate()?;
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_round_trip() {
        let text = "amp_bits 10\nphase_mod_bits 10\nnco b1 n0 ftw=4 ref=0\nenv @0 x3 amp=256 pm=0\n\
                    env @3 x2 amp=0 pm=1\ntable b1 n0 s0 burst=0..2\ntable b1 n0 s1 phase=1048576\n\
                    table b1 n0 s2 burst=3..4 phase=7\nlist b1 n0 s1\nlist b1 n0 s0 +\n";
        let img = assemble(text).unwrap();
        assert_eq!(img.envelopes.len(), 5);
        assert_eq!(disassemble(&img), text);
    }

    #[test]
    fn errors_have_lines() {
        let e = assemble("amp_bits 10\nphase_mod_bits 10\ntable b0 n0 s1 phase=3\n").unwrap_err();
        assert!(matches!(e, CompileError::Parse { line: 3, .. }), "{e}");
        let e = assemble("env @0 x1 amp=0 pm=0\n").unwrap_err();
        assert!(matches!(e, CompileError::Parse { line: 1, .. }));
    }

    #[test]
    fn truncated_binary_reports_offset() {
        let img = assemble("amp_bits 10\nphase_mod_bits 10\nenv @0 x4 amp=3 pm=0\n").unwrap();
        let bytes = image::encode(&img);
        let e = disassemble_bytes(&bytes[..bytes.len() - 2]).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains(&format!("{}", bytes.len() - 2)), "{msg}");
    }
}
