// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Machine-readable summary of a compilation.

use cryotwin_controller::{InstructionList, MemoryImage, Occupancy};
use serde::{Deserialize, Serialize};

use crate::plan::FrequencyPlan;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileReport {
    pub schema: u32,
    /// Memory use; `list_entries` counts the largest chunk.
    pub occupancy: Occupancy,
    /// List entries over all chunks.
    pub instruction_count: usize,
    /// Execute triggers needed.
    pub triggers: usize,
    pub split: bool,
    /// Total output length over all triggers.
    pub samples: u64,
    pub plan: FrequencyPlan,
}

impl CompileReport {
    pub fn new(image: &MemoryImage, lists: &[InstructionList], plan: &FrequencyPlan) -> Self {
        let mut occupancy = image.occupancy();
        occupancy.list_entries = lists.iter().map(InstructionList::len).max().unwrap_or(0);
        let samples = lists.iter().map(|l| list_samples(image, l)).sum();
        Self {
            schema: REPORT_SCHEMA,
            occupancy,
            instruction_count: lists.iter().map(InstructionList::len).sum(),
            triggers: lists.len(),
            split: lists.len() > 1,
            samples,
            plan: plan.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Output length of one list: each parallel group lasts as long as its longest burst.
pub fn list_samples(image: &MemoryImage, list: &InstructionList) -> u64 {
    let mut total = 0;
    let mut group = 0;
    for r in list.entries() {
        if !r.with_previous {
            total += group;
            group = 0;
        }
        let n = image.table(r.bank, r.nco).get(r.slot).map_or(0, |i| i.samples());
        group = group.max(n);
    }
    total + group
}
