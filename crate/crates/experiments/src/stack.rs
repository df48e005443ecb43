// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

use cryotwin_compiler::{compile, CalibrationSet, CompileOptions, Compiled, FrequencyPlan, Program};
use cryotwin_controller::TxConfig;
use cryotwin_physics::{DeviceModel, Exchange};

use crate::backend::{DeviceBackend, TwoLevelOracle};
use crate::error::Result;

/// Device, transmitter settings and the calibration the compiler works from.
#[derive(Debug, Clone)]
pub struct Stack {
    pub model: DeviceModel,
    pub tx: TxConfig,
    pub exchange: Exchange,
    pub plan: FrequencyPlan,
    pub cal: CalibrationSet,
    pub options: CompileOptions,
}

impl Stack {
    /// Plan tones for `exchange` and calibrate against the noise-free device.
    pub fn new(model: DeviceModel, tx: TxConfig, exchange: Exchange) -> Result<Self> {
        model.validate()?;
        tx.validate()?;
        let plan = FrequencyPlan::for_device(&model, exchange, &tx)?;
        let cal = CalibrationSet::from_device(&model, &tx, &plan)?;
        Ok(Self { model, tx, exchange, plan, cal, options: CompileOptions::default() })
    }

    pub fn compile(&self, program: &Program) -> Result<Compiled> {
        self.compile_with(program, &self.plan)
    }

    /// Compile against a retuned copy of the plan, keeping the calibration.
    pub fn compile_with(&self, program: &Program, plan: &FrequencyPlan) -> Result<Compiled> {
        Ok(compile(program, plan, &self.cal, self.options)?)
    }

    pub fn device(&self, nodes: usize) -> Result<DeviceBackend> {
        DeviceBackend::new(self.model, self.exchange, self.tx, nodes)
    }

    pub fn oracle(&self) -> TwoLevelOracle {
        TwoLevelOracle::new(&self.model, self.tx)
    }
}
