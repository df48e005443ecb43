// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(cryotwin_cli::main_with(std::env::args_os()))
}
