//! Driver for the accelerated-teleportation library: parameter sweeps,
//! state dumps and unit conversions with CSV or JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod sweep;

pub use args::{Cli, Command};
pub use commands::{cmd_convert, cmd_entropy, cmd_fidelity, cmd_pdc, cmd_state_dump, CommandOutput};
pub use config::Config;
pub use error::{CliError, Result};
pub use report::{Format, RunReport};
pub use sweep::SweepSpec;

use commands::{ConvertSpec, DumpSpec, PdcSpec};
use sweep::SweepDefaults;

const FIDELITY_DEFAULTS: SweepDefaults = SweepDefaults { r_stop: 2.0, r_step: 0.05 };
const ENTROPY_DEFAULTS: SweepDefaults = SweepDefaults { r_stop: 3.0, r_step: 0.05 };

/// Resolves flags against the config file, runs the command, writes the
/// result, then reports any validation failure.
pub fn run(cli: &Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let (result, output) = match &cli.command {
        Command::Fidelity(a) => {
            let spec = SweepSpec::resolve(a, &config, FIDELITY_DEFAULTS)?;
            (cmd_fidelity(&spec)?, spec.output)
        }
        Command::Entropy(a) => {
            let spec = SweepSpec::resolve(a, &config, ENTROPY_DEFAULTS)?;
            (cmd_entropy(&spec)?, spec.output)
        }
        Command::Dump(a) => {
            let spec = DumpSpec::resolve(a, &config)?;
            (cmd_state_dump(&spec)?, spec.output)
        }
        Command::Pdc(a) => {
            let spec = PdcSpec::resolve(a, &config)?;
            (cmd_pdc(&spec)?, spec.output)
        }
        Command::Convert(a) => {
            let spec = ConvertSpec::resolve(a, &config)?;
            (cmd_convert(&spec)?, spec.output)
        }
    };
    report::emit(&result.artifact.render(output.format), output.out.as_deref())?;
    match result.failure {
        Some(message) => Err(CliError::Validation(message)),
        None => Ok(()),
    }
}
