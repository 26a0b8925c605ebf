use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rindler_core::relativity::{squeeze, AccelerationParams};
use rindler_core::teleport::{BellOutcome, LogicalQubit};
use rindler_core::Statistics;

use crate::args::{OutputArgs, QubitArgs, SweepArgs};
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{format_f64, Format};

/// Grids longer than this are refused.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variable {
    #[default]
    R,
    Acceleration,
}

impl FromStr for Variable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r" => Ok(Variable::R),
            "a" | "acceleration" => Ok(Variable::Acceleration),
            other => Err(format!("unknown sweep variable `{other}` (expected r or acceleration)")),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::R => "r",
            Variable::Acceleration => "acceleration",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Output {
    pub fn resolve(args: &OutputArgs, config: &Config, default: Format) -> Result<Self> {
        Ok(Self {
            format: config.resolve(args.format, "format")?.unwrap_or(default),
            out: config.resolve(args.out.clone(), "out")?,
        })
    }
}

/// Input qubit from optional amplitudes; `|+_L>` when neither is given.
pub fn resolve_qubit(args: &QubitArgs, config: &Config) -> Result<LogicalQubit> {
    let alpha: Option<Complex64> = config.resolve(args.alpha, "alpha")?;
    let beta: Option<Complex64> = config.resolve(args.beta, "beta")?;
    match (alpha, beta) {
        (None, None) => Ok(LogicalQubit::plus()),
        (Some(a), Some(b)) => {
            LogicalQubit::normalized(a, b).map_err(|_| CliError::Usage("alpha and beta are both zero".into()))
        }
        _ => Err(CliError::Usage("give both --alpha and --beta, or neither".into())),
    }
}

pub fn format_complex(z: Complex64) -> String {
    if !(z.im < 0.0) {
        format!("{}+{}i", format_f64(z.re), format_f64(z.im))
    } else {
        format!("{}-{}i", format_f64(z.re), format_f64(-z.im))
    }
}

/// One grid point: the acceleration, when swept, and the squeeze parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub a: Option<f64>,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Mode frequency (rad/s) for acceleration sweeps.
    pub omega: Option<f64>,
    pub statistics: Statistics,
    pub n_max: Option<u32>,
    pub tail_tolerance: Option<f64>,
    pub outcome: Option<BellOutcome>,
    pub psi: LogicalQubit,
    pub output: Output,
}

/// Defaults that differ between subcommands.
#[derive(Debug, Clone, Copy)]
pub struct SweepDefaults {
    pub r_stop: f64,
    pub r_step: f64,
}

impl SweepSpec {
    pub fn resolve(args: &SweepArgs, config: &Config, defaults: SweepDefaults) -> Result<Self> {
        let statistics = config.resolve(args.statistics, "statistics")?.unwrap_or(Statistics::Bosonic);
        let variable = config.resolve(args.variable, "variable")?.unwrap_or_default();
        let omega = config.resolve(args.omega, "omega")?;
        let (start, stop, step) = match variable {
            Variable::R => {
                let stop_default = match statistics {
                    Statistics::Bosonic => defaults.r_stop,
                    Statistics::Fermionic => FRAC_PI_4,
                };
                (
                    config.resolve(args.r_start, "r-start")?.unwrap_or(0.0),
                    config.resolve(args.r_stop, "r-stop")?.unwrap_or(stop_default),
                    config.resolve(args.r_step, "r-step")?.unwrap_or(defaults.r_step),
                )
            }
            Variable::Acceleration => {
                let need = |v: Option<f64>, name: &str| {
                    v.ok_or_else(|| CliError::Usage(format!("acceleration sweeps need --{name}")))
                };
                (
                    need(config.resolve(args.a_start, "a-start")?, "a-start")?,
                    need(config.resolve(args.a_stop, "a-stop")?, "a-stop")?,
                    need(config.resolve(args.a_step, "a-step")?, "a-step")?,
                )
            }
        };
        let spec = Self {
            variable,
            start,
            stop,
            step,
            omega,
            statistics,
            n_max: config.resolve(args.n_max, "n-max")?,
            tail_tolerance: config.resolve(args.tail_tol, "tail-tol")?,
            outcome: config.resolve(args.outcome, "outcome")?,
            psi: resolve_qubit(&args.qubit, config)?,
            output: Output::resolve(&args.output, config, Format::Csv)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(CliError::Usage(m));
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return usage("sweep bounds must be finite".into());
        }
        if self.start < 0.0 {
            return usage(format!("sweep start {} must be >= 0", self.start));
        }
        if self.start > self.stop {
            return usage(format!("sweep start {} exceeds stop {}", self.start, self.stop));
        }
        if !(self.step > 0.0) {
            return usage(format!("sweep step {} must be > 0", self.step));
        }
        if (self.stop - self.start) / self.step > MAX_POINTS as f64 {
            return usage(format!("sweep has more than {MAX_POINTS} points"));
        }
        if self.variable == Variable::R && self.statistics == Statistics::Fermionic && self.start > FRAC_PI_4 {
            return usage(format!("fermionic sweeps live in [0, pi/4]; start {} is past the end", self.start));
        }
        match (self.variable, self.omega) {
            (Variable::Acceleration, None) => return usage("acceleration sweeps need --omega".into()),
            (Variable::Acceleration, Some(w)) if !(w > 0.0 && w.is_finite()) => {
                return usage(format!("omega = {w} must be > 0"))
            }
            _ => {}
        }
        if let Some(t) = self.tail_tolerance {
            if !(t > 0.0 && t < 1.0) {
                return usage(format!("tail tolerance {t} must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    /// Grid values of the swept variable. Fermionic r grids stop at pi/4 and
    /// end exactly on it when the requested range reaches it.
    pub fn values(&self) -> Vec<f64> {
        let mut stop = self.stop;
        let clip = self.variable == Variable::R && self.statistics == Statistics::Fermionic;
        if clip {
            stop = stop.min(FRAC_PI_4);
        }
        let slack = 1e-9 * self.step;
        let n = ((stop - self.start + slack) / self.step).floor() as usize;
        let mut values: Vec<f64> = (0..=n).map(|k| self.start + k as f64 * self.step).collect();
        if let Some(last) = values.last_mut() {
            if (*last - stop).abs() <= slack {
                *last = stop;
            }
        }
        if clip && self.stop >= FRAC_PI_4 && values.last().is_some_and(|&v| v < FRAC_PI_4) {
            values.push(FRAC_PI_4);
        }
        values
    }

    pub fn points(&self) -> Result<Vec<GridPoint>> {
        self.values()
            .into_iter()
            .map(|v| match self.variable {
                Variable::R => Ok(GridPoint { a: None, r: v }),
                Variable::Acceleration => {
                    let params = AccelerationParams::new(v, self.omega.unwrap_or(f64::NAN))?;
                    Ok(GridPoint { a: Some(v), r: squeeze(&params, self.statistics)?.r })
                }
            })
            .collect()
    }

    /// Largest r on the grid.
    pub fn r_max(&self) -> Result<f64> {
        Ok(self.points()?.iter().map(|p| p.r).fold(0.0, f64::max))
    }

    /// Provenance entries; the qubit and outcome only matter to fidelity.
    pub fn parameters(&self, with_qubit: bool) -> Vec<(String, String)> {
        let mut p = vec![
            ("statistics".to_string(), self.statistics.to_string()),
            ("variable".to_string(), self.variable.to_string()),
            ("start".to_string(), format_f64(self.start)),
            ("stop".to_string(), format_f64(self.stop)),
            ("step".to_string(), format_f64(self.step)),
        ];
        if let Some(w) = self.omega {
            p.push(("omega".into(), format_f64(w)));
        }
        if let Some(n) = self.n_max {
            p.push(("n_max".into(), n.to_string()));
        }
        if let Some(t) = self.tail_tolerance {
            p.push(("tail_tol".into(), format_f64(t)));
        }
        if with_qubit {
            p.push(("outcome".into(), self.outcome.map_or("averaged".to_string(), |o| o.to_string())));
            p.push(("alpha".into(), format_complex(self.psi.alpha)));
            p.push(("beta".into(), format_complex(self.psi.beta)));
        }
        p
    }
}
