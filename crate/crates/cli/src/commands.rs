use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rindler_core::entropy::{
    adaptive_n_max, bosonic_gain_limit, five_state_model, info_gain, info_gain_adaptive, info_gain_spectral, InfoGain,
};
use rindler_core::fock::json::DensityDocument;
use rindler_core::pdc::{
    effective_acceleration, pdc_vacuum, photon_number_difference, reduced_thermal_pdc, unruh_temperature_from_matrix,
    validate_bogoliubov, SqueezeMatrix, BOGOLIUBOV_TOLERANCE, IDLER,
};
use rindler_core::relativity::{
    check_r, squeeze_bosonic, squeeze_fermionic, unruh_temperature, AccelerationParams, SqueezeParameter, Units,
    C_LIGHT,
};
use rindler_core::teleport::{
    bosonic_receiver_tail, bosonic_sector_weight, conditional_amplitudes, fidelity_closed_form, protocol_fidelity,
    rob_state, rob_state_bosonic_bruteforce, rob_state_fermionic, rob_state_fermionic_bruteforce, sector_weights,
    BellOutcome, LogicalQubit,
};
use rindler_core::vacuum::{bosonic_vacuum, ModePair};
use rindler_core::{DensityOperator, Statistics};

use crate::args::{ConvertArgs, DumpArgs, PdcArgs};
use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{format_f64, timestamp, Cell, Column, Format, RunReport, GENERATOR, VERSION};
use crate::sweep::{format_complex, resolve_qubit, GridPoint, Output, SweepSpec, Variable};

pub const TOL_FIDELITY: f64 = 1e-9;
pub const TOL_ENTROPY_CHECK: f64 = 1e-9;
pub const TOL_FERMIONIC_ENTROPY: f64 = 1e-10;
pub const TOL_MONOTONE: f64 = 1e-12;
pub const TOL_STATE: f64 = 1e-10;
pub const TOL_PDC: f64 = 1e-10;
pub const TOL_ROUND_TRIP: f64 = 1e-10;

pub const DEFAULT_FIDELITY_N_MAX: u32 = 40;
/// Largest cap the full protocol pipeline is run at.
pub const MAX_PIPELINE_N_MAX: u32 = 200;
/// Cap for the diagonalization cross-check of the entropy spectra.
pub const ENTROPY_CHECK_CAP: u32 = 40;
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;
pub const DEFAULT_DUMP_N_MAX: u32 = 4;
/// Brute-force receiver states are built up to this cap in dumps.
pub const DUMP_BRUTEFORCE_CAP: u32 = 30;
pub const DEFAULT_PDC_N_MAX: u32 = 30;
pub const DEFAULT_PDC_OMEGA: f64 = 1e9;
pub const DUMP_SCHEMA: &str = "rindler.dump/1";

/// A rendered result and the validation failure, if any, that should turn
/// into exit code 2 after the result is written.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub artifact: Artifact,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Artifact {
    Report(RunReport),
    Dump(Box<DumpDocument>),
}

impl Artifact {
    pub fn render(&self, format: Format) -> String {
        match self {
            Artifact::Report(r) => r.render(format),
            Artifact::Dump(d) => match format {
                Format::Json => d.to_json(),
                Format::Csv => d.to_report().to_csv(),
            },
        }
    }
}

fn finish(report: RunReport, failure: Option<String>) -> CommandOutput {
    CommandOutput { artifact: Artifact::Report(report), failure }
}

fn sweep_columns(spec: &SweepSpec, tail: &[(&str, &str)]) -> Vec<Column> {
    let mut cols = Vec::new();
    if spec.variable == Variable::Acceleration {
        cols.push(Column::new("a", "proper acceleration (m/s^2)"));
    }
    cols.push(Column::new("r", "squeeze parameter"));
    cols.extend(tail.iter().map(|(n, d)| Column::new(n, d)));
    cols
}

fn lead_cells(p: &GridPoint) -> Vec<Cell> {
    let mut cells = Vec::new();
    if let Some(a) = p.a {
        cells.push(Cell::Num(a));
    }
    cells.push(Cell::Num(p.r));
    cells
}

/// Receiver sector weights for `n = 1..=4`, independent of outcome and input.
fn sector_weight_cells(statistics: Statistics, r: f64) -> Result<Vec<Cell>> {
    match statistics {
        Statistics::Bosonic => Ok((1..=4).map(|n| Cell::Num(bosonic_sector_weight(n, r))).collect()),
        Statistics::Fermionic => {
            let amps = conditional_amplitudes(&LogicalQubit::zero(), BellOutcome::all()[0]);
            let w = sector_weights(&rob_state_fermionic(&amps, r)?);
            Ok((1..=4).map(|n| Cell::Num(w.weight(n))).collect())
        }
    }
}

const WEIGHT_COLUMNS: [(&str, &str); 4] = [
    ("w1", "receiver weight with 1 excitation"),
    ("w2", "receiver weight with 2 excitations"),
    ("w3", "receiver weight with 3 excitations"),
    ("w4", "receiver weight with 4 excitations"),
];

fn fidelity_n_max(spec: &SweepSpec) -> Result<u32> {
    if spec.statistics == Statistics::Fermionic {
        return Ok(1);
    }
    let n = match (spec.n_max, spec.tail_tolerance) {
        (Some(n), _) => n,
        (None, Some(tol)) => adaptive_n_max(spec.r_max()?, tol)?,
        (None, None) => DEFAULT_FIDELITY_N_MAX,
    };
    if n == 0 || n > MAX_PIPELINE_N_MAX {
        return Err(CliError::Usage(format!(
            "fidelity pipeline cap n_max = {n} outside [1, {MAX_PIPELINE_N_MAX}]; lower the range or raise --tail-tol"
        )));
    }
    Ok(n)
}

/// Protocol fidelity against the closed form over the grid.
pub fn cmd_fidelity(spec: &SweepSpec) -> Result<CommandOutput> {
    let n_max = fidelity_n_max(spec)?;
    let points = spec.points()?;
    let outcomes: Vec<BellOutcome> = spec.outcome.map_or_else(|| BellOutcome::all().to_vec(), |o| vec![o]);
    let weight = 1.0 / outcomes.len() as f64;

    let rows: Vec<(Vec<Cell>, f64)> = points
        .par_iter()
        .map(|p| -> Result<(Vec<Cell>, f64)> {
            let (mut corrected, mut truncated) = (0.0, 0.0);
            for &o in &outcomes {
                let f = protocol_fidelity(spec.statistics, p.r, &spec.psi, o, n_max)?;
                corrected += weight * f.corrected;
                truncated += weight * f.truncated;
            }
            let closed = fidelity_closed_form(spec.statistics, p.r);
            let diff = (corrected - closed).abs();
            let deficit = match spec.statistics {
                Statistics::Bosonic => bosonic_receiver_tail(p.r, n_max),
                Statistics::Fermionic => 0.0,
            };
            let mut cells = lead_cells(p);
            cells.extend([corrected, closed, diff, truncated].map(Cell::Num));
            cells.extend(sector_weight_cells(spec.statistics, p.r)?);
            cells.push(Cell::Num(deficit));
            Ok((cells, diff))
        })
        .collect::<Result<_>>()?;

    let mut tail = vec![
        ("fidelity", "protocol pipeline fidelity, tail corrected"),
        ("fidelity_closed", "closed form"),
        ("abs_diff", "|fidelity - fidelity_closed|"),
        ("fidelity_truncated", "protocol fidelity of the truncated state renormalized"),
    ];
    tail.extend(WEIGHT_COLUMNS);
    tail.push(("truncation_deficit", "receiver weight above n_max"));
    let mut params = spec.parameters(true);
    params.push(("pipeline_n_max".into(), n_max.to_string()));
    let mut report = RunReport::new("fidelity", params, sweep_columns(spec, &tail));
    let max_diff = rows.iter().map(|(_, d)| *d).fold(0.0, |m: f64, d| if d.is_nan() { f64::NAN } else { m.max(d) });
    for (cells, _) in rows {
        report.push_row(cells);
    }
    report.push_summary("rows", report.rows.len() as u32);
    report.push_summary("max_abs_diff", max_diff);
    report.push_summary("tolerance", TOL_FIDELITY);
    let failure = (!(max_diff <= TOL_FIDELITY))
        .then(|| format!("protocol fidelity differs from the closed form by {max_diff:e} (tolerance {TOL_FIDELITY:e})"));
    Ok(finish(report, failure))
}

struct EntropyRow {
    cells: Vec<Cell>,
    delta: f64,
    five: Option<f64>,
    check: f64,
    check_tol: f64,
}

fn entropy_gain(spec: &SweepSpec, r: f64) -> Result<InfoGain> {
    match spec.n_max {
        Some(n) => Ok(info_gain_spectral(spec.statistics, r, n)?),
        None => Ok(info_gain_adaptive(spec.statistics, r, spec.tail_tolerance.unwrap_or(DEFAULT_TAIL_TOL))?),
    }
}

/// Full and five-state entropy gain over the grid.
pub fn cmd_entropy(spec: &SweepSpec) -> Result<CommandOutput> {
    if spec.n_max == Some(0) {
        return Err(CliError::Usage("n_max must be >= 1".into()));
    }
    let points = spec.points()?;
    let rows: Vec<EntropyRow> = points
        .par_iter()
        .map(|p| -> Result<EntropyRow> {
            let r = p.r;
            let (gain, delta, five, check, check_tol) = match spec.statistics {
                Statistics::Bosonic => {
                    let g = entropy_gain(spec, r)?;
                    let cap = g.n_max.min(ENTROPY_CHECK_CAP);
                    let numeric = info_gain(Statistics::Bosonic, r, cap)?;
                    let spectral = info_gain_spectral(Statistics::Bosonic, r, cap)?.delta;
                    (g, g.delta, Some(five_state_model(r)?), (numeric - spectral).abs(), TOL_ENTROPY_CHECK)
                }
                Statistics::Fermionic => {
                    let g = info_gain_spectral(Statistics::Fermionic, r, 1)?;
                    let numeric = info_gain(Statistics::Fermionic, r, 1)?;
                    let check = (numeric - r.cos().powi(2)).abs();
                    (g, numeric, None, check, TOL_FERMIONIC_ENTROPY)
                }
            };
            let mut cells = lead_cells(p);
            cells.extend([
                Cell::Num(delta),
                Cell::from(five),
                Cell::Num(gain.s_pre),
                Cell::Num(gain.s_post),
                Cell::Num(check),
            ]);
            cells.extend(sector_weight_cells(spec.statistics, r)?);
            cells.push(Cell::from(gain.n_max));
            cells.push(Cell::Num(gain.tail));
            Ok(EntropyRow { cells, delta, five, check, check_tol })
        })
        .collect::<Result<_>>()?;

    let check_desc = match spec.statistics {
        Statistics::Bosonic => "|numeric diagonalization - closed-form spectra| at a cap of min(n_max, 40)",
        Statistics::Fermionic => "|delta_s_full - cos^2 r|",
    };
    let mut tail = vec![
        ("delta_s_full", "entropy gain S_pre - S_post in bits"),
        ("delta_s_5state", "gain keeping the one- and two-excitation sectors (bosonic only)"),
        ("s_pre", "receiver entropy before the outcome is known, bits"),
        ("s_post", "receiver entropy after the outcome is known, bits"),
        ("check_error", check_desc),
    ];
    tail.extend(WEIGHT_COLUMNS);
    tail.push(("n_max", "bosonic cap used"));
    tail.push(("truncation_deficit", "receiver weight above n_max"));
    let mut report = RunReport::new("entropy", spec.parameters(false), sweep_columns(spec, &tail));

    let max_check = rows.iter().map(|r| r.check).fold(0.0, f64::max);
    let check_failed = rows.iter().any(|r| !(r.check <= r.check_tol));
    let monotone = rows.windows(2).all(|w| w[1].delta <= w[0].delta + TOL_MONOTONE);
    let band = rows.iter().filter_map(|r| r.five.map(|f| (r.delta - f).abs())).fold(0.0, f64::max);
    let tol = rows.first().map_or(TOL_ENTROPY_CHECK, |r| r.check_tol);
    for row in rows {
        report.push_row(row.cells);
    }
    report.push_summary("rows", report.rows.len() as u32);
    report.push_summary("max_check_error", max_check);
    report.push_summary("tolerance", tol);
    report.push_summary("monotone_non_increasing", monotone);
    if spec.statistics == Statistics::Bosonic {
        report.push_summary("max_abs_full_minus_5state", band);
        report.push_summary("large_r_limit", bosonic_gain_limit());
    }
    let failure = if check_failed {
        Some(format!("entropy check error {max_check:e} exceeds tolerance {tol:e}"))
    } else if !monotone {
        Some("entropy gain is not monotone non-increasing along the sweep".to_string())
    } else {
        None
    };
    Ok(finish(report, failure))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DumpSpec {
    pub statistics: Statistics,
    pub r: f64,
    pub outcome: BellOutcome,
    pub psi: LogicalQubit,
    pub n_max: u32,
    pub output: Output,
}

impl DumpSpec {
    pub fn resolve(args: &DumpArgs, config: &Config) -> Result<Self> {
        let statistics = config.resolve(args.statistics, "statistics")?.unwrap_or(Statistics::Bosonic);
        let r = config.resolve(args.r, "r")?.ok_or_else(|| CliError::Usage("dump needs --r".into()))?;
        let n_max = match statistics {
            Statistics::Bosonic => config.resolve(args.n_max, "n-max")?.unwrap_or(DEFAULT_DUMP_N_MAX),
            Statistics::Fermionic => 1,
        };
        if n_max == 0 {
            return Err(CliError::Usage("n_max must be >= 1".into()));
        }
        Ok(Self {
            statistics,
            r,
            outcome: config.resolve(args.outcome, "outcome")?.unwrap_or(BellOutcome::all()[0]),
            psi: resolve_qubit(&args.qubit, config)?,
            n_max,
            output: Output::resolve(&args.output, config, Format::Json)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpParameters {
    pub statistics: Statistics,
    pub r: f64,
    pub outcome: String,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub n_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorAnnotation {
    /// Total excitation number.
    pub n: u32,
    /// Basis indices belonging to the sector.
    pub indices: Vec<usize>,
    pub weight: f64,
}

/// Receiver density matrix with its sector structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DumpDocument {
    pub schema: String,
    pub generator: Generator,
    pub timestamp: String,
    pub parameters: DumpParameters,
    pub density: DensityDocument,
    pub sectors: Vec<SectorAnnotation>,
    /// `block_mask[i][j] = 1` when the sectors of kets `i` and `j` differ by
    /// at most one excitation.
    pub block_mask: Vec<Vec<u8>>,
    /// Sector pairs `[n, n']` holding at least one nonzero entry.
    pub nonzero_blocks: Vec<[u32; 2]>,
    /// Distance to the brute-force construction, when it was built.
    pub bruteforce_max_abs_diff: Option<f64>,
}

impl DumpDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dump serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DumpDocument =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed dump document: {e}")))?;
        if doc.schema != DUMP_SCHEMA {
            return Err(CliError::Usage(format!("unsupported dump schema `{}`", doc.schema)));
        }
        Ok(doc)
    }

    pub fn density_operator(&self) -> Result<DensityOperator> {
        Ok(DensityOperator::from_document(self.density.clone())?)
    }

    /// Sparse entry listing for CSV output.
    pub fn to_report(&self) -> RunReport {
        let p = &self.parameters;
        let params = vec![
            ("statistics".to_string(), p.statistics.to_string()),
            ("r".to_string(), format_f64(p.r)),
            ("outcome".to_string(), p.outcome.clone()),
            ("alpha".to_string(), format_complex(Complex64::new(p.alpha[0], p.alpha[1]))),
            ("beta".to_string(), format_complex(Complex64::new(p.beta[0], p.beta[1]))),
            ("n_max".to_string(), p.n_max.to_string()),
        ];
        let columns = vec![
            Column::new("row", "basis index of the bra"),
            Column::new("col", "basis index of the ket"),
            Column::new("bra", "occupations (R1_I R2_I)"),
            Column::new("ket", "occupations (R1_I R2_I)"),
            Column::new("n_row", "excitations in the bra"),
            Column::new("n_col", "excitations in the ket"),
            Column::new("re", "real part"),
            Column::new("im", "imaginary part"),
        ];
        let mut report = RunReport::new("dump", params, columns);
        report.timestamp = self.timestamp.clone();
        let basis = &self.density.basis;
        let dim = basis.len();
        let occ = |k: usize| basis[k].0.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        let total = |k: usize| basis[k].total();
        for i in 0..dim {
            for j in 0..dim {
                let [re, im] = self.density.matrix[i * dim + j];
                if re != 0.0 || im != 0.0 {
                    report.push_row(vec![
                        Cell::from(i as u32),
                        Cell::from(j as u32),
                        Cell::Text(occ(i)),
                        Cell::Text(occ(j)),
                        Cell::from(total(i)),
                        Cell::from(total(j)),
                        Cell::Num(re),
                        Cell::Num(im),
                    ]);
                }
            }
        }
        report.push_summary("dim", dim as u32);
        report.push_summary("truncation_deficit", self.density.truncation_deficit);
        let blocks: Vec<String> = self.nonzero_blocks.iter().map(|[a, b]| format!("{a}:{b}")).collect();
        report.push_summary("nonzero_blocks", Cell::Text(blocks.join(" ")));
        report.push_summary("bruteforce_max_abs_diff", Cell::from(self.bruteforce_max_abs_diff));
        report
    }
}

/// Receiver state for one outcome, with sector annotations.
pub fn cmd_state_dump(spec: &DumpSpec) -> Result<CommandOutput> {
    check_r(spec.r, spec.statistics)?;
    let amps = conditional_amplitudes(&spec.psi, spec.outcome);
    let rho = rob_state(spec.statistics, &amps, spec.r, spec.n_max)?;
    let brute = match spec.statistics {
        Statistics::Fermionic => Some(rob_state_fermionic_bruteforce(&amps, spec.r)?),
        Statistics::Bosonic if spec.n_max <= DUMP_BRUTEFORCE_CAP => {
            Some(rob_state_bosonic_bruteforce(&amps, spec.r, spec.n_max)?)
        }
        Statistics::Bosonic => None,
    };
    let diff = brute.map(|b| rho.max_abs_diff(&b)).transpose()?;

    let totals: Vec<u32> = rho.basis().iter().map(|k| k.total()).collect();
    let mut sectors: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &n) in totals.iter().enumerate() {
        sectors.entry(n).or_default().push(i);
    }
    let sectors = sectors
        .into_iter()
        .map(|(n, indices)| {
            let weight = indices.iter().map(|&i| rho.get(i, i).re).sum();
            SectorAnnotation { n, indices, weight }
        })
        .collect();
    let block_mask = totals
        .iter()
        .map(|&a| totals.iter().map(|&b| u8::from(a.abs_diff(b) <= 1)).collect())
        .collect();
    let nonzero_blocks: BTreeSet<[u32; 2]> =
        rho.entries().filter(|(_, _, v)| v.norm() != 0.0).map(|(i, j, _)| [totals[i], totals[j]]).collect();

    let doc = DumpDocument {
        schema: DUMP_SCHEMA.into(),
        generator: Generator { name: GENERATOR.into(), version: VERSION.into() },
        timestamp: timestamp(),
        parameters: DumpParameters {
            statistics: spec.statistics,
            r: spec.r,
            outcome: spec.outcome.to_string(),
            alpha: [spec.psi.alpha.re, spec.psi.alpha.im],
            beta: [spec.psi.beta.re, spec.psi.beta.im],
            n_max: spec.n_max,
        },
        density: rho.to_document(),
        sectors,
        block_mask,
        nonzero_blocks: nonzero_blocks.into_iter().collect(),
        bruteforce_max_abs_diff: diff,
    };
    let failure = diff
        .filter(|d| !(*d <= TOL_STATE))
        .map(|d| format!("closed-form receiver state differs from brute force by {d:e} (tolerance {TOL_STATE:e})"));
    Ok(CommandOutput { artifact: Artifact::Dump(Box::new(doc)), failure })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdcSpec {
    pub matrix: SqueezeMatrix,
    pub phi: f64,
    pub omega: f64,
    pub n_max: u32,
    pub output: Output,
}

impl PdcSpec {
    pub fn resolve(args: &PdcArgs, config: &Config) -> Result<Self> {
        let r: Option<f64> = config.resolve(args.r, "r")?;
        let s11: Option<f64> = config.resolve(args.s11, "s11")?;
        let s21: Option<f64> = config.resolve(args.s21, "s21")?;
        let phi = config.resolve(args.phi, "phi")?.unwrap_or(0.0);
        let omega = config.resolve(args.omega, "omega")?.unwrap_or(DEFAULT_PDC_OMEGA);
        let n_max = config.resolve(args.n_max, "n-max")?.unwrap_or(DEFAULT_PDC_N_MAX);
        let (s11, s21) = match (r, s11, s21) {
            (Some(r), None, None) => {
                check_r(r, Statistics::Bosonic)?;
                (r.cosh(), r.sinh())
            }
            (None, Some(a), Some(b)) => (a, b),
            (Some(_), _, _) => return Err(CliError::Usage("give either --r or --s11/--s21, not both".into())),
            _ => return Err(CliError::Usage("pdc needs --s11 and --s21, or --r".into())),
        };
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(CliError::Usage(format!("omega = {omega} must be > 0")));
        }
        if !phi.is_finite() {
            return Err(CliError::Usage(format!("phi = {phi} must be finite")));
        }
        let matrix = SqueezeMatrix::from_s11_s21(s11, s21, phi);
        if !(s21.abs() < s11.abs()) {
            return Err(CliError::Usage(format!(
                "non-normalizable squeeze matrix: |s21| = {} >= |s11| = {}",
                s21.abs(),
                s11.abs()
            )));
        }
        let residuals = validate_bogoliubov(&matrix);
        if residuals.iter().any(|&x| !(x < BOGOLIUBOV_TOLERANCE)) {
            return Err(CliError::Usage(format!(
                "Bogoliubov constraints violated: residuals |s11|^2-|s12|^2-1 = {:.3e}, |s22|^2-|s21|^2-1 = {:.3e}, \
                 |s11 s21* - s12 s22*| = {:.3e} (tolerance {BOGOLIUBOV_TOLERANCE:e})",
                residuals[0], residuals[1], residuals[2]
            )));
        }
        Ok(Self { matrix, phi, omega, n_max, output: Output::resolve(&args.output, config, Format::Csv)? })
    }
}

/// Vacuum, idler state and temperature of the down-conversion analogue.
pub fn cmd_pdc(spec: &PdcSpec) -> Result<CommandOutput> {
    let s = &spec.matrix;
    let n_max = spec.n_max;
    let vacuum = pdc_vacuum(s, n_max)?;
    let thermal = reduced_thermal_pdc(s, n_max)?;
    let check_thermal = thermal.max_abs_diff(&vacuum.reduced_density(&[IDLER])?)?;

    // the same amplitudes from the Rindler vacuum at tanh r = |s21 / s11|
    let ratio = s.pair_ratio();
    let r_eq = ratio.atanh();
    let rindler = bosonic_vacuum(r_eq, &ModePair::named("R", Statistics::Bosonic), n_max)?;
    let check_rindler =
        (0..=n_max).map(|n| (vacuum.amplitude(&[n, n]).norm() - rindler.amplitude(&[n, n]).norm()).abs()).fold(0.0, f64::max);

    let t_u = unruh_temperature_from_matrix(s, spec.omega)?;
    let a_eff = effective_acceleration(s, spec.omega, C_LIGHT)?;
    let check_temperature = if a_eff > 0.0 && a_eff.is_finite() {
        let t = unruh_temperature(&AccelerationParams::new(a_eff, spec.omega)?, Units::Si);
        (t / t_u - 1.0).abs()
    } else {
        0.0
    };
    let big_omega = (s.s11.norm() / s.s21.norm()).ln() / PI;

    let params = vec![
        ("s11".to_string(), format_complex(s.s11)),
        ("s21".to_string(), format_complex(s.s21)),
        ("phi".to_string(), format_f64(spec.phi)),
        ("omega".to_string(), format_f64(spec.omega)),
        ("n_max".to_string(), n_max.to_string()),
    ];
    let columns = vec![
        Column::new("n", "pairs in |n>_S |n>_I"),
        Column::new("vacuum_re", "real part of the vacuum amplitude"),
        Column::new("vacuum_im", "imaginary part of the vacuum amplitude"),
        Column::new("vacuum_abs", "modulus of the vacuum amplitude"),
        Column::new("idler_probability", "idler reduced-state diagonal"),
    ];
    let mut report = RunReport::new("pdc", params, columns);
    for n in 0..=n_max {
        let a = vacuum.amplitude(&[n, n]);
        report.push_row(vec![
            Cell::from(n),
            Cell::Num(a.re),
            Cell::Num(a.im),
            Cell::Num(a.norm()),
            Cell::Num(thermal.element(&[n], &[n]).re),
        ]);
    }
    let residuals = validate_bogoliubov(s);
    for (key, z) in [("s11", s.s11), ("s12", s.s12), ("s21", s.s21), ("s22", s.s22)] {
        report.push_summary(key, Cell::Text(format_complex(z)));
    }
    report.push_summary("residual_signal", residuals[0]);
    report.push_summary("residual_idler", residuals[1]);
    report.push_summary("residual_cross", residuals[2]);
    report.push_summary("pair_ratio", ratio);
    report.push_summary("equivalent_r", r_eq);
    report.push_summary("omega_dimensionless", big_omega);
    report.push_summary("unruh_temperature_k", t_u);
    report.push_summary("effective_acceleration", a_eff);
    report.push_summary("photon_number_difference", photon_number_difference(&vacuum)?);
    report.push_summary("truncation_deficit", vacuum.truncation_deficit());
    report.push_summary("check_thermal", check_thermal);
    report.push_summary("check_rindler", check_rindler);
    report.push_summary("check_temperature", check_temperature);
    report.push_summary("tolerance", TOL_PDC);
    let worst = check_thermal.max(check_rindler).max(check_temperature);
    let failure = (!(worst <= TOL_PDC)).then(|| format!("down-conversion checks differ by {worst:e} (tolerance {TOL_PDC:e})"));
    Ok(finish(report, failure))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvertSpec {
    pub a: f64,
    pub omega: f64,
    pub output: Output,
}

impl ConvertSpec {
    pub fn resolve(args: &ConvertArgs, config: &Config) -> Result<Self> {
        let a = config.resolve(args.a, "a")?.ok_or_else(|| CliError::Usage("convert needs --a".into()))?;
        let omega = config.resolve(args.omega, "omega")?.ok_or_else(|| CliError::Usage("convert needs --omega".into()))?;
        Ok(Self { a, omega, output: Output::resolve(&args.output, config, Format::Csv)? })
    }
}

/// Relative error of `Omega` recovered from `r`; `None` when `r` underflowed.
fn round_trip(p: &SqueezeParameter) -> Option<f64> {
    let omega = p.omega_dimensionless?;
    (p.r > 0.0).then(|| (p.dimensionless_frequency() / omega - 1.0).abs())
}

/// Unit conversions for one acceleration and frequency.
pub fn cmd_convert(spec: &ConvertSpec) -> Result<CommandOutput> {
    let params = AccelerationParams::new(spec.a, spec.omega)?;
    let big_omega = params.dimensionless_frequency();
    let rb = squeeze_bosonic(&params)?;
    let rf = squeeze_fermionic(&params)?;
    let t_si = unruh_temperature(&params, Units::Si);
    let t_nat = unruh_temperature(&AccelerationParams::natural(spec.a / C_LIGHT, spec.omega)?, Units::Natural);
    let (trip_b, trip_f) = (round_trip(&rb), round_trip(&rf));

    let columns = vec![Column::new("quantity", "name"), Column::new("value", "value"), Column::new("unit", "unit")];
    let inputs = vec![("a".to_string(), format_f64(spec.a)), ("omega".to_string(), format_f64(spec.omega))];
    let mut report = RunReport::new("convert", inputs, columns);
    let rows: [(&str, Cell, &str); 11] = [
        ("acceleration", Cell::Num(spec.a), "m/s^2"),
        ("omega", Cell::Num(spec.omega), "rad/s"),
        ("a_over_c", Cell::Num(spec.a / C_LIGHT), "1/s"),
        ("omega_dimensionless", Cell::Num(big_omega), "1"),
        ("log10_boltzmann_factor", Cell::Num(-PI * big_omega / LN_10), "log10 of exp(-pi Omega)"),
        ("r_bosonic", Cell::Num(rb.r), "1"),
        ("r_fermionic", Cell::Num(rf.r), "1"),
        ("unruh_temperature_si", Cell::Num(t_si), "K"),
        ("unruh_temperature_natural", Cell::Num(t_nat), "1/s (hbar = c = k_B = 1)"),
        ("omega_round_trip_bosonic", Cell::from(trip_b), "relative error"),
        ("omega_round_trip_fermionic", Cell::from(trip_f), "relative error"),
    ];
    for (name, value, unit) in rows {
        report.push_row(vec![Cell::text(name), value, Cell::text(unit)]);
    }
    let worst = trip_b.unwrap_or(0.0).max(trip_f.unwrap_or(0.0));
    report.push_summary("max_round_trip_error", worst);
    report.push_summary("tolerance", TOL_ROUND_TRIP);
    if trip_b.is_none() {
        report.push_summary("note", "r underflows to 0; Omega cannot be recovered from it");
    }
    let failure = (!(worst <= TOL_ROUND_TRIP))
        .then(|| format!("Omega round trip through r is off by {worst:e} (tolerance {TOL_ROUND_TRIP:e})"));
    Ok(finish(report, failure))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_skips_underflow() {
        let p = AccelerationParams::new(9.81, 3e15).unwrap();
        assert_eq!(round_trip(&squeeze_bosonic(&p).unwrap()), None);
        let p = AccelerationParams::natural(1.0, 0.3).unwrap();
        assert!(round_trip(&squeeze_bosonic(&p).unwrap()).unwrap() < 1e-12);
    }
}
