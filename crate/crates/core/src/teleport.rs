//! Dual-rail teleportation from an inertial sender to an accelerated
//! receiver.
//!
//! A logical qubit lives in one excitation shared by two cavity modes:
//! `|0_L> = |1,0>`, `|1_L> = |0,1>`. The sender's Bell measurement is
//! simulated at the logical level (CNOT, Hadamard, computational-basis
//! projection) on top of the Fock-space resource. The receiver's two cavity
//! modes are each expanded over a (region I, region II) wedge pair; tracing
//! region II yields a block-tridiagonal density operator on region I whose
//! blocks are the total-excitation sectors.
//!
//! Receiver-side operators are indexed by the region-I modes `R1_I, R2_I`
//! and their basis is ordered by total excitation, then lexicographically.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{fidelity_pure, DensityOperator, FockBasisState, ModeLabel, StateVector, Statistics};
use crate::relativity::check_r;
use crate::vacuum::{bosonic_ratios, one_particle, vacuum, ModePair};

const NORM_TOLERANCE: f64 = 1e-12;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `alpha |0_L> + beta |1_L>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogicalQubit {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl LogicalQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!("|alpha|^2 + |beta|^2 = {norm}, expected 1")));
        }
        Ok(Self { alpha, beta })
    }

    /// Rescales arbitrary nonzero amplitudes to a valid qubit.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Self::new(alpha / n, beta / n)
    }

    pub fn zero() -> Self {
        Self { alpha: real(1.0), beta: real(0.0) }
    }

    pub fn one() -> Self {
        Self { alpha: real(0.0), beta: real(1.0) }
    }

    /// `(|0_L> + |1_L>) / sqrt 2`.
    pub fn plus() -> Self {
        Self { alpha: real(FRAC_1_SQRT_2), beta: real(FRAC_1_SQRT_2) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BellOutcome {
    pub i: u8,
    pub j: u8,
}

impl BellOutcome {
    pub fn new(i: u8, j: u8) -> Result<Self> {
        if i > 1 || j > 1 {
            return Err(Error::InvalidParameter(format!("outcome bits must be 0 or 1, got ({i}, {j})")));
        }
        Ok(Self { i, j })
    }

    pub fn all() -> [BellOutcome; 4] {
        [
            BellOutcome { i: 0, j: 0 },
            BellOutcome { i: 0, j: 1 },
            BellOutcome { i: 1, j: 0 },
            BellOutcome { i: 1, j: 1 },
        ]
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

impl FromStr for BellOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<u8> = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidParameter(format!("bad outcome `{s}`"))),
            })
            .collect::<Result<_>>()?;
        match bits[..] {
            [i, j] => BellOutcome::new(i, j),
            _ => Err(Error::InvalidParameter(format!("outcome `{s}` must have two bits"))),
        }
    }
}

/// Receiver amplitudes `x |0_L> + y |1_L>` after outcome `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalAmplitudes {
    pub x: Complex64,
    pub y: Complex64,
}

impl ConditionalAmplitudes {
    pub fn new(x: Complex64, y: Complex64) -> Result<Self> {
        let norm = x.norm_sqr() + y.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!("|x|^2 + |y|^2 = {norm}, expected 1")));
        }
        Ok(Self { x, y })
    }
}

/// Outcome table: `00 -> (a, b)`, `01 -> (b, a)`, `10 -> (a, -b)`,
/// `11 -> (-b, a)`.
pub fn conditional_amplitudes(psi: &LogicalQubit, outcome: BellOutcome) -> ConditionalAmplitudes {
    let (a, b) = (psi.alpha, psi.beta);
    let (x, y) = match (outcome.i, outcome.j) {
        (0, 0) => (a, b),
        (0, 1) => (b, a),
        (1, 0) => (a, -b),
        _ => (-b, a),
    };
    ConditionalAmplitudes { x, y }
}

/// Two modes carrying one logical qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRailEncoding {
    pub mode_1: ModeLabel,
    pub mode_2: ModeLabel,
}

impl DualRailEncoding {
    pub fn new(mode_1: ModeLabel, mode_2: ModeLabel) -> Result<Self> {
        if mode_1.name == mode_2.name {
            return Err(Error::DuplicateMode(mode_1.name));
        }
        if mode_1.statistics != mode_2.statistics {
            return Err(Error::MixedStatistics(mode_2.name));
        }
        Ok(Self { mode_1, mode_2 })
    }

    /// Modes `{prefix}1`, `{prefix}2`.
    pub fn named(prefix: &str, statistics: Statistics) -> Self {
        Self {
            mode_1: ModeLabel::new(format!("{prefix}1"), statistics),
            mode_2: ModeLabel::new(format!("{prefix}2"), statistics),
        }
    }

    pub fn statistics(&self) -> Statistics {
        self.mode_1.statistics
    }

    pub fn modes(&self) -> Vec<ModeLabel> {
        vec![self.mode_1.clone(), self.mode_2.clone()]
    }

    pub fn encode(&self, psi: &LogicalQubit) -> Result<StateVector> {
        StateVector::from_amplitudes(self.modes(), 1, [(vec![1, 0], psi.alpha), (vec![0, 1], psi.beta)])
    }

    pub fn logical(&self, bit: u8) -> Result<StateVector> {
        let occ = if bit == 0 { [1, 0] } else { [0, 1] };
        StateVector::basis_ket(self.modes(), 1, &occ)
    }

    /// Logical bit of an occupation pair, `None` outside the code space.
    pub fn decode(occupations: [u32; 2]) -> Option<u8> {
        match occupations {
            [1, 0] => Some(0),
            [0, 1] => Some(1),
            _ => None,
        }
    }
}

/// `(|0_L>|0_L> + |1_L>|1_L>) / sqrt 2` over the four physical modes
/// `(A1, A2, R1, R2)`.
pub fn bell_resource(alice: &DualRailEncoding, rob: &DualRailEncoding) -> Result<StateVector> {
    let zero = alice.logical(0)?.tensor(&rob.logical(0)?)?;
    let one = alice.logical(1)?.tensor(&rob.logical(1)?)?;
    Ok(zero.add(&one)?.scale(real(FRAC_1_SQRT_2)))
}

/// Result of the sender's measurement on a joint state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// State of every mode not measured, rescaled by `1 / sqrt(probability)`
    /// so it keeps the squared norm of the (possibly truncated) input.
    pub remainder: StateVector,
}

/// Amplitude `<c, a| CNOT H_c |i, j>`: the logical two-qubit state that a
/// Hadamard-after-CNOT circuit maps onto the computational outcome `(i, j)`.
fn bell_projector(outcome: BellOutcome, client_bit: u8, alice_bit: u8) -> f64 {
    let sign = if outcome.i == 1 { -1.0 } else { 1.0 };
    match (client_bit, alice_bit) {
        (0, a) if a == outcome.j => FRAC_1_SQRT_2,
        (1, a) if a == 1 - outcome.j => sign * FRAC_1_SQRT_2,
        _ => 0.0,
    }
}

/// Applies CNOT (client controls Alice's qubit), a Hadamard on the client,
/// and projects both logical qubits onto `outcome`. Components outside the
/// dual-rail code space of either measured qubit are annihilated.
pub fn bell_measurement(
    state: &StateVector,
    client: &DualRailEncoding,
    alice: &DualRailEncoding,
    outcome: BellOutcome,
) -> Result<MeasurementBranch> {
    let names = state.mode_names();
    let pos = |m: &ModeLabel| {
        names
            .iter()
            .position(|n| *n == m.name)
            .ok_or_else(|| Error::UnknownMode(m.name.clone()))
    };
    let measured = [pos(&client.mode_1)?, pos(&client.mode_2)?, pos(&alice.mode_1)?, pos(&alice.mode_2)?];
    let rest: Vec<usize> = (0..names.len()).filter(|p| !measured.contains(p)).collect();
    if rest.is_empty() {
        return Err(Error::InvalidParameter("nothing left after the measurement".into()));
    }
    let rest_modes: Vec<ModeLabel> = rest.iter().map(|&p| state.modes()[p].clone()).collect();

    let mut terms: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    for (k, amp) in state.iter() {
        let o = k.occupations();
        let (Some(c), Some(a)) = (
            DualRailEncoding::decode([o[measured[0]], o[measured[1]]]),
            DualRailEncoding::decode([o[measured[2]], o[measured[3]]]),
        ) else {
            continue;
        };
        let w = bell_projector(outcome, c, a);
        if w != 0.0 {
            *terms.entry(k.project(&rest).0).or_default() += amp * w;
        }
    }
    let projected = StateVector::from_amplitudes(rest_modes, state.n_max(), terms)?;
    let total = state.norm_sqr();
    if projected.norm_sqr() == 0.0 || total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let probability = projected.norm_sqr() / total;
    let deficit = state.truncation_deficit();
    let remainder = projected
        .scale(real(1.0 / probability.sqrt()))
        .with_truncation_deficit(deficit);
    Ok(MeasurementBranch { outcome, probability, remainder })
}

/// Runs the logical protocol on inertial cavity modes for all four outcomes:
/// returns each outcome's probability and the receiver's decoded amplitudes.
pub fn logical_measurement_table(psi: &LogicalQubit, statistics: Statistics) -> Result<Vec<(BellOutcome, f64, ConditionalAmplitudes)>> {
    let client = DualRailEncoding::named("C", statistics);
    let alice = DualRailEncoding::named("A", statistics);
    let rob = DualRailEncoding::named("R", statistics);
    let joint = client.encode(psi)?.tensor(&bell_resource(&alice, &rob)?)?;
    BellOutcome::all()
        .into_iter()
        .map(|outcome| {
            let branch = bell_measurement(&joint, &client, &alice, outcome)?;
            let x = branch.remainder.amplitude(&[1, 0]);
            let y = branch.remainder.amplitude(&[0, 1]);
            Ok((outcome, branch.probability, ConditionalAmplitudes { x, y }))
        })
        .collect()
}

/// Wedge pairs for the receiver's two cavity modes.
pub fn receiver_pairs(statistics: Statistics) -> (ModePair, ModePair) {
    (ModePair::named("R1", statistics), ModePair::named("R2", statistics))
}

/// `[R1_I, R2_I]`.
pub fn region_i_modes(statistics: Statistics) -> Vec<ModeLabel> {
    let (p1, p2) = receiver_pairs(statistics);
    vec![p1.region_i, p2.region_i]
}

pub const REGION_I: [&str; 2] = ["R1_I", "R2_I"];

/// Region-I two-mode basis ordered by total excitation, then
/// lexicographically; bosonic sectors run up to `n_max`.
pub fn sector_basis(statistics: Statistics, n_max: u32) -> Vec<FockBasisState> {
    let top = match statistics {
        Statistics::Bosonic => n_max,
        Statistics::Fermionic => 2,
    };
    let cap = statistics.cap(n_max);
    let mut out = Vec::new();
    for n in 0..=top {
        for m in 0..=n {
            if m <= cap && n - m <= cap {
                out.push(FockBasisState::new([m, n - m]));
            }
        }
    }
    out
}

/// Weight of total-excitation sector `n` in the bosonic receiver state,
/// `n (n + 1) / 2 * xi^(n - 1) / cosh^6 r`.
pub fn bosonic_sector_weight(n: u32, r: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (xi, sech2) = bosonic_ratios(r);
    (n as f64) * (n as f64 + 1.0) / 2.0 * xi.powi(n as i32 - 1) * sech2.powi(3)
}

/// Weight of the bosonic receiver state above sector `n_max`.
pub fn bosonic_receiver_tail(r: f64, n_max: u32) -> f64 {
    let (xi, sech2) = bosonic_ratios(r);
    let s6 = sech2.powi(3);
    let mut n = n_max as f64 + 1.0;
    let mut term = n * (n + 1.0) / 2.0 * xi.powi(n_max as i32) * s6;
    let mut tail = 0.0;
    while term > tail * 1e-17 && term > 0.0 {
        tail += term;
        term *= xi * (n + 2.0) / n;
        n += 1.0;
    }
    tail
}

/// `cos^2 r` and `sin^2 r`. The half-angle form lands exactly on `1/2` at
/// `r = pi/4`, and the pair sums to one exactly.
pub(crate) fn fermionic_weights(r: f64) -> (f64, f64) {
    let c2 = 0.5 * (1.0 + (2.0 * r).cos());
    (c2, 1.0 - c2)
}

/// Closed-form bosonic receiver state over sectors `n <= n_max`:
/// diagonal `w_n [m |x|^2 + (n - m) |y|^2]` on `|m, n - m>`, coherence
/// `w_n x y* sqrt(m (n - m + 1))` between `|m, n - m>` and
/// `|m - 1, n - m + 1>`, with `w_n = xi^(n - 1) / cosh^6 r`.
pub fn rob_state_bosonic_closed(amps: &ConditionalAmplitudes, r: f64, n_max: u32) -> Result<DensityOperator> {
    check_r(r, Statistics::Bosonic)?;
    let basis = sector_basis(Statistics::Bosonic, n_max);
    let index: std::collections::HashMap<FockBasisState, usize> =
        basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    let (xi, sech2) = bosonic_ratios(r);
    let s6 = sech2.powi(3);
    let (x2, y2) = (amps.x.norm_sqr(), amps.y.norm_sqr());
    let xy = amps.x * amps.y.conj();

    let mut entries = BTreeMap::new();
    for n in 1..=n_max {
        let w = xi.powi(n as i32 - 1) * s6;
        for m in 0..=n {
            let i = index[&FockBasisState::new([m, n - m])];
            let diag = w * (m as f64 * x2 + (n - m) as f64 * y2);
            entries.insert((i, i), real(diag));
            if m >= 1 {
                let j = index[&FockBasisState::new([m - 1, n - m + 1])];
                let v = xy * (w * ((m * (n - m + 1)) as f64).sqrt());
                entries.insert((i, j), v);
                entries.insert((j, i), v.conj());
            }
        }
    }
    DensityOperator::from_entries(
        region_i_modes(Statistics::Bosonic),
        n_max,
        basis,
        entries,
        bosonic_receiver_tail(r, n_max),
    )
}

/// Receiver's four-mode wedge state `x |1_M 0_M> + y |0_M 1_M>`.
fn receiver_wedge_state(statistics: Statistics, amps: &ConditionalAmplitudes, r: f64, n_max: u32) -> Result<StateVector> {
    let (p1, p2) = receiver_pairs(statistics);
    let zero = one_particle(statistics, r, &p1, n_max)?.tensor(&vacuum(statistics, r, &p2, n_max)?)?;
    let one = vacuum(statistics, r, &p1, n_max)?.tensor(&one_particle(statistics, r, &p2, n_max)?)?;
    zero.scale(amps.x).add(&one.scale(amps.y))
}

fn restrict_to_sectors(rho: DensityOperator, statistics: Statistics, n_max: u32) -> Result<DensityOperator> {
    let restricted = rho.restrict_to(sector_basis(statistics, n_max))?;
    let deficit = (1.0 - restricted.trace()).max(0.0);
    Ok(restricted.with_truncation_deficit(deficit))
}

/// Brute-force receiver state: expand both receiver modes over wedge pairs,
/// form the pure four-mode state and trace out region II.
pub fn rob_state_bosonic_bruteforce(amps: &ConditionalAmplitudes, r: f64, n_max: u32) -> Result<DensityOperator> {
    check_r(r, Statistics::Bosonic)?;
    let rho = receiver_wedge_state(Statistics::Bosonic, amps, r, n_max)?.reduced_density(&REGION_I)?;
    restrict_to_sectors(rho, Statistics::Bosonic, n_max)
}

/// `cos^2 r |phi><phi| + sin^2 r |1,1><1,1|`.
pub fn rob_state_fermionic(amps: &ConditionalAmplitudes, r: f64) -> Result<DensityOperator> {
    check_r(r, Statistics::Fermionic)?;
    let basis = sector_basis(Statistics::Fermionic, 1);
    let (c2, s2) = fermionic_weights(r);
    let phi = [(2usize, amps.x), (1usize, amps.y)]; // |1,0> and |0,1>
    let mut entries = BTreeMap::new();
    for &(i, a) in &phi {
        for &(j, b) in &phi {
            entries.insert((i, j), a * b.conj() * c2);
        }
    }
    entries.insert((3, 3), real(s2));
    DensityOperator::from_entries(region_i_modes(Statistics::Fermionic), 1, basis, entries, 0.0)
}

pub fn rob_state_fermionic_bruteforce(amps: &ConditionalAmplitudes, r: f64) -> Result<DensityOperator> {
    check_r(r, Statistics::Fermionic)?;
    let rho = receiver_wedge_state(Statistics::Fermionic, amps, r, 1)?.reduced_density(&REGION_I)?;
    Ok(rho.restrict_to(sector_basis(Statistics::Fermionic, 1))?.with_truncation_deficit(0.0))
}

/// Closed-form receiver state for either statistics (`n_max` ignored for
/// fermions).
pub fn rob_state(statistics: Statistics, amps: &ConditionalAmplitudes, r: f64, n_max: u32) -> Result<DensityOperator> {
    match statistics {
        Statistics::Bosonic => rob_state_bosonic_closed(amps, r, n_max),
        Statistics::Fermionic => rob_state_fermionic(amps, r),
    }
}

/// The whole protocol in Fock space, without the outcome table: client
/// qubit times the Bell resource (receiver modes written over wedge pairs),
/// measured by the sender, then region II traced out. Returns the outcome
/// probability and the receiver's region-I state.
pub fn rob_state_from_protocol(
    statistics: Statistics,
    psi: &LogicalQubit,
    outcome: BellOutcome,
    r: f64,
    n_max: u32,
) -> Result<(f64, DensityOperator)> {
    check_r(r, statistics)?;
    let client = DualRailEncoding::named("C", statistics);
    let alice = DualRailEncoding::named("A", statistics);
    let logical = [
        ConditionalAmplitudes { x: real(1.0), y: real(0.0) },
        ConditionalAmplitudes { x: real(0.0), y: real(1.0) },
    ];
    let mut resource: Option<StateVector> = None;
    for (bit, amps) in logical.iter().enumerate() {
        let term = alice
            .logical(bit as u8)?
            .tensor(&receiver_wedge_state(statistics, amps, r, n_max)?)?
            .scale(real(FRAC_1_SQRT_2));
        resource = Some(match resource {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
    }
    let joint = client.encode(psi)?.tensor(&resource.expect("two terms"))?;
    let branch = bell_measurement(&joint, &client, &alice, outcome)?;
    let rho = branch.remainder.reduced_density(&REGION_I)?;
    let n_cap = if statistics == Statistics::Fermionic { 1 } else { n_max };
    Ok((branch.probability, restrict_to_sectors(rho, statistics, n_cap)?))
}

/// `Z^i X^j` on span{|1,0>, |0,1>}, identity elsewhere.
pub fn apply_correction(rho: &DensityOperator, outcome: BellOutcome) -> Result<DensityOperator> {
    if rho.modes().len() != 2 {
        return Err(Error::InvalidParameter("correction acts on a two-mode receiver state".into()));
    }
    let (o, l) = (real(0.0), real(1.0));
    let x = DMatrix::from_row_slice(2, 2, &[o, l, l, o]);
    let z = DMatrix::from_row_slice(2, 2, &[l, o, o, -l]);
    let mut u = DMatrix::identity(2, 2);
    if outcome.j == 1 {
        u = x * u;
    }
    if outcome.i == 1 {
        u = z * u;
    }
    let kets = [FockBasisState::new([1, 0]), FockBasisState::new([0, 1])];
    rho.transform_subspace(&kets, &u)
}

/// `alpha |1,0> + beta |0,1>` on the region-I modes.
pub fn target_state(psi: &LogicalQubit, statistics: Statistics, n_max: u32) -> Result<StateVector> {
    StateVector::from_amplitudes(
        region_i_modes(statistics),
        statistics.cap(n_max).max(1),
        [(vec![1, 0], psi.alpha), (vec![0, 1], psi.beta)],
    )
}

/// `1 / cosh^6 r` for bosons, `cos^2 r` for fermions.
pub fn fidelity_closed_form(statistics: Statistics, r: f64) -> f64 {
    match statistics {
        Statistics::Bosonic => bosonic_ratios(r).1.powi(3),
        Statistics::Fermionic => fermionic_weights(r).0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    /// Fidelity against the truncated state renormalized to unit trace.
    pub truncated: f64,
    /// `truncated` scaled back by the analytic weight retained below the cap.
    pub corrected: f64,
    /// Analytic weight above the cap.
    pub tail: f64,
}

pub fn fidelity_for_outcome(
    statistics: Statistics,
    r: f64,
    psi: &LogicalQubit,
    outcome: BellOutcome,
    n_max: u32,
) -> Result<FidelityReport> {
    let amps = conditional_amplitudes(psi, outcome);
    let rho = apply_correction(&rob_state(statistics, &amps, r, n_max)?, outcome)?;
    let target = target_state(psi, statistics, n_max)?;
    let truncated = fidelity_pure(&target, &rho)? / rho.trace();
    let tail = rho.truncation_deficit();
    Ok(FidelityReport { truncated, corrected: truncated * (1.0 - tail), tail })
}

/// Fidelity from the full Fock-space protocol ([`rob_state_from_protocol`])
/// instead of the closed-form receiver state.
pub fn protocol_fidelity(
    statistics: Statistics,
    r: f64,
    psi: &LogicalQubit,
    outcome: BellOutcome,
    n_max: u32,
) -> Result<FidelityReport> {
    let (_, rho) = rob_state_from_protocol(statistics, psi, outcome, r, n_max)?;
    let rho = apply_correction(&rho, outcome)?;
    let target = target_state(psi, statistics, n_max)?;
    let truncated = fidelity_pure(&target, &rho)? / rho.trace();
    let tail = match statistics {
        Statistics::Bosonic => bosonic_receiver_tail(r, n_max),
        Statistics::Fermionic => 0.0,
    };
    Ok(FidelityReport { truncated, corrected: truncated * (1.0 - tail), tail })
}

/// Outcome-averaged fidelity (each outcome occurs with probability 1/4).
pub fn teleport_fidelity(statistics: Statistics, r: f64, psi: &LogicalQubit, n_max: u32) -> Result<FidelityReport> {
    let mut acc = FidelityReport { truncated: 0.0, corrected: 0.0, tail: 0.0 };
    for outcome in BellOutcome::all() {
        let f = fidelity_for_outcome(statistics, r, psi, outcome, n_max)?;
        acc.truncated += 0.25 * f.truncated;
        acc.corrected += 0.25 * f.corrected;
        acc.tail = acc.tail.max(f.tail);
    }
    Ok(acc)
}

/// Trace of each total-excitation block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorWeights {
    pub weights: Vec<(u32, f64)>,
}

impl SectorWeights {
    pub fn weight(&self, n: u32) -> f64 {
        self.weights.iter().find(|(k, _)| *k == n).map_or(0.0, |(_, w)| *w)
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().map(|(_, w)| w).sum()
    }

    /// Probability that a non-absorbing excitation counter finds exactly one
    /// excitation, i.e. no thermal excitation was added.
    pub fn single_excitation_probability(&self) -> f64 {
        self.weight(1) / self.total()
    }

    /// Weights conditioned on the one-excitation check succeeding.
    pub fn postselected(&self) -> SectorWeights {
        let w1 = self.weight(1);
        let weights = self
            .weights
            .iter()
            .map(|&(n, _)| (n, if n == 1 && w1 > 0.0 { 1.0 } else { 0.0 }))
            .collect();
        SectorWeights { weights }
    }
}

/// Sector weights of any operator, grouping basis kets by total occupation.
pub fn sector_weights(rho: &DensityOperator) -> SectorWeights {
    let mut acc: BTreeMap<u32, f64> = BTreeMap::new();
    for (i, k) in rho.basis().iter().enumerate() {
        *acc.entry(k.total()).or_default() += rho.get(i, i).re;
    }
    SectorWeights { weights: acc.into_iter().collect() }
}
