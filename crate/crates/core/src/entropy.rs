//! Receiver entropy before and after learning the measurement outcome.
//!
//! Before the classical message arrives the receiver holds the outcome
//! average of the four conditional states; afterwards it holds one of them.
//! The information gain is the entropy drop between the two, in bits.
//!
//! Bosonic spectra are known in closed form, sector by sector, with
//! `c_n = xi^(n - 1) / cosh^6 r`:
//!
//! * pre-measurement: `n c_n / 2`, repeated `n + 1` times in sector `n`
//! * post-measurement: `m c_n` for `m = 0..=n`
//! * inertial vacuum on two pairs: `xi^n / cosh^4 r`, repeated `n + 1` times
//!
//! so entropies over thousands of sectors cost `O(n_max)`. Numeric
//! diagonalization of the assembled operators is available for moderate
//! caps as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{entropy_bits, von_neumann_entropy, DensityOperator, Statistics};
use crate::relativity::check_r;
use crate::teleport::{
    bosonic_receiver_tail, conditional_amplitudes, fermionic_weights, rob_state, BellOutcome, LogicalQubit,
};
use crate::vacuum::bosonic_ratios;

/// Outcome-averaged receiver state.
pub fn pre_measurement_state(statistics: Statistics, r: f64, psi: &LogicalQubit, n_max: u32) -> Result<DensityOperator> {
    let mut acc: Option<DensityOperator> = None;
    for outcome in BellOutcome::all() {
        let rho = rob_state(statistics, &conditional_amplitudes(psi, outcome), r, n_max)?.scale(0.25);
        acc = Some(match acc {
            None => rho,
            Some(a) => a.add(&rho)?,
        });
    }
    Ok(acc.expect("four outcomes"))
}

/// Receiver state for `(|0_L> + |1_L>) / sqrt 2` after outcome `00`.
/// Every outcome gives the same spectrum.
pub fn post_measurement_state(statistics: Statistics, r: f64, n_max: u32) -> Result<DensityOperator> {
    let amps = conditional_amplitudes(&LogicalQubit::plus(), BellOutcome { i: 0, j: 0 });
    rob_state(statistics, &amps, r, n_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Pre,
    Post,
    Vacuum,
}

/// Closed-form eigenvalues, enumerated sector by sector `(n, m)` with
/// `m = 0..=n`, `n = 0..=n_max` (bosonic) or over the four-state space
/// (fermionic, `n_max` ignored). Sums to one minus the tail.
pub fn spectrum_closed_form(kind: SpectrumKind, statistics: Statistics, r: f64, n_max: u32) -> Result<Vec<f64>> {
    check_r(r, statistics)?;
    if statistics == Statistics::Fermionic {
        let (c2, s2) = fermionic_weights(r);
        return Ok(match kind {
            SpectrumKind::Pre => vec![0.0, c2 / 2.0, c2 / 2.0, s2],
            SpectrumKind::Post => vec![0.0, 0.0, c2, s2],
            SpectrumKind::Vacuum => vec![c2 * c2, c2 * s2, s2 * c2, s2 * s2],
        });
    }
    let (xi, sech2) = bosonic_ratios(r);
    let mut out = Vec::with_capacity(((n_max as usize + 1) * (n_max as usize + 2)) / 2);
    for n in 0..=n_max {
        for m in 0..=n {
            let v = match kind {
                SpectrumKind::Pre | SpectrumKind::Post if n == 0 => 0.0,
                SpectrumKind::Pre => n as f64 / 2.0 * sector_scale(xi, sech2, n),
                SpectrumKind::Post => m as f64 * sector_scale(xi, sech2, n),
                SpectrumKind::Vacuum => sech2 * sech2 * xi.powi(n as i32),
            };
            out.push(v);
        }
    }
    Ok(out)
}

/// `xi^(n - 1) / cosh^6 r` for `n >= 1`.
fn sector_scale(xi: f64, sech2: f64, n: u32) -> f64 {
    xi.powi(n as i32 - 1) * sech2.powi(3)
}

/// `S(pre) - S(post)` from numeric diagonalization of the assembled
/// operators. Cost grows quickly with `n_max`; see [`info_gain_spectral`]
/// for large caps.
pub fn info_gain(statistics: Statistics, r: f64, n_max: u32) -> Result<f64> {
    let pre = pre_measurement_state(statistics, r, &LogicalQubit::plus(), n_max)?;
    let post = post_measurement_state(statistics, r, n_max)?;
    Ok(von_neumann_entropy(&pre)? - von_neumann_entropy(&post)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoGain {
    pub s_pre: f64,
    pub s_post: f64,
    pub delta: f64,
    pub n_max: u32,
    /// Receiver weight above `n_max`, dropped from both spectra.
    pub tail: f64,
}

/// Smallest bosonic cap whose receiver tail is below `tolerance`.
pub fn adaptive_n_max(r: f64, tolerance: f64) -> Result<u32> {
    check_r(r, Statistics::Bosonic)?;
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(Error::InvalidParameter(format!("tail tolerance {tolerance} must lie in (0, 1)")));
    }
    if bosonic_ratios(r).0 >= 1.0 {
        return Err(Error::InvalidParameter(format!("r = {r} saturates tanh; no finite truncation exists")));
    }
    let mut hi = 1u32;
    while bosonic_receiver_tail(r, hi) >= tolerance {
        hi = hi.checked_mul(2).ok_or_else(|| Error::InvalidParameter(format!("r = {r} needs too many sectors")))?;
    }
    let mut lo = hi / 2;
    // tail(lo) >= tolerance, tail(hi) < tolerance
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bosonic_receiver_tail(r, mid) < tolerance {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Entropy gain from the closed-form spectra in `O(n_max)`.
pub fn info_gain_spectral(statistics: Statistics, r: f64, n_max: u32) -> Result<InfoGain> {
    check_r(r, statistics)?;
    if statistics == Statistics::Fermionic {
        let s_pre = entropy_bits(spectrum_closed_form(SpectrumKind::Pre, statistics, r, 1)?);
        let s_post = entropy_bits(spectrum_closed_form(SpectrumKind::Post, statistics, r, 1)?);
        return Ok(InfoGain { s_pre, s_post, delta: s_pre - s_post, n_max: 1, tail: 0.0 });
    }
    let (xi, sech2) = bosonic_ratios(r);
    let ln_xi = xi.ln();
    let ln_s6 = 3.0 * sech2.ln();
    let mut sum_m_ln_m = 0.0; // sum_{m <= n} m ln m
    let (mut s_pre, mut s_post) = (0.0, 0.0);
    for n in 1..=n_max {
        let nf = n as f64;
        sum_m_ln_m += nf * nf.ln();
        let ln_c = ln_s6 + if n == 1 { 0.0 } else { (nf - 1.0) * ln_xi };
        let c = ln_c.exp();
        if c == 0.0 {
            break;
        }
        // pre: n + 1 copies of n c / 2
        let p = nf / 2.0 * c;
        s_pre -= (nf + 1.0) * p * ((nf / 2.0).ln() + ln_c);
        // post: sum_m m c ln(m c)
        s_post -= c * (sum_m_ln_m + nf * (nf + 1.0) / 2.0 * ln_c);
    }
    let (s_pre, s_post) = (s_pre / std::f64::consts::LN_2, s_post / std::f64::consts::LN_2);
    Ok(InfoGain { s_pre, s_post, delta: s_pre - s_post, n_max, tail: bosonic_receiver_tail(r, n_max) })
}

/// [`info_gain_spectral`] with the cap chosen so the tail is below
/// `tolerance`.
pub fn info_gain_adaptive(statistics: Statistics, r: f64, tolerance: f64) -> Result<InfoGain> {
    match statistics {
        Statistics::Fermionic => info_gain_spectral(statistics, r, 1),
        Statistics::Bosonic => info_gain_spectral(statistics, r, adaptive_n_max(r, tolerance)?),
    }
}

/// Entropy gain keeping only the one- and two-excitation sectors,
/// renormalized: pre `(1/2, 1/2, xi, xi, xi)`, post `(0, 1, 0, xi, 2 xi)`,
/// both over `1 + 3 xi`.
pub fn five_state_model(r: f64) -> Result<f64> {
    check_r(r, Statistics::Bosonic)?;
    let xi = bosonic_ratios(r).0;
    let z = 1.0 + 3.0 * xi;
    let pre = [0.5, 0.5, xi, xi, xi].map(|p| p / z);
    let post = [0.0, 1.0, 0.0, xi, 2.0 * xi].map(|p| p / z);
    Ok(entropy_bits(pre) - entropy_bits(post))
}

/// The same model assembled from the operators: restrict pre and post to the
/// five kets of sectors one and two, renormalize, diagonalize.
pub fn five_state_model_numeric(r: f64) -> Result<f64> {
    let basis = crate::teleport::sector_basis(Statistics::Bosonic, 2)
        .into_iter()
        .filter(|k| k.total() >= 1)
        .collect::<Vec<_>>();
    let entropy = |rho: DensityOperator| -> Result<f64> {
        let rho = rho.restrict_to(basis.clone())?;
        let t = rho.trace();
        von_neumann_entropy(&rho.scale(1.0 / t))
    };
    let pre = pre_measurement_state(Statistics::Bosonic, r, &LogicalQubit::plus(), 2)?;
    let post = post_measurement_state(Statistics::Bosonic, r, 2)?;
    Ok(entropy(pre)? - entropy(post)?)
}

/// Large-`r` limit of the bosonic gain, `1 - 1 / (2 ln 2)` bits.
pub fn bosonic_gain_limit() -> f64 {
    1.0 - 1.0 / (2.0 * std::f64::consts::LN_2)
}
