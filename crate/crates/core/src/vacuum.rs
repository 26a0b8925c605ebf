//! The inertial vacuum and one-particle state written over one pair of
//! wedge modes (region I, region II), and what region I alone sees.
//!
//! All amplitudes are real and non-negative; phases that drop out of every
//! downstream quantity are absorbed into the kets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, FockBasisState, ModeLabel, StateVector, Statistics};
use crate::relativity::check_r;

/// A correlated (region I, region II) mode pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePair {
    pub region_i: ModeLabel,
    pub region_ii: ModeLabel,
}

impl ModePair {
    pub fn new(region_i: ModeLabel, region_ii: ModeLabel) -> Result<Self> {
        if region_i.name == region_ii.name {
            return Err(Error::DuplicateMode(region_i.name));
        }
        if region_i.statistics != region_ii.statistics {
            return Err(Error::MixedStatistics(region_ii.name));
        }
        Ok(Self { region_i, region_ii })
    }

    /// Labels `{base}_I` and `{base}_II`.
    pub fn named(base: &str, statistics: Statistics) -> Self {
        Self {
            region_i: ModeLabel::new(format!("{base}_I"), statistics),
            region_ii: ModeLabel::new(format!("{base}_II"), statistics),
        }
    }

    pub fn statistics(&self) -> Statistics {
        self.region_i.statistics
    }

    pub fn modes(&self) -> Vec<ModeLabel> {
        vec![self.region_i.clone(), self.region_ii.clone()]
    }

    fn expect(&self, statistics: Statistics) -> Result<()> {
        if self.statistics() != statistics {
            return Err(Error::InvalidParameter(format!(
                "mode pair is {}, expected {statistics}",
                self.statistics()
            )));
        }
        Ok(())
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `tanh^2 r` and `1 / cosh^2 r`, the latter computed directly so it stays
/// accurate when `tanh r` is close to one.
pub(crate) fn bosonic_ratios(r: f64) -> (f64, f64) {
    let sech2 = r.cosh().powi(-2);
    (r.tanh().powi(2), sech2)
}

/// `sum_n tanh^n r / cosh r |n>_I |n>_II` for `n <= n_max`. Missing weight
/// `xi^(n_max + 1)` is the deficit.
pub fn bosonic_vacuum(r: f64, pair: &ModePair, n_max: u32) -> Result<StateVector> {
    check_r(r, Statistics::Bosonic)?;
    pair.expect(Statistics::Bosonic)?;
    let (t, sech) = (r.tanh(), 1.0 / r.cosh());
    let terms = (0..=n_max).map(|n| (vec![n, n], real(t.powi(n as i32) * sech)));
    let xi = t * t;
    Ok(StateVector::from_amplitudes(pair.modes(), n_max, terms)?
        .with_truncation_deficit(crate::fock::vacuum_tail_bound(xi, n_max)))
}

/// Weight of the one-particle expansion beyond `|n_max, n_max - 1>`.
pub fn one_particle_tail(xi: f64, sech2: f64, n_max: u32) -> f64 {
    // sum_{n >= N} (n + 1) xi^n (1 - xi)^2 = xi^N (N (1 - xi) + 1)
    xi.powi(n_max as i32) * (n_max as f64 * sech2 + 1.0)
}

/// `sum_n tanh^n r sqrt(n + 1) / cosh^2 r |n + 1>_I |n>_II` for
/// `n + 1 <= n_max`.
pub fn bosonic_one_particle(r: f64, pair: &ModePair, n_max: u32) -> Result<StateVector> {
    check_r(r, Statistics::Bosonic)?;
    pair.expect(Statistics::Bosonic)?;
    if n_max == 0 {
        return Err(Error::InvalidParameter("one-particle state needs n_max >= 1".into()));
    }
    let (xi, sech2) = bosonic_ratios(r);
    let t = r.tanh();
    let terms = (0..n_max).map(|n| (vec![n + 1, n], real(t.powi(n as i32) * ((n + 1) as f64).sqrt() * sech2)));
    Ok(StateVector::from_amplitudes(pair.modes(), n_max, terms)?
        .with_truncation_deficit(one_particle_tail(xi, sech2, n_max)))
}

/// `cos r |0,0> + sin r |1,1>`.
pub fn fermionic_vacuum(r: f64, pair: &ModePair) -> Result<StateVector> {
    check_r(r, Statistics::Fermionic)?;
    pair.expect(Statistics::Fermionic)?;
    StateVector::from_amplitudes(
        pair.modes(),
        1,
        [(vec![0, 0], real(r.cos())), (vec![1, 1], real(r.sin()))],
    )
}

/// `|1>_I |0>_II`, independent of `r`.
pub fn fermionic_one_particle(r: f64, pair: &ModePair) -> Result<StateVector> {
    check_r(r, Statistics::Fermionic)?;
    pair.expect(Statistics::Fermionic)?;
    StateVector::basis_ket(pair.modes(), 1, &[1, 0])
}

pub fn vacuum(statistics: Statistics, r: f64, pair: &ModePair, n_max: u32) -> Result<StateVector> {
    match statistics {
        Statistics::Bosonic => bosonic_vacuum(r, pair, n_max),
        Statistics::Fermionic => fermionic_vacuum(r, pair),
    }
}

pub fn one_particle(statistics: Statistics, r: f64, pair: &ModePair, n_max: u32) -> Result<StateVector> {
    match statistics {
        Statistics::Bosonic => bosonic_one_particle(r, pair, n_max),
        Statistics::Fermionic => fermionic_one_particle(r, pair),
    }
}

/// The inertial creation operator expressed in wedge operators:
/// bosons `cosh r b†_I - sinh r b_II`, fermions `cos r c†_I + sin r c_II`.
pub fn minkowski_creation(state: &StateVector, pair: &ModePair, r: f64) -> Result<StateVector> {
    let (i, ii) = (pair.region_i.name.as_str(), pair.region_ii.name.as_str());
    let (u, v) = match pair.statistics() {
        Statistics::Bosonic => (r.cosh(), -r.sinh()),
        Statistics::Fermionic => (r.cos(), r.sin()),
    };
    state
        .apply_creation(i)?
        .scale(real(u))
        .add(&state.apply_annihilation(ii)?.scale(real(v)))
}

/// Region-I thermal state `(1 - xi) xi^n`, `n <= n_max`, on `pair.region_i`.
pub fn thermal_reduction_bosonic(r: f64, pair: &ModePair, n_max: u32) -> Result<DensityOperator> {
    check_r(r, Statistics::Bosonic)?;
    pair.expect(Statistics::Bosonic)?;
    let (xi, sech2) = bosonic_ratios(r);
    let basis = (0..=n_max).map(|n| FockBasisState::new([n])).collect();
    let diag: Vec<f64> = (0..=n_max).map(|n| sech2 * xi.powi(n as i32)).collect();
    DensityOperator::from_diagonal(
        vec![pair.region_i.clone()],
        n_max,
        basis,
        &diag,
        crate::fock::vacuum_tail_bound(xi, n_max),
    )
}

/// `cos^2 r |0><0| + sin^2 r |1><1|` on `pair.region_i`.
pub fn thermal_reduction_fermionic(r: f64, pair: &ModePair) -> Result<DensityOperator> {
    check_r(r, Statistics::Fermionic)?;
    pair.expect(Statistics::Fermionic)?;
    let (c, s) = (r.cos(), r.sin());
    DensityOperator::from_diagonal(
        vec![pair.region_i.clone()],
        1,
        vec![FockBasisState::new([0]), FockBasisState::new([1])],
        &[c * c, s * s],
        0.0,
    )
}

/// Mean region-I occupation of the bosonic vacuum, `xi / (1 - xi) = sinh^2 r`.
pub fn thermal_mean_occupation(r: f64) -> f64 {
    r.sinh().powi(2)
}
