use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{DensityOperator, StateVector, ENTROPY_CUTOFF};
use crate::error::{Error, Result};

/// Eigenvalues in `[-PSD_TOLERANCE, 0)` are treated as rounding noise.
pub const PSD_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// How many eigenvalues fell in `[-PSD_TOLERANCE, 0)`.
    pub clamped: usize,
}

/// Eigenvalues of a Hermitian operator, diagonalizing each invariant block
/// separately.
pub fn spectrum(rho: &DensityOperator) -> Result<Spectrum> {
    let mut eigenvalues = Vec::with_capacity(rho.dim());
    for block in rho.blocks() {
        if block.len() == 1 {
            eigenvalues.push(rho.get(block[0], block[0]).re);
            continue;
        }
        let m = DMatrix::<Complex64>::from_fn(block.len(), block.len(), |a, b| rho.get(block[a], block[b]));
        eigenvalues.extend(SymmetricEigen::new(m).eigenvalues.iter().copied());
    }
    eigenvalues.sort_by(f64::total_cmp);
    if let Some(&lowest) = eigenvalues.first() {
        if lowest < -PSD_TOLERANCE {
            return Err(Error::NotPositive(lowest));
        }
    }
    let clamped = eigenvalues.iter().filter(|&&l| l < 0.0).count();
    Ok(Spectrum { eigenvalues, clamped })
}

/// Entropy of a list of probabilities, in bits.
pub(crate) fn entropy_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .filter(|&p| p > ENTROPY_CUTOFF)
        .map(|p| -p * p.log2())
        .sum()
}

/// `-Tr(rho log2 rho)` in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let s = spectrum(rho)?;
    Ok(entropy_bits(s.eigenvalues.into_iter().map(|l| l.max(0.0))))
}

/// `<psi| rho |psi>` for a normalized pure state over the same modes.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityOperator) -> Result<f64> {
    if psi.modes() != rho.modes() {
        return Err(Error::BasisMismatch);
    }
    if (psi.norm_sqr() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "fidelity reference must be normalized (norm^2 = {})",
            psi.norm_sqr()
        )));
    }
    let coords: Vec<(usize, Complex64)> = psi
        .iter()
        .filter_map(|(k, a)| rho.index_of(k).map(|i| (i, *a)))
        .collect();
    let mut f = Complex64::default();
    for &(i, ai) in &coords {
        for &(j, aj) in &coords {
            f += ai.conj() * rho.get(i, j) * aj;
        }
    }
    Ok(f.re)
}
