//! Truncated multi-mode Fock space.
//!
//! States are sparse maps from occupation lists to complex amplitudes over an
//! ordered list of labelled modes. Density operators are sparse Hermitian
//! matrices over an explicit, ordered list of basis kets. Basis ordering is
//! lexicographic in the occupation list unless a caller supplies its own
//! ordering (the receiver-side teleportation states are ordered by total
//! excitation number).
//!
//! Fermionic ladder operators use real non-negative coefficients and carry no
//! inter-mode anticommutation sign (no Jordan-Wigner string). Every quantity
//! computed in this crate treats the fermionic modes independently, so no
//! observable here depends on that sign.

mod density;
pub mod json;
mod spectrum;
mod state;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use density::DensityOperator;
pub use spectrum::{fidelity_pure, spectrum, von_neumann_entropy, Spectrum, PSD_TOLERANCE};
pub(crate) use spectrum::entropy_bits;
pub use state::StateVector;

/// Eigenvalues at or below this magnitude contribute nothing to the entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// Elementwise tolerance used to accept a matrix as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Bosonic,
    Fermionic,
}

impl Statistics {
    /// Largest occupation a single mode may hold under a bosonic cap `n_max`.
    pub fn cap(self, n_max: u32) -> u32 {
        match self {
            Statistics::Bosonic => n_max,
            Statistics::Fermionic => 1,
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Bosonic => f.write_str("bosonic"),
            Statistics::Fermionic => f.write_str("fermionic"),
        }
    }
}

impl std::str::FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bosonic" | "boson" | "b" => Ok(Statistics::Bosonic),
            "fermionic" | "fermion" | "f" => Ok(Statistics::Fermionic),
            other => Err(Error::InvalidParameter(format!("unknown statistics `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub name: String,
    pub statistics: Statistics,
}

impl ModeLabel {
    pub fn new(name: impl Into<String>, statistics: Statistics) -> Self {
        Self { name: name.into(), statistics }
    }

    pub fn bosonic(name: impl Into<String>) -> Self {
        Self::new(name, Statistics::Bosonic)
    }

    pub fn fermionic(name: impl Into<String>) -> Self {
        Self::new(name, Statistics::Fermionic)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Occupation numbers aligned with an ordered mode list.
///
/// The derived ordering is lexicographic, which fixes the basis enumeration
/// order used everywhere a basis is generated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockBasisState(pub Vec<u32>);

impl FockBasisState {
    pub fn new(occupations: impl Into<Vec<u32>>) -> Self {
        Self(occupations.into())
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sub-list at the given positions, in the order given.
    pub fn project(&self, positions: &[usize]) -> FockBasisState {
        FockBasisState(positions.iter().map(|&p| self.0[p]).collect())
    }

    pub fn concat(&self, other: &FockBasisState) -> FockBasisState {
        let mut occ = self.0.clone();
        occ.extend_from_slice(&other.0);
        FockBasisState(occ)
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(">")
    }
}

/// Validates a mode list: unique names, homogeneous statistics.
pub(crate) fn check_modes(modes: &[ModeLabel]) -> Result<()> {
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].iter().any(|o| o.name == m.name) {
            return Err(Error::DuplicateMode(m.name.clone()));
        }
        if m.statistics != modes[0].statistics {
            return Err(Error::MixedStatistics(m.name.clone()));
        }
    }
    Ok(())
}

pub(crate) fn mode_position(modes: &[ModeLabel], name: &str) -> Result<usize> {
    modes
        .iter()
        .position(|m| m.name == name)
        .ok_or_else(|| Error::UnknownMode(name.to_string()))
}

/// Every occupation list over `modes` with bosonic occupations `<= n_max`,
/// in lexicographic order.
pub fn enumerate_basis(modes: &[ModeLabel], n_max: u32) -> Vec<FockBasisState> {
    let caps: Vec<u32> = modes.iter().map(|m| m.statistics.cap(n_max)).collect();
    let mut out = Vec::new();
    let mut current = vec![0u32; modes.len()];
    loop {
        out.push(FockBasisState(current.clone()));
        // odometer increment, last mode fastest
        let mut k = modes.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if current[k] < caps[k] {
                current[k] += 1;
                break;
            }
            current[k] = 0;
        }
    }
}

/// Truncation settings for bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    pub n_max: u32,
    pub tail_tolerance: f64,
}

impl TruncationConfig {
    /// Smallest cap whose vacuum tail bound `xi^(n_max + 1)` falls below
    /// `tail_tolerance`, where `xi = tanh^2 r`.
    pub fn for_squeezing(r: f64, tail_tolerance: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("squeeze parameter r = {r} must be finite and >= 0")));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::InvalidParameter(format!("tail tolerance {tail_tolerance} must lie in (0, 1)")));
        }
        let xi = r.tanh().powi(2);
        if xi >= 1.0 {
            return Err(Error::InvalidParameter(format!("r = {r} saturates tanh; no finite truncation exists")));
        }
        let mut n_max = 0u32;
        while vacuum_tail_bound(xi, n_max) >= tail_tolerance {
            n_max += 1;
        }
        Ok(Self { n_max, tail_tolerance })
    }

    pub fn tail_bound(&self, r: f64) -> f64 {
        vacuum_tail_bound(r.tanh().powi(2), self.n_max)
    }
}

/// Probability mass of the two-mode squeezed vacuum beyond `n_max`.
pub fn vacuum_tail_bound(xi: f64, n_max: u32) -> f64 {
    xi.powi(n_max as i32 + 1)
}
