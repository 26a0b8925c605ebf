use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{check_modes, mode_position, DensityOperator, FockBasisState, ModeLabel, Statistics};
use crate::error::{Error, Result};

/// Sparse state vector over an ordered mode list.
///
/// `truncation_deficit` records probability known to be missing because a
/// component would have exceeded the bosonic cap. It is never folded back in
/// by renormalization unless [`StateVector::normalize`] is called explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    modes: Vec<ModeLabel>,
    n_max: u32,
    amplitudes: BTreeMap<FockBasisState, Complex64>,
    truncation_deficit: f64,
}

impl StateVector {
    /// The zero vector over `modes`.
    pub fn zero(modes: Vec<ModeLabel>, n_max: u32) -> Result<Self> {
        check_modes(&modes)?;
        Ok(Self { modes, n_max, amplitudes: BTreeMap::new(), truncation_deficit: 0.0 })
    }

    pub fn basis_ket(modes: Vec<ModeLabel>, n_max: u32, occupations: &[u32]) -> Result<Self> {
        Self::from_amplitudes(modes, n_max, [(occupations.to_vec(), Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from `(occupations, amplitude)` pairs. Repeated kets
    /// accumulate.
    pub fn from_amplitudes<I>(modes: Vec<ModeLabel>, n_max: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut state = Self::zero(modes, n_max)?;
        for (occ, amp) in terms {
            state.check_ket(&occ)?;
            *state.amplitudes.entry(FockBasisState(occ)).or_default() += amp;
        }
        state.prune();
        Ok(state)
    }

    pub fn with_truncation_deficit(mut self, deficit: f64) -> Self {
        self.truncation_deficit = deficit;
        self
    }

    fn check_ket(&self, occ: &[u32]) -> Result<()> {
        if occ.len() != self.modes.len() {
            return Err(Error::OccupationLength { expected: self.modes.len(), got: occ.len() });
        }
        for (m, &n) in self.modes.iter().zip(occ) {
            let cap = m.statistics.cap(self.n_max);
            if n > cap {
                return Err(Error::OccupationOutOfRange { mode: m.name.clone(), occupation: n, cap });
            }
        }
        Ok(())
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.re != 0.0 || a.im != 0.0);
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn mode_names(&self) -> Vec<&str> {
        self.modes.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `None` for a state over no modes.
    pub fn statistics(&self) -> Option<Statistics> {
        self.modes.first().map(|m| m.statistics)
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.amplitudes
            .get(&FockBasisState(occupations.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    /// Nonzero components in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&FockBasisState, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Number of nonzero components.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm. The deficit is cleared: the caller has chosen
    /// to renormalize.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut out = self.scale(Complex64::new(1.0 / n, 0.0));
        out.truncation_deficit = 0.0;
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.amplitudes.values_mut() {
            *a *= c;
        }
        out.truncation_deficit *= c.norm_sqr();
        out.prune();
        out
    }

    /// Sum of two states over the same mode list.
    pub fn add(&self, other: &StateVector) -> Result<Self> {
        if self.modes != other.modes {
            return Err(Error::BasisMismatch);
        }
        let mut out = self.clone();
        out.n_max = self.n_max.max(other.n_max);
        for (k, a) in &other.amplitudes {
            *out.amplitudes.entry(k.clone()).or_default() += a;
        }
        out.truncation_deficit += other.truncation_deficit;
        out.prune();
        Ok(out)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.modes != other.modes {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .filter_map(|(k, a)| other.amplitudes.get(k).map(|b| a.conj() * b))
            .sum())
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.modes != other.modes {
            return Err(Error::BasisMismatch);
        }
        let mut worst = 0.0f64;
        for (k, a) in &self.amplitudes {
            let b = other.amplitudes.get(k).copied().unwrap_or_default();
            worst = worst.max((a - b).norm());
        }
        for (k, b) in &other.amplitudes {
            if !self.amplitudes.contains_key(k) {
                worst = worst.max(b.norm());
            }
        }
        Ok(worst)
    }

    /// Drops every component whose occupations fail `keep`, without touching
    /// the deficit.
    pub fn filter(&self, mut keep: impl FnMut(&FockBasisState) -> bool) -> Self {
        let mut out = self.clone();
        out.amplitudes.retain(|k, _| keep(k));
        out
    }

    /// Ladder action `a†` (bosonic: `sqrt(n + 1)`, fermionic: `1` on an empty
    /// mode, zero on an occupied one). Bosonic components pushed above the cap
    /// are dropped and their weight is added to the deficit.
    pub fn apply_creation(&self, mode: &str) -> Result<Self> {
        let pos = mode_position(&self.modes, mode)?;
        let stats = self.modes[pos].statistics;
        let cap = stats.cap(self.n_max);
        let mut out = Self {
            modes: self.modes.clone(),
            n_max: self.n_max,
            amplitudes: BTreeMap::new(),
            truncation_deficit: self.truncation_deficit,
        };
        for (k, a) in &self.amplitudes {
            let n = k.0[pos];
            let coeff = match stats {
                Statistics::Bosonic => ((n + 1) as f64).sqrt(),
                Statistics::Fermionic if n == 0 => 1.0,
                Statistics::Fermionic => continue,
            };
            let amp = a * coeff;
            if n + 1 > cap {
                out.truncation_deficit += amp.norm_sqr();
                continue;
            }
            let mut occ = k.0.clone();
            occ[pos] += 1;
            *out.amplitudes.entry(FockBasisState(occ)).or_default() += amp;
        }
        out.prune();
        Ok(out)
    }

    /// Ladder action `a`, the adjoint of [`StateVector::apply_creation`].
    pub fn apply_annihilation(&self, mode: &str) -> Result<Self> {
        let pos = mode_position(&self.modes, mode)?;
        let mut out = Self {
            modes: self.modes.clone(),
            n_max: self.n_max,
            amplitudes: BTreeMap::new(),
            truncation_deficit: self.truncation_deficit,
        };
        for (k, a) in &self.amplitudes {
            let n = k.0[pos];
            if n == 0 {
                continue;
            }
            let coeff = match self.modes[pos].statistics {
                Statistics::Bosonic => (n as f64).sqrt(),
                Statistics::Fermionic => 1.0,
            };
            let mut occ = k.0.clone();
            occ[pos] -= 1;
            *out.amplitudes.entry(FockBasisState(occ)).or_default() += a * coeff;
        }
        out.prune();
        Ok(out)
    }

    /// Expectation value of the number operator of `mode`, divided by the
    /// squared norm.
    pub fn mean_occupation(&self, mode: &str) -> Result<f64> {
        let pos = mode_position(&self.modes, mode)?;
        let norm = self.norm_sqr();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let total: f64 = self.amplitudes.iter().map(|(k, a)| k.0[pos] as f64 * a.norm_sqr()).sum();
        Ok(total / norm)
    }

    /// Tensor product; the mode lists concatenate and must be disjoint.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        if let Some(m) = self.modes.iter().find(|m| other.modes.iter().any(|o| o.name == m.name)) {
            return Err(Error::OverlappingModes(m.name.clone()));
        }
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        check_modes(&modes)?;
        let mut amplitudes = BTreeMap::new();
        for (ka, a) in &self.amplitudes {
            for (kb, b) in &other.amplitudes {
                amplitudes.insert(ka.concat(kb), a * b);
            }
        }
        let (da, db) = (self.truncation_deficit, other.truncation_deficit);
        let mut out = Self {
            modes,
            n_max: self.n_max.max(other.n_max),
            amplitudes,
            truncation_deficit: da + db - da * db,
        };
        out.prune();
        Ok(out)
    }

    /// Reduced density operator on `keep`, computed directly from the pure
    /// state without forming the full outer product.
    pub fn reduced_density(&self, keep: &[&str]) -> Result<DensityOperator> {
        let (keep_pos, traced_pos) = split_positions(&self.modes, keep)?;
        let kept_modes: Vec<ModeLabel> = keep_pos.iter().map(|&p| self.modes[p].clone()).collect();

        // group components by their traced-out occupations
        let mut groups: BTreeMap<FockBasisState, Vec<(FockBasisState, Complex64)>> = BTreeMap::new();
        for (k, a) in &self.amplitudes {
            groups.entry(k.project(&traced_pos)).or_default().push((k.project(&keep_pos), *a));
        }
        let mut basis: Vec<FockBasisState> = groups
            .values()
            .flat_map(|g| g.iter().map(|(k, _)| k.clone()))
            .collect();
        basis.sort();
        basis.dedup();
        let index: std::collections::HashMap<&FockBasisState, usize> =
            basis.iter().enumerate().map(|(i, k)| (k, i)).collect();

        let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for group in groups.values() {
            for (ki, ai) in group {
                for (kj, aj) in group {
                    *entries.entry((index[ki], index[kj])).or_default() += ai * aj.conj();
                }
            }
        }
        DensityOperator::from_entries(kept_modes, self.n_max, basis.clone(), entries, self.truncation_deficit)
    }
}

/// Positions of the kept modes (in `keep` order) and of the remaining modes
/// (in original order).
pub(crate) fn split_positions(modes: &[ModeLabel], keep: &[&str]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut keep_pos = Vec::with_capacity(keep.len());
    for name in keep {
        let p = mode_position(modes, name)?;
        if keep_pos.contains(&p) {
            return Err(Error::DuplicateMode(name.to_string()));
        }
        keep_pos.push(p);
    }
    let traced: Vec<usize> = (0..modes.len()).filter(|p| !keep_pos.contains(p)).collect();
    Ok((keep_pos, traced))
}
