use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::split_positions;
use super::{check_modes, FockBasisState, ModeLabel, StateVector, HERMITIAN_TOLERANCE};
use crate::error::{Error, Result};

/// Hermitian operator over an explicit, ordered list of basis kets.
///
/// Only nonzero matrix elements are stored. Kets present in the basis but
/// absent from every entry have zero population.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    modes: Vec<ModeLabel>,
    n_max: u32,
    basis: Vec<FockBasisState>,
    index: HashMap<FockBasisState, usize>,
    entries: BTreeMap<(usize, usize), Complex64>,
    truncation_deficit: f64,
}

impl DensityOperator {
    pub fn from_entries(
        modes: Vec<ModeLabel>,
        n_max: u32,
        basis: Vec<FockBasisState>,
        entries: BTreeMap<(usize, usize), Complex64>,
        truncation_deficit: f64,
    ) -> Result<Self> {
        check_modes(&modes)?;
        let mut index = HashMap::with_capacity(basis.len());
        for (i, k) in basis.iter().enumerate() {
            if k.len() != modes.len() {
                return Err(Error::OccupationLength { expected: modes.len(), got: k.len() });
            }
            for (m, &n) in modes.iter().zip(&k.0) {
                let cap = m.statistics.cap(n_max);
                if n > cap {
                    return Err(Error::OccupationOutOfRange { mode: m.name.clone(), occupation: n, cap });
                }
            }
            if index.insert(k.clone(), i).is_some() {
                return Err(Error::Format(format!("basis ket {k} listed twice")));
            }
        }
        let dim = basis.len();
        if let Some(&(i, j)) = entries.keys().find(|&&(i, j)| i >= dim || j >= dim) {
            return Err(Error::Format(format!("entry ({i}, {j}) outside a basis of size {dim}")));
        }
        let mut rho = Self { modes, n_max, basis, index, entries, truncation_deficit };
        rho.entries.retain(|_, v| v.re != 0.0 || v.im != 0.0);
        let (deviation, row, col) = rho.hermiticity_deviation();
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { row, col, deviation });
        }
        Ok(rho)
    }

    pub fn from_dense(
        modes: Vec<ModeLabel>,
        n_max: u32,
        basis: Vec<FockBasisState>,
        matrix: &DMatrix<Complex64>,
        truncation_deficit: f64,
    ) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::Format(format!(
                "matrix is {}x{} but the basis has {} kets",
                matrix.nrows(),
                matrix.ncols(),
                basis.len()
            )));
        }
        let mut entries = BTreeMap::new();
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                entries.insert((i, j), matrix[(i, j)]);
            }
        }
        Self::from_entries(modes, n_max, basis, entries, truncation_deficit)
    }

    pub fn from_diagonal(
        modes: Vec<ModeLabel>,
        n_max: u32,
        basis: Vec<FockBasisState>,
        diagonal: &[f64],
        truncation_deficit: f64,
    ) -> Result<Self> {
        if diagonal.len() != basis.len() {
            return Err(Error::Format("diagonal length differs from basis size".into()));
        }
        let entries = diagonal
            .iter()
            .enumerate()
            .map(|(i, &p)| ((i, i), Complex64::new(p, 0.0)))
            .collect();
        Self::from_entries(modes, n_max, basis, entries, truncation_deficit)
    }

    /// `|psi><psi|` over the lexicographically sorted support of `psi`.
    /// The trace equals the squared norm; the state's deficit carries over.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let basis: Vec<FockBasisState> = state.iter().map(|(k, _)| k.clone()).collect();
        let amps: Vec<Complex64> = state.iter().map(|(_, a)| *a).collect();
        let mut entries = BTreeMap::new();
        for (i, ai) in amps.iter().enumerate() {
            for (j, aj) in amps.iter().enumerate() {
                entries.insert((i, j), ai * aj.conj());
            }
        }
        Self::from_entries(
            state.modes().to_vec(),
            state.n_max(),
            basis,
            entries,
            state.truncation_deficit(),
        )
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn basis(&self) -> &[FockBasisState] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn truncation_deficit(&self) -> f64 {
        self.truncation_deficit
    }

    pub fn with_truncation_deficit(mut self, deficit: f64) -> Self {
        self.truncation_deficit = deficit;
        self
    }

    pub fn index_of(&self, ket: &FockBasisState) -> Option<usize> {
        self.index.get(ket).copied()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    /// `<bra| rho |ket>`, zero when either ket lies outside the basis.
    pub fn element(&self, bra: &[u32], ket: &[u32]) -> Complex64 {
        let i = self.index.get(&FockBasisState(bra.to_vec()));
        let j = self.index.get(&FockBasisState(ket.to_vec()));
        match (i, j) {
            (Some(&i), Some(&j)) => self.get(i, j),
            _ => Complex64::default(),
        }
    }

    /// Stored nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn trace(&self) -> f64 {
        self.entries.iter().filter(|((i, j), _)| i == j).map(|(_, v)| v.re).sum()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Hermitian: Tr(rho^2) = sum |rho_ij|^2
        self.entries.values().map(|v| v.norm_sqr()).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    /// Largest `|rho_ij - conj(rho_ji)|` and where it occurs.
    pub fn hermiticity_deviation(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for (&(i, j), v) in &self.entries {
            let d = (v - self.get(j, i).conj()).norm();
            if d > worst.0 {
                worst = (d, i, j);
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for (&(i, j), v) in &self.entries {
            m[(i, j)] = *v;
        }
        m
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v *= factor;
        }
        out.entries.retain(|_, v| v.re != 0.0 || v.im != 0.0);
        out.truncation_deficit *= factor;
        out
    }

    /// Sum of two operators sharing the same modes and basis.
    pub fn add(&self, other: &DensityOperator) -> Result<Self> {
        if self.modes != other.modes || self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let mut out = self.clone();
        for (k, v) in &other.entries {
            *out.entries.entry(*k).or_default() += v;
        }
        out.entries.retain(|_, v| v.re != 0.0 || v.im != 0.0);
        out.truncation_deficit += other.truncation_deficit;
        Ok(out)
    }

    /// Largest elementwise difference, matching entries by ket labels so the
    /// two operators may use different basis orderings.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        if self.modes != other.modes {
            return Err(Error::BasisMismatch);
        }
        let mut worst = 0.0f64;
        for (&(i, j), v) in &self.entries {
            let w = other.element(&self.basis[i].0, &self.basis[j].0);
            worst = worst.max((v - w).norm());
        }
        for (&(i, j), w) in &other.entries {
            let (bi, bj) = (&other.basis[i], &other.basis[j]);
            if self.index.get(bi).zip(self.index.get(bj)).is_none() {
                worst = worst.max(w.norm());
            }
        }
        Ok(worst)
    }

    /// Re-expresses the operator over `basis`, dropping entries whose kets
    /// are not listed. Dropped weight is not added to the deficit.
    pub fn restrict_to(&self, basis: Vec<FockBasisState>) -> Result<Self> {
        let mut new_index = HashMap::with_capacity(basis.len());
        for (i, k) in basis.iter().enumerate() {
            new_index.insert(k.clone(), i);
        }
        let mut entries = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            if let (Some(&a), Some(&b)) = (new_index.get(&self.basis[i]), new_index.get(&self.basis[j])) {
                entries.insert((a, b), *v);
            }
        }
        Self::from_entries(self.modes.clone(), self.n_max, basis, entries, self.truncation_deficit)
    }

    /// Partial trace onto `keep` (result modes follow the order of `keep`).
    /// The result basis is the sorted set of kept projections of this basis.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let (keep_pos, traced_pos) = split_positions(&self.modes, keep)?;
        let kept_modes: Vec<ModeLabel> = keep_pos.iter().map(|&p| self.modes[p].clone()).collect();
        let kept: Vec<FockBasisState> = self.basis.iter().map(|k| k.project(&keep_pos)).collect();
        let traced: Vec<FockBasisState> = self.basis.iter().map(|k| k.project(&traced_pos)).collect();

        let mut basis = kept.clone();
        basis.sort();
        basis.dedup();
        let index: HashMap<&FockBasisState, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();

        let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            if traced[i] == traced[j] {
                *entries.entry((index[&kept[i]], index[&kept[j]])).or_default() += v;
            }
        }
        Self::from_entries(kept_modes, self.n_max, basis.clone(), entries, self.truncation_deficit)
    }

    /// `U rho U†` for a unitary `u` acting on `span(kets)`, identity on the
    /// orthogonal complement.
    pub fn transform_subspace(&self, kets: &[FockBasisState], u: &DMatrix<Complex64>) -> Result<Self> {
        let k = kets.len();
        if u.nrows() != k || u.ncols() != k {
            return Err(Error::InvalidParameter("subspace operator has the wrong shape".into()));
        }
        let sub: Vec<usize> = kets
            .iter()
            .map(|ket| self.index_of(ket).ok_or_else(|| Error::Format(format!("ket {ket} not in basis"))))
            .collect::<Result<_>>()?;
        let slot = |i: usize| sub.iter().position(|&s| s == i);

        // rows: rho <- U rho
        let mut left: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            match slot(i) {
                None => *left.entry((i, j)).or_default() += v,
                Some(c) => {
                    for (a, &row) in sub.iter().enumerate() {
                        *left.entry((row, j)).or_default() += u[(a, c)] * v;
                    }
                }
            }
        }
        // columns: rho <- rho U†
        let mut out: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(i, j), v) in &left {
            match slot(j) {
                None => *out.entry((i, j)).or_default() += v,
                Some(d) => {
                    for (b, &col) in sub.iter().enumerate() {
                        *out.entry((i, col)).or_default() += v * u[(b, d)].conj();
                    }
                }
            }
        }
        Self::from_entries(self.modes.clone(), self.n_max, self.basis.clone(), out, self.truncation_deficit)
    }

    /// Groups of basis indices coupled by nonzero entries. Each group is an
    /// invariant block, so spectra may be computed block by block.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in self.entries.keys() {
            if i != j {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn qubits(names: &[&str]) -> Vec<ModeLabel> {
        names.iter().map(|n| ModeLabel::bosonic(*n)).collect()
    }

    #[test]
    fn vacuum_density_has_single_entry() {
        let s = StateVector::basis_ket(qubits(&["a"]), 3, &[0]).unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap();
        assert_eq!(rho.dim(), 1);
        assert_eq!(rho.get(0, 0), c(1.0));
    }

    #[test]
    fn plus_state_density_has_half_entries() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(qubits(&["a"]), 1, [(vec![0], c(h)), (vec![1], c(h))]).unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.get(i, j) - c(0.5)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_pair_traces_to_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(qubits(&["a", "b"]), 1, [(vec![0, 0], c(h)), (vec![1, 1], c(h))])
            .unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap().partial_trace(&["a"]).unwrap();
        assert_eq!(rho.dim(), 2);
        assert!((rho.get(0, 0).re - 0.5).abs() < 1e-15);
        assert!((rho.get(1, 1).re - 0.5).abs() < 1e-15);
        assert_eq!(rho.get(0, 1), c(0.0));
    }

    #[test]
    fn partial_trace_errors() {
        let s = StateVector::basis_ket(qubits(&["a", "b"]), 1, &[0, 1]).unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap();
        assert_eq!(rho.partial_trace(&[]), Err(Error::EmptyKeep));
        assert_eq!(rho.partial_trace(&["z"]), Err(Error::UnknownMode("z".into())));
        assert_eq!(rho.partial_trace(&["a", "a"]), Err(Error::DuplicateMode("a".into())));
    }

    #[test]
    fn pure_route_matches_operator_route() {
        let s = StateVector::from_amplitudes(
            qubits(&["a", "b", "c"]),
            2,
            [
                (vec![0, 1, 2], Complex64::new(0.3, -0.1)),
                (vec![1, 1, 0], Complex64::new(0.2, 0.5)),
                (vec![2, 0, 2], Complex64::new(-0.4, 0.0)),
                (vec![1, 0, 2], Complex64::new(0.1, 0.6)),
            ],
        )
        .unwrap();
        let full = DensityOperator::from_pure(&s).unwrap();
        for keep in [vec!["a"], vec!["c", "a"], vec!["b", "c"]] {
            let via_op = full.partial_trace(&keep).unwrap();
            let via_state = s.reduced_density(&keep).unwrap();
            assert_eq!(via_op.basis(), via_state.basis());
            assert!(via_op.max_abs_diff(&via_state).unwrap() < 1e-15);
        }
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = c(0.5);
        let basis = vec![FockBasisState::new([0]), FockBasisState::new([1])];
        let err = DensityOperator::from_dense(qubits(&["a"]), 1, basis, &m, 0.0).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn subspace_swap_moves_population() {
        let basis = vec![FockBasisState::new([0]), FockBasisState::new([1]), FockBasisState::new([2])];
        let rho = DensityOperator::from_diagonal(qubits(&["a"]), 2, basis.clone(), &[0.2, 0.5, 0.3], 0.0).unwrap();
        let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let out = rho.transform_subspace(&basis[1..], &x).unwrap();
        assert_eq!(out.diagonal(), vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn blocks_follow_coherences() {
        let basis: Vec<_> = (0..4).map(|n| FockBasisState::new([n])).collect();
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), c(0.25));
        entries.insert((1, 1), c(0.25));
        entries.insert((3, 3), c(0.5));
        entries.insert((1, 3), c(0.1));
        entries.insert((3, 1), c(0.1));
        let rho = DensityOperator::from_entries(qubits(&["a"]), 3, basis, entries, 0.0).unwrap();
        assert_eq!(rho.blocks(), vec![vec![0], vec![1, 3], vec![2]]);
    }
}
