//! Parametric down-conversion as a laboratory stand-in for the Rindler
//! vacuum.
//!
//! Output operators are linear in the inputs,
//!
//! ```text
//! b_S  = s11 a_S + s12 a_I†
//! b_I† = s21 a_S + s22 a_I†
//! ```
//!
//! and the canonical commutators force `|s11|^2 - |s12|^2 = 1`,
//! `|s22|^2 - |s21|^2 = 1`, `s11 s21* = s12 s22*`. The input vacuum seen in
//! the output Fock basis is a two-mode squeezed state; tracing out the
//! signal leaves a thermal idler.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, FockBasisState, ModeLabel, StateVector};
use crate::relativity::{HBAR, K_B};

/// Residuals above this reject a matrix.
pub const BOGOLIUBOV_TOLERANCE: f64 = 1e-12;

pub const SIGNAL: &str = "S";
pub const IDLER: &str = "I";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
}

impl SqueezeMatrix {
    pub fn new(s11: Complex64, s12: Complex64, s21: Complex64, s22: Complex64) -> Self {
        Self { s11, s12, s21, s22 }
    }

    pub fn identity() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self::new(l, o, o, l)
    }

    /// `s11 = s22 = cosh r`, `s12 = e^{i phi} sinh r`, `s21 = e^{-i phi} sinh r`.
    pub fn two_mode(r: f64, phi: f64) -> Self {
        let (c, s) = (Complex64::new(r.cosh(), 0.0), r.sinh());
        Self::new(c, Complex64::from_polar(s, phi), Complex64::from_polar(s, -phi), c)
    }

    /// Completes a matrix from `s11`, `|s21|` and a phase in the two-mode
    /// form: `s22 = s11`, `s21 = e^{-i phi} |s21|`, `s12 = e^{i phi} |s21|`.
    pub fn from_s11_s21(s11: f64, s21: f64, phi: f64) -> Self {
        let c = Complex64::new(s11, 0.0);
        Self::new(c, Complex64::from_polar(s21, phi), Complex64::from_polar(s21, -phi), c)
    }

    pub fn as_rows(&self) -> [[Complex64; 2]; 2] {
        [[self.s11, self.s12], [self.s21, self.s22]]
    }

    /// Matrix product `self * other` acting on `(a_S, a_I†)` coefficient
    /// columns.
    pub fn compose(&self, other: &SqueezeMatrix) -> SqueezeMatrix {
        let (a, b) = (self.as_rows(), other.as_rows());
        let m = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Self::new(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_abs_diff(&self, other: &SqueezeMatrix) -> f64 {
        [
            self.s11 - other.s11,
            self.s12 - other.s12,
            self.s21 - other.s21,
            self.s22 - other.s22,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }

    /// `|s21| / |s11|`, the ratio of successive pair amplitudes.
    pub fn pair_ratio(&self) -> f64 {
        self.s21.norm() / self.s11.norm()
    }
}

/// Magnitudes of the three commutator constraints.
pub fn validate_bogoliubov(s: &SqueezeMatrix) -> [f64; 3] {
    [
        (s.s11.norm_sqr() - s.s12.norm_sqr() - 1.0).abs(),
        (s.s22.norm_sqr() - s.s21.norm_sqr() - 1.0).abs(),
        (s.s11 * s.s21.conj() - s.s12 * s.s22.conj()).norm(),
    ]
}

pub fn is_valid(s: &SqueezeMatrix) -> bool {
    validate_bogoliubov(s).iter().all(|&r| r < BOGOLIUBOV_TOLERANCE)
}

fn require_valid(s: &SqueezeMatrix) -> Result<()> {
    let residuals = validate_bogoliubov(s);
    if residuals.iter().any(|&r| !(r < BOGOLIUBOV_TOLERANCE)) {
        return Err(Error::InvalidBogoliubov { residuals });
    }
    Ok(())
}

fn require_normalizable(s: &SqueezeMatrix) -> Result<()> {
    if !(s.s21.norm() < s.s11.norm()) {
        return Err(Error::NonNormalizable { s11: s.s11.norm(), s21: s.s21.norm() });
    }
    Ok(())
}

/// Inputs in terms of outputs:
///
/// ```text
/// a_S  =  s11* b_S - s21* b_I†
/// a_I† = -s12* b_S + s22* b_I†
/// ```
pub fn invert_bogoliubov(s: &SqueezeMatrix) -> Result<SqueezeMatrix> {
    require_valid(s)?;
    Ok(SqueezeMatrix::new(s.s11.conj(), -s.s21.conj(), -s.s12.conj(), s.s22.conj()))
}

/// `(1 / |s11|) sum_n (s21* / s11*)^n |n>_S |n>_I` up to `n_max`.
pub fn pdc_vacuum(s: &SqueezeMatrix, n_max: u32) -> Result<StateVector> {
    require_valid(s)?;
    require_normalizable(s)?;
    let ratio = s.s21.conj() / s.s11.conj();
    let mut amp = Complex64::new(1.0 / s.s11.norm(), 0.0);
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        terms.push((vec![n, n], amp));
        amp *= ratio;
    }
    let q = ratio.norm_sqr();
    Ok(StateVector::from_amplitudes(modes(), n_max, terms)?.with_truncation_deficit(q.powi(n_max as i32 + 1)))
}

pub fn modes() -> Vec<ModeLabel> {
    vec![ModeLabel::bosonic(SIGNAL), ModeLabel::bosonic(IDLER)]
}

/// `<N_0 - N_1>` for a two-mode state, normalized by its norm.
pub fn photon_number_difference(state: &StateVector) -> Result<f64> {
    if state.modes().len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a two-mode state, got {} modes",
            state.modes().len()
        )));
    }
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let diff: f64 = state
        .iter()
        .map(|(k, a)| a.norm_sqr() * (k.occupations()[0] as f64 - k.occupations()[1] as f64))
        .sum();
    Ok(diff / norm)
}

/// Idler state `(1 / |s11|^2) |s21 / s11|^(2n)` on `|n>`, `n <= n_max`.
pub fn reduced_thermal_pdc(s: &SqueezeMatrix, n_max: u32) -> Result<DensityOperator> {
    require_valid(s)?;
    require_normalizable(s)?;
    let q = s.pair_ratio().powi(2);
    let w0 = 1.0 / s.s11.norm_sqr();
    let basis = (0..=n_max).map(|n| FockBasisState::new([n])).collect();
    let diag: Vec<f64> = (0..=n_max).map(|n| w0 * q.powi(n as i32)).collect();
    DensityOperator::from_diagonal(
        vec![ModeLabel::bosonic(IDLER)],
        n_max,
        basis,
        &diag,
        q.powi(n_max as i32 + 1),
    )
}

/// `hbar omega / (2 k_B ln(|s11| / |s21|))` in kelvin for `omega` in rad/s;
/// zero when `s21 = 0`.
pub fn unruh_temperature_from_matrix(s: &SqueezeMatrix, omega: f64) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!("frequency omega = {omega} must be > 0")));
    }
    if s.s21.norm() == 0.0 {
        return Ok(0.0);
    }
    require_normalizable(s)?;
    Ok(HBAR * omega / (2.0 * K_B * (s.s11.norm() / s.s21.norm()).ln()))
}

/// Acceleration whose Unruh temperature equals the matrix temperature at
/// `omega`: `pi omega c / ln(|s11| / |s21|)`; zero when `s21 = 0`.
pub fn effective_acceleration(s: &SqueezeMatrix, omega: f64, c: f64) -> Result<f64> {
    if s.s21.norm() == 0.0 {
        return Ok(0.0);
    }
    require_normalizable(s)?;
    Ok(std::f64::consts::PI * omega * c / (s.s11.norm() / s.s21.norm()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relativity::{squeeze_bosonic, unruh_temperature, AccelerationParams, Units};
    use crate::vacuum::{bosonic_vacuum, thermal_reduction_bosonic, ModePair};
    use crate::fock::Statistics;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_valid() {
        assert_eq!(validate_bogoliubov(&SqueezeMatrix::identity()), [0.0; 3]);
    }

    #[test]
    fn two_mode_form_is_valid() {
        for (r, phi) in [(0.0, 0.0), (0.5, 0.3), (1.7, -2.0), (3.0, 3.1)] {
            let res = validate_bogoliubov(&SqueezeMatrix::two_mode(r, phi));
            assert!(res.iter().all(|&x| x < 1e-12 * r.cosh().powi(2).max(1.0)), "{res:?}");
        }
    }

    #[test]
    fn both_off_diagonals_sharing_a_phase_break_the_third_constraint() {
        let r: f64 = 0.7;
        let e = Complex64::from_polar(r.sinh(), 0.4);
        let s = SqueezeMatrix::new(c(r.cosh(), 0.0), e, e, c(r.cosh(), 0.0));
        let res = validate_bogoliubov(&s);
        let expect = 2.0 * r.cosh() * r.sinh() * 0.4f64.sin();
        assert!((res[2] - expect).abs() < 1e-12);
    }

    #[test]
    fn small_violation_is_reported() {
        let s = SqueezeMatrix::new(c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let res = validate_bogoliubov(&s);
        assert!((res[0] - 0.01).abs() < 1e-15);
        assert!(!is_valid(&s));
        assert!(matches!(invert_bogoliubov(&s), Err(Error::InvalidBogoliubov { .. })));
    }

    #[test]
    fn inverse_round_trip() {
        for (r, phi) in [(0.0, 0.0), (0.5, 0.0), (1.2, 0.9)] {
            let s = SqueezeMatrix::two_mode(r, phi);
            let t = invert_bogoliubov(&s).unwrap();
            assert!(t.compose(&s).max_abs_diff(&SqueezeMatrix::identity()) < 1e-12);
            assert!(s.compose(&t).max_abs_diff(&SqueezeMatrix::identity()) < 1e-12);
            assert!(validate_bogoliubov(&t).iter().all(|&x| x < 1e-11));
        }
        let s = SqueezeMatrix::two_mode(0.5, 0.0);
        let t = invert_bogoliubov(&s).unwrap();
        // (1, 0) coefficients of a_S through the forward then inverse map
        let fwd = [s.s11, s.s21];
        let back = [t.s11 * fwd[0] + t.s12 * fwd[1], t.s21 * fwd[0] + t.s22 * fwd[1]];
        assert!((back[0] - 1.0).norm() < 1e-12 && back[1].norm() < 1e-12);
    }

    #[test]
    fn vacuum_at_zero_squeezing() {
        let v = pdc_vacuum(&SqueezeMatrix::identity(), 5).unwrap();
        assert_eq!(v.support_len(), 1);
        assert_eq!(v.amplitude(&[0, 0]), c(1.0, 0.0));
    }

    #[test]
    fn vacuum_matches_rindler_form() {
        let r = 0.8;
        let v = pdc_vacuum(&SqueezeMatrix::two_mode(r, 0.0), 30).unwrap();
        for n in 0..=30u32 {
            let expect = r.tanh().powi(n as i32) / r.cosh();
            assert!((v.amplitude(&[n, n]) - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_is_carried_per_component() {
        let (r, phi) = (0.6, 1.1);
        let v = pdc_vacuum(&SqueezeMatrix::two_mode(r, phi), 10).unwrap();
        let w = bosonic_vacuum(r, &ModePair::named("R", Statistics::Bosonic), 10).unwrap();
        for n in 0..=10u32 {
            let a = v.amplitude(&[n, n]);
            assert!((a.norm() - w.amplitude(&[n, n]).re).abs() < 1e-15);
            assert!((a.arg() - (n as f64 * phi).sin().atan2((n as f64 * phi).cos())).abs() < 1e-12 || n == 0);
        }
    }

    #[test]
    fn both_transformed_annihilators_kill_the_vacuum() {
        let s = SqueezeMatrix::two_mode(0.9, 0.7);
        let n_max = 25;
        let v = pdc_vacuum(&s, n_max).unwrap();
        let first = v
            .apply_annihilation(SIGNAL)
            .unwrap()
            .scale(s.s11.conj())
            .add(&v.apply_creation(IDLER).unwrap().scale(-s.s21.conj()))
            .unwrap();
        let second = v
            .apply_creation(SIGNAL)
            .unwrap()
            .scale(-s.s12)
            .add(&v.apply_annihilation(IDLER).unwrap().scale(s.s22))
            .unwrap();
        // truncation only breaks the recursion at the top rung, which the
        // creation operators push past the cap
        assert!(first.norm() < 1e-14, "{}", first.norm());
        assert!(second.norm() < 1e-14, "{}", second.norm());
    }

    #[test]
    fn pairs_leave_together() {
        let v = pdc_vacuum(&SqueezeMatrix::two_mode(1.3, 0.2), 40).unwrap();
        assert!(photon_number_difference(&v).unwrap().abs() < 1e-15);
        let m = modes();
        assert_eq!(photon_number_difference(&StateVector::basis_ket(m.clone(), 3, &[1, 0]).unwrap()).unwrap(), 1.0);
        assert_eq!(photon_number_difference(&StateVector::basis_ket(m, 3, &[2, 3]).unwrap()).unwrap(), -1.0);
    }

    #[test]
    fn thermal_idler() {
        let id = reduced_thermal_pdc(&SqueezeMatrix::identity(), 4).unwrap();
        assert_eq!(id.get(0, 0).re, 1.0);
        assert_eq!(id.trace(), 1.0);

        let r = 1.1;
        let s = SqueezeMatrix::two_mode(r, 0.5);
        let closed = reduced_thermal_pdc(&s, 30).unwrap();
        let traced = pdc_vacuum(&s, 30).unwrap().reduced_density(&[IDLER]).unwrap();
        assert!(closed.max_abs_diff(&traced).unwrap() < 1e-12);

        let rindler = thermal_reduction_bosonic(r, &ModePair::named("R", Statistics::Bosonic), 30).unwrap();
        for n in 0..=30usize {
            assert!((closed.get(n, n).re - rindler.get(n, n).re).abs() < 1e-12);
        }
        let q = r.tanh().powi(2);
        assert!((closed.trace() - (1.0 - q.powi(31))).abs() < 1e-12);
    }

    #[test]
    fn non_normalizable_matrix_is_rejected() {
        let s = SqueezeMatrix::new(c(1.0, 0.0), c(0.0, 0.0), c(1.5, 0.0), c(1.0, 0.0));
        assert!(matches!(unruh_temperature_from_matrix(&s, 1.0), Err(Error::NonNormalizable { .. })));
    }

    #[test]
    fn temperature_laws() {
        assert_eq!(unruh_temperature_from_matrix(&SqueezeMatrix::identity(), 1e9).unwrap(), 0.0);
        let s = SqueezeMatrix::two_mode(0.4, 0.0);
        let t1 = unruh_temperature_from_matrix(&s, 1e9).unwrap();
        let t2 = unruh_temperature_from_matrix(&s, 2e9).unwrap();
        assert!((t2 / t1 - 2.0).abs() < 1e-14);

        let p = AccelerationParams::new(1e20, 1e10).unwrap();
        let r = squeeze_bosonic(&p).unwrap().r;
        let s = SqueezeMatrix::two_mode(r, 0.0);
        let t = unruh_temperature_from_matrix(&s, p.omega).unwrap();
        let expect = unruh_temperature(&p, Units::Si);
        assert!((t / expect - 1.0).abs() < 1e-10, "{t} vs {expect}");
        let a = effective_acceleration(&s, p.omega, p.c).unwrap();
        assert!((a / p.a - 1.0).abs() < 1e-10);
    }
}
