//! Acceleration, squeezing and Rindler kinematics.
//!
//! The dimensionless Rindler frequency is `Omega = omega / (a / c)`. Bosonic
//! modes squeeze with `tanh r = exp(-pi Omega)`, fermionic modes with
//! `tan r = exp(-pi Omega)`, which confines fermionic `r` to `[0, pi/4]`.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Statistics;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// SI: kelvin, m/s^2, rad/s.
    Si,
    /// hbar = c = k_B = 1.
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccelerationParams {
    /// Proper acceleration.
    pub a: f64,
    /// Rindler mode frequency.
    pub omega: f64,
    pub c: f64,
}

impl AccelerationParams {
    /// SI parameters with `c` at its defined value.
    pub fn new(a: f64, omega: f64) -> Result<Self> {
        Self::with_c(a, omega, C_LIGHT)
    }

    pub fn natural(a: f64, omega: f64) -> Result<Self> {
        Self::with_c(a, omega, 1.0)
    }

    pub fn with_c(a: f64, omega: f64, c: f64) -> Result<Self> {
        if !(a >= 0.0) {
            return Err(Error::InvalidParameter(format!("acceleration a = {a} must be >= 0")));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("frequency omega = {omega} must be > 0")));
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c = {c} must be > 0")));
        }
        Ok(Self { a, omega, c })
    }

    /// `omega / (a / c)`; infinite at zero acceleration.
    pub fn dimensionless_frequency(&self) -> f64 {
        if self.a == 0.0 {
            f64::INFINITY
        } else {
            self.omega * self.c / self.a
        }
    }
}

/// Squeeze parameter tagged with the statistics it was derived for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParameter {
    pub r: f64,
    pub statistics: Statistics,
    /// Dimensionless frequency `Omega` when `r` came from an acceleration.
    pub omega_dimensionless: Option<f64>,
}

impl SqueezeParameter {
    pub fn new(r: f64, statistics: Statistics) -> Result<Self> {
        check_r(r, statistics)?;
        Ok(Self { r, statistics, omega_dimensionless: None })
    }

    pub fn bosonic(r: f64) -> Result<Self> {
        Self::new(r, Statistics::Bosonic)
    }

    pub fn fermionic(r: f64) -> Result<Self> {
        Self::new(r, Statistics::Fermionic)
    }

    /// `exp(-2 pi Omega)`: `tanh^2 r` for bosons, `tan^2 r` for fermions.
    pub fn boltzmann_ratio(&self) -> f64 {
        match self.statistics {
            Statistics::Bosonic => self.r.tanh().powi(2),
            Statistics::Fermionic => self.r.tan().powi(2),
        }
    }

    /// Inverts the squeezing relation back to `Omega`.
    pub fn dimensionless_frequency(&self) -> f64 {
        let e = match self.statistics {
            Statistics::Bosonic => self.r.tanh(),
            Statistics::Fermionic => self.r.tan(),
        };
        -e.ln() / PI
    }
}

/// Range check for `r` under the given statistics.
pub fn check_r(r: f64, statistics: Statistics) -> Result<()> {
    let ok = match statistics {
        Statistics::Bosonic => r >= 0.0 && r.is_finite(),
        Statistics::Fermionic => (0.0..=FRAC_PI_4).contains(&r),
    };
    if ok {
        Ok(())
    } else {
        let range = match statistics {
            Statistics::Bosonic => "[0, inf)",
            Statistics::Fermionic => "[0, pi/4]",
        };
        Err(Error::InvalidParameter(format!("{statistics} squeeze parameter r = {r} outside {range}")))
    }
}

/// `r = artanh(exp(-pi Omega))`.
pub fn squeeze_bosonic(params: &AccelerationParams) -> Result<SqueezeParameter> {
    let omega = params.dimensionless_frequency();
    let r = (-PI * omega).exp().atanh();
    Ok(SqueezeParameter { r, statistics: Statistics::Bosonic, omega_dimensionless: Some(omega) })
}

/// `r = arctan(exp(-pi Omega))`.
pub fn squeeze_fermionic(params: &AccelerationParams) -> Result<SqueezeParameter> {
    let omega = params.dimensionless_frequency();
    let r = (-PI * omega).exp().atan();
    Ok(SqueezeParameter { r, statistics: Statistics::Fermionic, omega_dimensionless: Some(omega) })
}

pub fn squeeze(params: &AccelerationParams, statistics: Statistics) -> Result<SqueezeParameter> {
    match statistics {
        Statistics::Bosonic => squeeze_bosonic(params),
        Statistics::Fermionic => squeeze_fermionic(params),
    }
}

/// `T_U = hbar a / (2 pi c k_B)`; in natural units `a / (2 pi)`.
pub fn unruh_temperature(params: &AccelerationParams, units: Units) -> f64 {
    match units {
        Units::Si => HBAR * params.a / (2.0 * PI * params.c * K_B),
        Units::Natural => params.a / (2.0 * PI),
    }
}

/// Point `(t, z)` on the hyperbola of proper acceleration `a` at proper time
/// `tau` (c = 1).
pub fn worldline(tau: f64, a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("worldline needs a > 0, got {a}")));
    }
    let x = a * tau;
    Ok((x.sinh() / a, x.cosh() / a))
}

/// `(t, z) = (zeta sinh eta, zeta cosh eta)`. Positive `zeta` lands in the
/// right wedge, negative in the left.
pub fn rindler_to_minkowski(eta: f64, zeta: f64) -> (f64, f64) {
    (zeta * eta.sinh(), zeta * eta.cosh())
}

/// `dz^2 - dt^2`.
pub fn minkowski_interval(dt: f64, dz: f64) -> f64 {
    dz * dz - dt * dt
}

/// `dzeta^2 - zeta^2 deta^2`.
pub fn rindler_interval(zeta: f64, deta: f64, dzeta: f64) -> f64 {
    dzeta * dzeta - zeta * zeta * deta * deta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_acceleration_gives_zero_squeezing() {
        let p = AccelerationParams::new(0.0, 1e9).unwrap();
        assert_eq!(squeeze_bosonic(&p).unwrap().r, 0.0);
        assert_eq!(squeeze_fermionic(&p).unwrap().r, 0.0);
        assert_eq!(unruh_temperature(&p, Units::Si), 0.0);
    }

    #[test]
    fn half_boltzmann_factor() {
        // exp(-pi Omega) = 1/2  =>  r = artanh(1/2) = ln(3)/2
        let omega = 2f64.ln() / PI;
        let p = AccelerationParams::natural(1.0, omega).unwrap();
        let r = squeeze_bosonic(&p).unwrap().r;
        assert!((r - 0.549_306_144_334_054_8).abs() < 1e-15);
    }

    #[test]
    fn small_r_regime_tracks_the_exponential() {
        let p = AccelerationParams::natural(1.0, 3.0).unwrap();
        let r = squeeze_bosonic(&p).unwrap().r;
        let e = (-3.0 * PI).exp();
        assert!((r - e).abs() / e < 1e-7);
    }

    #[test]
    fn infinite_acceleration_saturates_fermions() {
        let p = AccelerationParams::natural(1e300, 1e-300).unwrap();
        let r = squeeze_fermionic(&p).unwrap().r;
        assert!((r - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn negative_acceleration_is_rejected() {
        assert!(AccelerationParams::new(-1.0, 1.0).is_err());
        assert!(AccelerationParams::new(1.0, 0.0).is_err());
    }

    #[test]
    fn terrestrial_acceleration_frequency_scale() {
        let p = AccelerationParams::new(9.81, 1.0).unwrap();
        let a_over_c = p.a / p.c;
        assert!(a_over_c > 1e-8 && a_over_c < 1e-7);
        let t = unruh_temperature(&p, Units::Si);
        assert!((t - 3.98e-20).abs() < 1e-21);
    }

    #[test]
    fn temperature_is_linear_in_acceleration() {
        let t1 = unruh_temperature(&AccelerationParams::new(5.0, 1.0).unwrap(), Units::Si);
        let t2 = unruh_temperature(&AccelerationParams::new(10.0, 1.0).unwrap(), Units::Si);
        assert!((t2 - 2.0 * t1).abs() <= 1e-15 * t2);
        let tn = unruh_temperature(&AccelerationParams::natural(2.0 * PI, 1.0).unwrap(), Units::Natural);
        assert!((tn - 1.0).abs() < 1e-15);
    }

    #[test]
    fn worldline_starts_at_inverse_acceleration() {
        assert_eq!(worldline(0.0, 2.0).unwrap(), (0.0, 0.5));
        assert!(worldline(1.0, 0.0).is_err());
    }

    #[test]
    fn worldline_approaches_the_light_cone() {
        let a = 1.5;
        let mut last = f64::INFINITY;
        for tau in [1.0, 4.0, 6.0, 8.0] {
            let (t, z) = worldline(tau, a).unwrap();
            let gap = z - t;
            assert!(gap > 0.0 && gap < last);
            assert!((gap - (-a * tau).exp() / a).abs() < 1e-9 * z);
            last = gap;
        }
    }

    #[test]
    fn rindler_origin_and_wedges() {
        assert_eq!(rindler_to_minkowski(0.0, 1.0), (0.0, 1.0));
        for &(eta, zeta) in &[(0.3, 2.0), (-1.7, 0.4), (2.5, 1.0)] {
            let (t, z) = rindler_to_minkowski(eta, zeta);
            assert!(z > t.abs());
            let (t, z) = rindler_to_minkowski(eta, -zeta);
            assert!(-z > t.abs());
        }
    }

    #[test]
    fn parameter_ranges() {
        assert!(SqueezeParameter::fermionic(FRAC_PI_4).is_ok());
        assert!(SqueezeParameter::fermionic(0.8).is_err());
        assert!(SqueezeParameter::bosonic(-0.1).is_err());
        assert!(SqueezeParameter::bosonic(5.0).is_ok());
    }
}
