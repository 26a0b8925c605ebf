use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use proptest::prelude::*;

use rindler_core::entropy::{
    five_state_model, info_gain, info_gain_spectral, post_measurement_state, pre_measurement_state,
};
use rindler_core::fock::{spectrum, von_neumann_entropy};
use rindler_core::pdc::{invert_bogoliubov, pdc_vacuum, photon_number_difference, validate_bogoliubov, SqueezeMatrix};
use rindler_core::relativity::{squeeze_bosonic, squeeze_fermionic, worldline, AccelerationParams};
use rindler_core::teleport::{
    apply_correction, conditional_amplitudes, rob_state_bosonic_bruteforce, rob_state_bosonic_closed,
    rob_state_fermionic, rob_state_fermionic_bruteforce, teleport_fidelity, BellOutcome, LogicalQubit,
};
use rindler_core::vacuum::{bosonic_one_particle, bosonic_vacuum, minkowski_creation, ModePair};
use rindler_core::{DensityOperator, FockBasisState, ModeLabel, StateVector, Statistics};

fn modes(n: usize, statistics: Statistics) -> Vec<ModeLabel> {
    (0..n).map(|i| ModeLabel::new(format!("m{i}"), statistics)).collect()
}

/// Random normalized state over up to four modes.
fn state(statistics: Statistics) -> impl Strategy<Value = StateVector> {
    let cap_range = match statistics {
        Statistics::Bosonic => 1u32..=6,
        Statistics::Fermionic => 1u32..=1,
    };
    (1usize..=4, cap_range).prop_flat_map(move |(n_modes, n_max)| {
        let cap = statistics.cap(n_max);
        let ket = prop::collection::vec(0..=cap, n_modes);
        prop::collection::vec((ket, -1.0f64..1.0, -1.0f64..1.0), 1..10).prop_filter_map(
            "zero state",
            move |terms| {
                let s = StateVector::from_amplitudes(
                    modes(n_modes, statistics),
                    n_max,
                    terms.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))),
                )
                .ok()?;
                if s.norm() < 1e-3 {
                    return None;
                }
                s.normalize().ok()
            },
        )
    })
}

fn qubit() -> impl Strategy<Value = LogicalQubit> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_filter_map("zero qubit", |(a, b, c, d)| {
        let (x, y) = (Complex64::new(a, b), Complex64::new(c, d));
        if x.norm() + y.norm() < 1e-3 {
            return None;
        }
        LogicalQubit::normalized(x, y).ok()
    })
}

fn outcome() -> impl Strategy<Value = BellOutcome> {
    (0u8..2, 0u8..2).prop_map(|(i, j)| BellOutcome::new(i, j).unwrap())
}

/// Single-mode mixture `sum_k w_k |psi_k><psi_k|` of dimension `d`.
fn mixture(d: usize) -> impl Strategy<Value = DensityOperator> {
    prop::collection::vec((0.0f64..1.0, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d)), 1..4).prop_filter_map(
        "degenerate mixture",
        move |parts| {
            let mode = vec![ModeLabel::bosonic("a")];
            let n_max = d as u32 - 1;
            let basis: Vec<FockBasisState> = (0..d as u32).map(|n| FockBasisState::new([n])).collect();
            let mut acc: Option<DensityOperator> = None;
            let mut total = 0.0;
            for (w, amps) in parts {
                let s = StateVector::from_amplitudes(
                    mode.clone(),
                    n_max,
                    amps.into_iter().enumerate().map(|(n, (re, im))| (vec![n as u32], Complex64::new(re, im))),
                )
                .ok()?
                .normalize()
                .ok()?;
                let rho = DensityOperator::from_pure(&s).ok()?.restrict_to(basis.clone()).ok()?.scale(w);
                total += w;
                acc = Some(match acc {
                    None => rho,
                    Some(a) => a.add(&rho).ok()?,
                });
            }
            if total < 1e-3 {
                return None;
            }
            Some(acc?.scale(1.0 / total))
        },
    )
}

fn entropy_sorted(rho: &DensityOperator) -> Vec<f64> {
    spectrum(rho).unwrap().eigenvalues
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_conserves_trace(s in state(Statistics::Bosonic), mask in 1u8..16) {
        let names = s.mode_names();
        let keep: Vec<&str> = names.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, n)| *n).collect();
        prop_assume!(!keep.is_empty());
        let rho = DensityOperator::from_pure(&s).unwrap();
        let reduced = rho.partial_trace(&keep).unwrap();
        prop_assert!((reduced.trace() - rho.trace()).abs() < 1e-12);
        prop_assert!(reduced.hermiticity_deviation().0 < 1e-12);
        let direct = s.reduced_density(&keep).unwrap();
        prop_assert!(reduced.max_abs_diff(&direct).unwrap() < 1e-12);
    }

    #[test]
    fn create_then_annihilate_counts(n_max in 1u32..10, n in 0u32..9) {
        prop_assume!(n < n_max);
        let m = vec![ModeLabel::bosonic("a")];
        let ket = StateVector::basis_ket(m, n_max, &[n]).unwrap();
        let back = ket.apply_creation("a").unwrap().apply_annihilation("a").unwrap();
        let expect = ket.scale(Complex64::new(n as f64 + 1.0, 0.0));
        prop_assert!(back.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn fermionic_double_creation_vanishes(s in state(Statistics::Fermionic), which in 0usize..4) {
        let names = s.mode_names();
        let mode = names[which % names.len()];
        prop_assert!(s.apply_creation(mode).unwrap().apply_creation(mode).unwrap().is_zero());
    }

    #[test]
    fn tensor_norm_multiplies(a in state(Statistics::Bosonic), b in state(Statistics::Bosonic), ca in 0.1f64..2.0, cb in 0.1f64..2.0) {
        let a = a.scale(Complex64::new(ca, 0.0));
        let relabeled: Vec<ModeLabel> = b.modes().iter().map(|m| ModeLabel::bosonic(format!("{}b", m.name))).collect();
        let b = StateVector::from_amplitudes(relabeled, b.n_max(), b.iter().map(|(k, v)| (k.0.clone(), v * cb))).unwrap();
        let t = a.tensor(&b).unwrap();
        prop_assert!((t.norm() - a.norm() * b.norm()).abs() < 1e-12 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn pure_states_have_unit_purity(s in state(Statistics::Bosonic)) {
        let rho = DensityOperator::from_pure(&s).unwrap();
        prop_assert!((rho.purity() - 1.0).abs() < 1e-12);
        prop_assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn entropy_ignores_basis_order(rho in mixture(5), perm in Just((0u32..5).collect::<Vec<_>>()).prop_shuffle()) {
        let basis = perm.into_iter().map(|n| FockBasisState::new([n])).collect();
        let shuffled = rho.restrict_to(basis).unwrap();
        let (a, b) = (von_neumann_entropy(&rho).unwrap(), von_neumann_entropy(&shuffled).unwrap());
        prop_assert!((a - b).abs() < 1e-10);
        let (ea, eb) = (entropy_sorted(&rho), entropy_sorted(&shuffled));
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_is_additive(a in mixture(3), b in mixture(2)) {
        // independent Kronecker-product oracle
        let modes = vec![ModeLabel::bosonic("a"), ModeLabel::bosonic("b")];
        let mut basis = Vec::new();
        for i in 0..3u32 {
            for j in 0..2u32 {
                basis.push(FockBasisState::new([i, j]));
            }
        }
        let mut entries = BTreeMap::new();
        for i in 0..6 {
            for j in 0..6 {
                let v = a.get(i / 2, j / 2) * b.get(i % 2, j % 2);
                entries.insert((i, j), v);
            }
        }
        let ab = DensityOperator::from_entries(modes, 2, basis, entries, 0.0).unwrap();
        let s = von_neumann_entropy(&ab).unwrap();
        let sum = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
        prop_assert!((s - sum).abs() < 1e-10);
    }

    #[test]
    fn json_round_trip_is_exact(s in state(Statistics::Bosonic)) {
        let rho = DensityOperator::from_pure(&s).unwrap();
        let back = DensityOperator::from_json(&rho.to_json()).unwrap();
        prop_assert_eq!(&back, &rho);
        let sback = StateVector::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(sback, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn squeezing_is_monotone_in_acceleration(omega in 1.0f64..1e3, a1 in 0.0f64..1e4, a2 in 0.0f64..1e4) {
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let p_lo = AccelerationParams::natural(lo, omega).unwrap();
        let p_hi = AccelerationParams::natural(hi, omega).unwrap();
        prop_assert!(squeeze_bosonic(&p_lo).unwrap().r <= squeeze_bosonic(&p_hi).unwrap().r);
        let (f_lo, f_hi) = (squeeze_fermionic(&p_lo).unwrap().r, squeeze_fermionic(&p_hi).unwrap().r);
        prop_assert!(f_lo <= f_hi && f_hi <= FRAC_PI_4);
    }

    #[test]
    fn squeeze_parameter_identities(omega in 1e-3f64..5.0) {
        let p = AccelerationParams::natural(1.0, omega).unwrap();
        let rb = squeeze_bosonic(&p).unwrap().r;
        let rf = squeeze_fermionic(&p).unwrap().r;
        let boltz = (-PI * omega).exp();
        prop_assert!((rb.cosh().powi(2) - rb.sinh().powi(2) - 1.0).abs() < 1e-12 * rb.cosh().powi(2));
        prop_assert!((rb.tanh() - boltz).abs() < 1e-12);
        prop_assert!((rb.cosh().powi(-2) - (1.0 - (-2.0 * PI * omega).exp())).abs() < 1e-12);
        prop_assert!((rf.tan() - boltz).abs() < 1e-12);
        prop_assert!((rf.cos().powi(2) + rf.sin().powi(2) - 1.0).abs() < 1e-15);
        prop_assert!((rf.cos().powi(-2) - (1.0 + (-2.0 * PI * omega).exp())).abs() < 1e-12);
    }

    #[test]
    fn worldline_stays_on_hyperbola(tau in -5.0f64..5.0, a in 0.1f64..10.0) {
        let (t, z) = worldline(tau, a).unwrap();
        // rounding of z and t is relative to their size, so bound by z^2 + t^2
        let residual = z * z - t * t - 1.0 / (a * a);
        prop_assert!(residual.abs() <= 8.0 * f64::EPSILON * (z * z + t * t));
    }

    #[test]
    fn bogoliubov_creation_builds_one_particle(r in 0.0f64..2.0) {
        let pair = ModePair::named("R", Statistics::Bosonic);
        let n_max = 50;
        let built = minkowski_creation(&bosonic_vacuum(r, &pair, n_max).unwrap(), &pair, r).unwrap();
        let closed = bosonic_one_particle(r, &pair, n_max).unwrap();
        prop_assert!(built.max_abs_diff(&closed).unwrap() < 1e-12);
    }

    #[test]
    fn two_mode_matrices_are_valid_and_invertible(r in 0.0f64..2.5, phi in -PI..PI) {
        let s = SqueezeMatrix::two_mode(r, phi);
        let scale = r.cosh().powi(2);
        prop_assert!(validate_bogoliubov(&s).iter().all(|&x| x < 1e-12 * scale));
        let t = invert_bogoliubov(&s);
        prop_assume!(t.is_ok());
        let id = t.unwrap().compose(&s).max_abs_diff(&SqueezeMatrix::identity());
        prop_assert!(id < 1e-12 * scale);
    }

    #[test]
    fn pdc_pairs_conserve_photon_difference(r in 0.0f64..2.0, phi in -PI..PI) {
        let s = SqueezeMatrix::two_mode(r, phi);
        prop_assume!(validate_bogoliubov(&s).iter().all(|&x| x < 1e-12));
        let v = pdc_vacuum(&s, 20).unwrap();
        prop_assert!(photon_number_difference(&v).unwrap().abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_and_bruteforce_receiver_states_agree(r in 0.0f64..2.0, psi in qubit(), o in outcome()) {
        let amps = conditional_amplitudes(&psi, o);
        let closed = rob_state_bosonic_closed(&amps, r, 12).unwrap();
        let brute = rob_state_bosonic_bruteforce(&amps, r, 12).unwrap();
        prop_assert!(closed.max_abs_diff(&brute).unwrap() < 1e-10);
        let rf = r * FRAC_PI_4 / 2.0;
        let closed = rob_state_fermionic(&amps, rf).unwrap();
        let brute = rob_state_fermionic_bruteforce(&amps, rf).unwrap();
        prop_assert!(closed.max_abs_diff(&brute).unwrap() < 1e-14);
    }

    #[test]
    fn receiver_states_are_sector_diagonal(r in 0.0f64..2.0, psi in qubit(), o in outcome()) {
        let rho = rob_state_bosonic_closed(&conditional_amplitudes(&psi, o), r, 10).unwrap();
        for (i, j, v) in rho.entries() {
            let (ni, nj) = (rho.basis()[i].total(), rho.basis()[j].total());
            prop_assert!(ni == nj || v.norm() == 0.0);
        }
        prop_assert_eq!(rho.get(0, 0).norm(), 0.0);
    }

    #[test]
    fn correction_preserves_spectrum(r in 0.0f64..1.5, psi in qubit(), o in outcome()) {
        let rho = rob_state_bosonic_closed(&conditional_amplitudes(&psi, o), r, 6).unwrap();
        let fixed = apply_correction(&rho, o).unwrap();
        let (a, b) = (entropy_sorted(&rho), entropy_sorted(&fixed));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!((rho.trace() - fixed.trace()).abs() < 1e-14);
    }

    #[test]
    fn fidelity_ignores_the_input(r in 0.0f64..2.0, psi in qubit()) {
        let f = teleport_fidelity(Statistics::Bosonic, r, &psi, 40).unwrap();
        prop_assert!((f.corrected - r.cosh().powi(-6)).abs() < 1e-9);
        let rf = r * FRAC_PI_4 / 2.0;
        let f = teleport_fidelity(Statistics::Fermionic, rf, &psi, 1).unwrap();
        prop_assert!((f.corrected - rf.cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn information_gain_is_a_fraction_of_a_bit(r in 0.0f64..3.0) {
        let g = info_gain_spectral(Statistics::Bosonic, r, 400).unwrap().delta;
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&g));
        let f = five_state_model(r).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn fermionic_entropy_identity(r in 0.0f64..FRAC_PI_4) {
        let g = info_gain(Statistics::Fermionic, r, 1).unwrap();
        prop_assert!((g - r.cos().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn pre_measurement_sectors_are_maximally_mixed(r in 0.05f64..1.5) {
        let pre = pre_measurement_state(Statistics::Bosonic, r, &LogicalQubit::plus(), 8).unwrap();
        let mut by_sector: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for (i, k) in pre.basis().iter().enumerate() {
            by_sector.entry(k.total()).or_default().push(pre.get(i, i).re);
        }
        for (_, vals) in by_sector {
            let first = vals[0];
            prop_assert!(vals.iter().all(|v| (v - first).abs() < 1e-15));
        }
        let post = post_measurement_state(Statistics::Bosonic, r, 8).unwrap();
        prop_assert!((pre.trace() - post.trace()).abs() < 1e-13);
    }
}
