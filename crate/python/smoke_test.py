"""Smoke test for the rindler extension module.

Build and install it first:

    pip install -e crates/py --no-build-isolation
    python python/smoke_test.py
"""

import cmath
import math

import numpy as np

import rindler

HBAR = 1.054_571_817e-34
K_B = 1.380_649e-23


def close(a, b, tol):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def fidelity_laws():
    alpha, beta = 0.6, 0.8j
    for r in (0.0, 0.5, 1.0):
        f = rindler.fidelity("bosonic", r, alpha, beta, n_max=30)
        close(f.corrected, math.cosh(r) ** -6, 1e-9)
        close(rindler.fidelity_closed_form("bosonic", r), math.cosh(r) ** -6, 1e-15)
    f = rindler.fidelity("fermionic", math.pi / 4, alpha, beta, outcome="11", n_max=1)
    close(f.corrected, 0.5, 1e-12)


def receiver_state():
    r = 0.4
    rho = rindler.rob_state("bosonic", r, 1.0, 1.0j, outcome="01", n_max=6)
    close(rho.trace() + rho.truncation_deficit, 1.0, 1e-12)
    p, brute = rindler.rob_state_from_protocol("bosonic", r, 1.0, 1.0j, outcome="01", n_max=6)
    close(p, 0.25, 1e-12)
    worst = 0.0
    for bra in rho.basis:
        for ket in rho.basis:
            worst = max(worst, abs(rho.element(bra, ket) - brute.element(bra, ket)))
    close(worst, 0.0, 1e-10)

    # entropy against numpy
    dense = np.array(rho.to_dense())
    w = np.linalg.eigvalsh(dense)
    w = w[w > 1e-14]
    close(rho.entropy(), float(-(w * np.log2(w)).sum()), 1e-10)

    back = rindler.DensityOperator.from_json(rho.to_json())
    assert back.max_abs_diff(rho) == 0.0
    sectors = dict(rho.sector_weights())
    close(sectors[1], math.cosh(r) ** -6, 1e-15)


def entropy_gain():
    for r in (0.0, 0.3, math.pi / 4):
        close(rindler.info_gain("fermionic", r).delta, math.cos(r) ** 2, 1e-10)
        close(rindler.info_gain_numeric("fermionic", r, 1), math.cos(r) ** 2, 1e-10)
    g = rindler.info_gain("bosonic", 1.0)
    assert g.tail < 1e-8
    close(g.delta, rindler.info_gain_numeric("bosonic", 1.0, 40), 1e-6)
    close(rindler.info_gain("bosonic", 0.0).delta, 1.0, 1e-12)
    close(rindler.bosonic_gain_limit(), 1 - 1 / (2 * math.log(2)), 1e-15)
    assert 0.0 <= rindler.five_state_model(0.5) <= 1.0


def down_conversion():
    r, phi, omega = 0.7, 0.4, 1e10
    s = rindler.SqueezeMatrix.two_mode(r, phi)
    assert s.is_valid() and max(s.residuals()) < 1e-12
    amps = s.vacuum_amplitudes(5)
    q = cmath.exp(1j * phi) * math.tanh(r)
    for n, a in enumerate(amps):
        close(abs(a - q**n / math.cosh(r)), 0.0, 1e-14)
    t = HBAR * omega / (2 * K_B * math.log(1 / math.tanh(r)))
    close(s.unruh_temperature(omega) / t, 1.0, 1e-12)
    assert rindler.SqueezeMatrix.from_s11_s21(1.0, 0.0).unruh_temperature(omega) == 0.0
    try:
        rindler.SqueezeMatrix.from_s11_s21(1.0, 2.0).vacuum_amplitudes(3)
    except ValueError:
        pass
    else:
        raise AssertionError("non-normalizable matrix accepted")


def conversions():
    big_omega = 0.5
    r = rindler.squeeze_parameter(1.0, big_omega, "bosonic", natural=True)
    close(math.tanh(r), math.exp(-math.pi * big_omega), 1e-15)
    rf = rindler.squeeze_parameter(1.0, big_omega, "fermionic", natural=True)
    close(math.tan(rf), math.exp(-math.pi * big_omega), 1e-15)
    close(rindler.unruh_temperature(2 * math.pi, natural=True), 1.0, 1e-15)
    try:
        rindler.rob_state("fermionic", 1.0, 1.0, 0.0)
    except ValueError:
        pass
    else:
        raise AssertionError("fermionic r > pi/4 accepted")


if __name__ == "__main__":
    for check in (fidelity_laws, receiver_state, entropy_gain, down_conversion, conversions):
        check()
        print(f"ok  {check.__name__}")
    print(f"rindler {rindler.__version__}: all smoke checks passed")
