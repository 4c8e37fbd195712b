import dataclasses
import math

import numpy as np
import pytest
from scipy import integrate

import oracle
from lifshitz_cp.asymptotics import dielectric_free_energy_asym
from lifshitz_cp.constants import CONSTANTS
from lifshitz_cp.errors import ConvergenceError
from lifshitz_cp.lifshitz import (EvaluationPoint, QuadratureSpec, energy_T0, entropy,
                                  free_energy, matsubara_grid, tail_bound)
from lifshitz_cp.materials import FIXTURES
from lifshitz_cp.response import (AtomModel, Oscillator, OscillatorModel, Plasma, PlasmaModel)

UM = 1e-4


def _pt_at_tau(a, tau):
    return EvaluationPoint(a, tau * EvaluationPoint(a, 1.0).T_eff / (2 * math.pi))


def test_evaluation_point_scales():
    pt = EvaluationPoint(1e-4, 300.0)
    tau = 4 * math.pi * CONSTANTS.k_B * 300.0 * 1e-4 / CONSTANTS.hbar_c
    assert pt.tau == pytest.approx(tau, rel=1e-15)
    assert pt.tau == pytest.approx(2 * math.pi * pt.T / pt.T_eff, rel=1e-14)
    with pytest.raises(ValueError):
        EvaluationPoint(-1.0, 300.0)
    with pytest.raises(ValueError):
        EvaluationPoint(1e-4, -1.0)


def test_matsubara_grid():
    pt = EvaluationPoint(1e-4, 300.0)
    z = matsubara_grid(pt, 5)
    assert z[0] == 0.0
    assert z[2] == 2 * z[1]
    # independent conversion: 4 pi k T a / (hbar c) in SI
    from scipy import constants as si
    assert z[1] == pytest.approx(4 * math.pi * si.k * 300 * 1e-6 / (si.hbar * si.c), rel=1e-14)
    with pytest.raises(ValueError):
        matsubara_grid(pt, -1)


@pytest.mark.parametrize("name", FIXTURES)
def test_oracle_grid(name, walls, atom):
    wall = walls[name]
    for a in (0.5, 1.0, 2.0):
        for T in (77.0, 300.0, 600.0):
            F = free_energy(wall, atom, EvaluationPoint(a * UM, T)).free_energy
            ref = oracle.free_energy(name, a * UM, T)
            assert F == pytest.approx(ref, rel=1e-8), (a, T)


def test_zero_polarizability_and_vacuum(walls):
    pt = EvaluationPoint(1e-4, 300.0)
    assert free_energy(walls["sio2"], AtomModel(0.0, 0.06), pt).free_energy == 0.0
    vac = Oscillator(OscillatorModel(()))
    assert free_energy(vac, AtomModel(1e-22, 0.06), pt).free_energy == 0.0
    assert energy_T0(vac, AtomModel(1e-22, 0.06), 1e-4).energy_T0 == 0.0
    assert energy_T0(walls["sio2"], AtomModel(0.0, 0.0), 1e-4).energy_T0 == 0.0


def test_attractive_and_monotone_in_separation(walls, atom):
    for name in ("sio2", "sio2_dc", "gold_plasma", "sio2_screened_persistent"):
        F = [free_energy(walls[name], atom, EvaluationPoint(a * UM, 300.0)).free_energy
             for a in (0.3, 0.6, 1.2, 2.4, 4.8)]
        assert all(f < 0 for f in F)
        assert all(abs(f1) > abs(f2) for f1, f2 in zip(F, F[1:])), name


def test_deterministic(walls, atom):
    pt = EvaluationPoint(0.7 * UM, 123.0)
    r1 = free_energy(walls["gold_screened"], atom, pt)
    r2 = free_energy(walls["gold_screened"], atom, pt)
    assert r1.free_energy == r2.free_energy
    assert r1.diagnostics["l_max"] == r2.diagnostics["l_max"]


def test_diagnostics(walls, atom):
    res = free_energy(walls["si"], atom, EvaluationPoint(UM, 300.0))
    d = res.diagnostics
    assert d["l_max"] >= 64 / d["tau"] - 1
    assert d["quadrature_error"] <= 1e-10 * abs(res.free_energy)
    assert d["tail_bound"] <= 1e-10 * abs(res.free_energy)
    assert d["backend"] in ("cython", "python")


def test_tail_bound_dominates_true_tail():
    # ideal metal, beta = 0: every term is 2 alpha e^{-z}(z^2 + 2z + 2) * 2 / 2
    tau, L = 0.3, 40
    terms = [2 * math.exp(-z) * (z * z + 2 * z + 2) for z in tau * np.arange(L + 1, 5000)]
    assert math.fsum(terms) <= tail_bound(1.0, (L + 1) * tau, tau)


def test_lmax_cap_raises(walls, atom):
    with pytest.raises(ConvergenceError) as exc:
        free_energy(walls["sio2"], atom, EvaluationPoint(UM, 300.0), QuadratureSpec(lmax=3))
    assert exc.value.diagnostics["l_max"] == 3


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(lmax=-1)


def test_ideal_metal_energy():
    atom = AtomModel(1e-22, 0.0)
    wall = Plasma(PlasmaModel(1e30))
    for a in (0.5 * UM, 2 * UM):
        E = energy_T0(wall, atom, a).energy_T0
        exact = -3 * CONSTANTS.hbar_c * atom.alpha0 / (8 * math.pi * a**4)
        assert E == pytest.approx(exact, rel=1e-8)


def test_ideal_metal_energy_with_dispersion():
    """Double integral reduces to one for r_TM = -r_TE = 1."""
    atom = AtomModel(1e-22, 0.06)
    a = UM
    f = lambda z: atom.alpha0 / (1 + (0.06 * z) ** 2) * math.exp(-z) * 2 * (z * z + 2 * z + 2)
    ref = -CONSTANTS.hbar_c / (32 * math.pi * a**4) * integrate.quad(f, 0, np.inf,
                                                                     epsrel=1e-13)[0]
    E = energy_T0(Plasma(PlasmaModel(1e30)), atom, a).energy_T0
    assert E == pytest.approx(ref, rel=1e-8)


def test_low_temperature_limit_is_energy(walls, atom):
    a = UM
    q = QuadratureSpec(tol=1e-13)
    for name, eps0 in (("sio2", 3.81), ("si", 11.67)):
        E = energy_T0(walls[name], atom, a, q).energy_T0
        ratios = []
        for tau in (0.05, 0.02):
            pt = _pt_at_tau(a, tau)
            F = free_energy(walls[name], atom, pt, q).free_energy
            ratios.append((F - E) / (dielectric_free_energy_asym(eps0, atom, pt, E) - E))
        # the quartic law is approached from below as tau -> 0
        assert 0.9 < ratios[0] < ratios[1] < 1.0, name


def test_sigma_magnitude_independence_of_static_term(walls, atom):
    pt = EvaluationPoint(UM, 300.0)
    base = walls["sio2_dc"]
    terms = set()
    for s in (1e-9, 1e-3, 1e2, 1e12):
        law = dataclasses.replace(base.conductivity, sigma_ref=s)
        wall = dataclasses.replace(base, conductivity=law)
        terms.add(free_energy(wall, atom, pt).diagnostics["zero_frequency_term"])
    assert len(terms) == 1
    insulating = free_energy(walls["sio2"], atom, pt).diagnostics["zero_frequency_term"]
    r0 = 2.81 / 4.81
    assert terms.pop() == pytest.approx(insulating / r0, rel=1e-14)


def test_entropy_matches_oracle_difference(walls, atom):
    pt = EvaluationPoint(UM, 300.0)
    S = entropy(walls["sio2"], atom, pt).entropy
    h = 1.0
    ref = -(oracle.free_energy("sio2", UM, 301.0) - oracle.free_energy("sio2", UM, 299.0)) / (2 * h)
    assert S == pytest.approx(ref, rel=1e-4)


def test_entropy_needs_positive_temperature(walls, atom):
    with pytest.raises(ValueError):
        entropy(walls["sio2"], atom, EvaluationPoint(UM, 0.0))
    with pytest.raises(ValueError):
        free_energy(walls["sio2"], atom, EvaluationPoint(UM, 0.0))
