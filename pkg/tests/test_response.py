import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import constants as si

from lifshitz_cp.constants import CONSTANTS
from lifshitz_cp.response import (ActivatedLaw, AtomModel, ConductivityLaw, ConstantLaw,
                                  DecompositionMode, OscillatorModel, PlasmaModel, Resonance,
                                  ScreeningSpec, Statistics, TabulatedLaw, alpha_dynamic,
                                  dc_term, eps_core, eps_drude, eps_plasma, eps_with_dc,
                                  permittivities, screening_kappa, sigma_dc, susceptibilities)

EV = CONSTANTS.ev_to_rad_s(1.0)


def test_ev_conversion_matches_scipy():
    assert math.isclose(EV, si.eV / si.hbar, rel_tol=1e-15)


def test_eps_core_static_limit():
    m = OscillatorModel((Resonance(2.0, 1.0), Resonance(3.0, 2.0)))
    assert eps_core(m, 0.0) == pytest.approx(1.0 + 2.0 + 0.75, rel=1e-15)
    assert m.eps0 == pytest.approx(3.75, rel=1e-15)


def test_eps_core_empty_is_vacuum():
    assert eps_core(OscillatorModel(()), 1e15) == 1.0


def test_eps_core_half_width():
    w = 3e15
    assert eps_core(OscillatorModel((Resonance(w * w, w),)), w) == pytest.approx(1.5, rel=1e-15)


def test_single_reproduces_eps0():
    m = OscillatorModel.single(3.81, 10 * EV)
    assert m.eps0 == pytest.approx(3.81, rel=1e-14)


def test_sigma_dc_activation():
    law = ConductivityLaw(DecompositionMode.ACTIVATION, 1e12, CONSTANTS.ev_to_erg(0.5))
    assert sigma_dc(law, 0.0) == 0.0
    assert sigma_dc(law, 1.0) == 0.0
    flat = ConductivityLaw(DecompositionMode.ACTIVATION, 1e12, 0.0)
    assert sigma_dc(flat, 0.0) == 1e12 and sigma_dc(flat, 77.0) == 1e12


def test_sigma_dc_assembled_at_activation_temperature():
    delta = CONSTANTS.ev_to_erg(0.1)
    T = delta / CONSTANTS.k_B
    law = ConductivityLaw(DecompositionMode.ASSEMBLED, n_law=ConstantLaw(1e18),
                          mu_law=ActivatedLaw(3e4, delta))
    expected = 3e4 * math.exp(-1.0) * 4.80320471e-10 * 1e18
    assert sigma_dc(law, T) == pytest.approx(expected, rel=1e-8)


def test_sigma_dc_rejects_negative_temperature():
    with pytest.raises(ValueError):
        sigma_dc(ConductivityLaw(sigma_ref=1.0), -1.0)


def test_eps_with_dc_zero_conductivity():
    m = OscillatorModel.single(3.81, 10 * EV)
    law = ConductivityLaw(DecompositionMode.ACTIVATION, 0.0, 0.0)
    xi = 0.3 * EV
    assert eps_with_dc(m, law, xi, 300.0) == eps_core(m, xi)


def test_eps_with_dc_small_addition():
    m = OscillatorModel.single(3.81, 10 * EV)
    xi = 0.01 * EV
    sigma = 1e-3 * xi / (4 * math.pi)
    law = ConductivityLaw(DecompositionMode.ACTIVATION, sigma, 0.0, gamma_free=1e6 * xi)
    diff = eps_with_dc(m, law, xi, 300.0) - eps_core(m, xi)
    assert diff == pytest.approx(1e-3, rel=1e-5)


def test_eps_with_dc_high_frequency_suppression():
    m = OscillatorModel.single(3.81, 10 * EV)
    law = ConductivityLaw(DecompositionMode.ACTIVATION, 1e10, 0.0, gamma_free=1e13)
    xi = 1e17
    rel = (eps_with_dc(m, law, xi, 300.0) - eps_core(m, xi)) / eps_core(m, xi)
    assert 0 < rel < 1e-6


def test_eps_with_dc_requires_positive_frequency():
    law = ConductivityLaw(sigma_ref=1.0)
    with pytest.raises(ValueError):
        eps_with_dc(OscillatorModel(()), law, 0.0, 300.0)


def test_plasma_values():
    p = PlasmaModel(9 * EV)
    assert eps_plasma(p, 9 * EV) == pytest.approx(2.0, rel=1e-15)
    assert eps_plasma(p, 1e30) == pytest.approx(1.0, abs=1e-20)


def test_plasma_first_matsubara_frequency():
    T, wp = 300.0, 9.0 * si.eV / si.hbar
    xi1 = 2 * math.pi * si.k * T / si.hbar
    assert eps_plasma(PlasmaModel(9 * EV), xi1) == pytest.approx(1 + (wp / xi1) ** 2, rel=1e-13)


def test_drude_limits_and_value():
    p = PlasmaModel(9 * EV)
    xi = 0.1 * EV
    assert eps_drude(p, 0.0, xi) == eps_plasma(p, xi)
    assert eps_drude(PlasmaModel(EV), EV, EV) == pytest.approx(1.5, rel=1e-15)
    # ratios of energies: the unit conversion cancels
    assert eps_drude(p, 0.035 * EV, xi) == pytest.approx(1 + 81 / (0.1 * 0.135), rel=1e-13)


def test_screening_kappa_scalings():
    spec = ScreeningSpec(Statistics.MAXWELL_BOLTZMANN, ConstantLaw(1e18), 3.81)
    spec2 = ScreeningSpec(Statistics.MAXWELL_BOLTZMANN, ConstantLaw(2e18), 3.81)
    assert screening_kappa(spec2, 300) / screening_kappa(spec, 300) == pytest.approx(math.sqrt(2))
    zero = ScreeningSpec(Statistics.MAXWELL_BOLTZMANN, ConstantLaw(0.0), 3.81)
    assert screening_kappa(zero, 300) == 0.0
    assert screening_kappa(spec, 1e-4) > 100 * screening_kappa(spec, 10.0)
    with pytest.raises(ValueError):
        screening_kappa(spec, 0.0)


def test_debye_hueckel_value_si_units():
    # R_DH = sqrt(eps eps_vac k T / (e^2 n)) in SI
    n_si, T, eps0 = 1e24, 300.0, 3.81
    R = math.sqrt(eps0 * si.epsilon_0 * si.k * T / (si.e**2 * n_si))
    spec = ScreeningSpec(Statistics.MAXWELL_BOLTZMANN, ConstantLaw(n_si * 1e-6), eps0)
    assert 1.0 / screening_kappa(spec, T) == pytest.approx(R * 100, rel=1e-9)


def test_thomas_fermi_value():
    EF = CONSTANTS.ev_to_erg(9.0)
    spec = ScreeningSpec(Statistics.FERMI_DIRAC, ConstantLaw(5.9e22), 1.0, fermi_energy=EF)
    R = math.sqrt(EF / (6 * math.pi * CONSTANTS.e**2 * 5.9e22))
    assert 1.0 / screening_kappa(spec, 0.0) == pytest.approx(R, rel=1e-14)


def test_alpha_dynamic():
    at = AtomModel(2.0, 0.5)
    assert alpha_dynamic(at, 0.0) == 2.0
    assert alpha_dynamic(at, 2.0) == pytest.approx(1.0)
    assert alpha_dynamic(AtomModel(2.0, 0.0), 123.0) == 2.0
    with pytest.raises(ValueError):
        alpha_dynamic(at, -1.0)


def test_laws():
    act = ActivatedLaw(5.0, CONSTANTS.k_B * 100.0)
    assert act(0.0) == 0.0
    assert act(100.0) == pytest.approx(5 * math.exp(-1))
    tab = TabulatedLaw((1.0, 2.0), (0.0, 4.0))
    assert tab(1.5) == 2.0 and tab(10.0) == 4.0
    with pytest.raises(ValueError):
        TabulatedLaw((2.0, 1.0), (0.0, 1.0))


def test_susceptibilities_match_permittivities(walls):
    xi = np.geomspace(1e12, 1e18, 13)
    for name, wall in walls.items():
        eps, epst = permittivities(wall, xi, 300.0)
        em1, d = susceptibilities(wall, xi, 300.0)
        np.testing.assert_allclose(1 + em1, eps, rtol=1e-14, err_msg=name)
        np.testing.assert_allclose(1 + em1 + d, epst, rtol=1e-14, err_msg=name)


def test_dc_term_shape():
    law = ConductivityLaw(sigma_ref=1.0, gamma_free=2.0)
    assert dc_term(law, 2.0, 300.0) == pytest.approx(4 * math.pi / (2.0 * 2.0))


@settings(max_examples=60, deadline=None)
@given(st.floats(1e10, 1e17), st.floats(1.01, 20.0), st.floats(0.0, 1e14))
def test_permittivity_monotone_decay(xi, factor, sigma):
    xi2 = xi * factor
    models = [
        lambda x: eps_core(OscillatorModel.single(3.81, 10 * EV), x),
        lambda x: eps_plasma(PlasmaModel(9 * EV), x),
        lambda x: eps_drude(PlasmaModel(9 * EV), 0.035 * EV, x),
        lambda x: eps_with_dc(OscillatorModel.single(11.67, 4 * EV),
                              ConductivityLaw(sigma_ref=sigma, gamma_free=0.01 * EV), x, 300.0),
    ]
    for f in models:
        assert f(xi) >= f(xi2) >= 1.0
