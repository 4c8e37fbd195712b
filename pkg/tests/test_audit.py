import dataclasses
import json

import numpy as np
import pytest

from lifshitz_cp.audit import (AuditConfig, IndeterminateError, MaterialClass, Verdict,
                               classify_material, default_fit_powers, fit_law, run_audit,
                               validate_report)
from lifshitz_cp.constants import CONSTANTS
from lifshitz_cp.response import ActivatedLaw, AtomModel, ConstantLaw

UM = 1e-4


def test_classification(walls):
    assert classify_material(walls["gold_plasma"]) is MaterialClass.METAL
    assert classify_material(walls["gold_screened"]) is MaterialClass.METAL
    assert classify_material(walls["sio2_screened_persistent"]) is \
        MaterialClass.DIELECTRIC_PERSISTENT_N
    assert classify_material(walls["sio2_screened_vanishing"]) is \
        MaterialClass.DIELECTRIC_VANISHING_N
    with pytest.raises(ValueError):
        classify_material(walls["sio2"])


def test_classification_indeterminate(walls):
    w = walls["sio2_screened_vanishing"]
    # n(0.5 K) / n(1 K) = exp(-delta / k_B) = 0.7 lies between the two classes
    soft = ActivatedLaw(1e18, CONSTANTS.k_B * np.log(1 / 0.7))
    spec = dataclasses.replace(w.screening, n_law=soft)
    wall = dataclasses.replace(w, screening=spec)
    with pytest.raises(IndeterminateError):
        classify_material(wall)


def test_default_fit_powers(walls):
    assert default_fit_powers(walls["sio2"]) == (3.0,)
    assert default_fit_powers(walls["gold_plasma"]) == (3.0,)
    assert default_fit_powers(walls["gold_drude"]) == (1.5, 3.0)
    assert default_fit_powers(walls["gold_screened"]) == (1.5, 3.0)
    assert default_fit_powers(walls["sio2_screened_persistent"]) == (3.0,)


def test_config_validation(walls, atom):
    w = walls["sio2"]
    with pytest.raises(ValueError):
        AuditConfig(w, atom, UM, taus=(0.01, 0.02))
    with pytest.raises(ValueError):
        AuditConfig(w, atom, UM, taus=(0.2, 0.01))
    with pytest.raises(ValueError):
        AuditConfig(w, atom, UM, theta=0.5)
    with pytest.raises(ValueError):
        AuditConfig(w, atom, UM, taus=(0.02, 0.01), fit_powers=(1.0, 3.0))
    with pytest.raises(ValueError):
        AuditConfig(w, atom, -UM)


def test_fit_exact_law():
    x = np.array([0.008, 0.005, 0.003, 0.0016, 0.0008])
    S = 2.0 + 5e7 * x**3
    coef, err, resid = fit_law(x, S, np.zeros_like(x), (3.0,))
    assert coef[0] == pytest.approx(2.0, rel=1e-12)
    assert coef[1] == pytest.approx(5e7, rel=1e-10)
    assert np.max(np.abs(resid)) < 1e-13


def test_report_roundtrip(walls, atom):
    rep = run_audit(AuditConfig(walls["sio2_dc"], atom, UM))
    doc = json.loads(json.dumps(rep.to_dict()))
    validate_report(doc)
    assert doc["verdict"] == "Violated"
    assert "Violated" in rep.table()


def test_violations_have_positive_s0(walls, atom):
    for name in ("sio2_dc", "sio2_screened_persistent"):
        rep = run_audit(AuditConfig(walls[name], atom, UM))
        assert rep.verdict is Verdict.VIOLATED and rep.s0 > 0


def test_polarizability_rescaling(walls, atom):
    base = run_audit(AuditConfig(walls["sio2_dc"], atom, UM))
    scaled = run_audit(AuditConfig(walls["sio2_dc"], AtomModel(3 * atom.alpha0, atom.beta), UM))
    assert scaled.verdict is base.verdict
    for attr in ("s0", "s3", "S_ref"):
        assert getattr(scaled, attr) == pytest.approx(3 * getattr(base, attr), rel=1e-9)


def test_constant_density_is_persistent(walls):
    w = walls["sio2_screened_vanishing"]
    spec = dataclasses.replace(w.screening, n_law=ConstantLaw(1e15))
    assert classify_material(dataclasses.replace(w, screening=spec)) is \
        MaterialClass.DIELECTRIC_PERSISTENT_N
