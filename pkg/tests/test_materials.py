import json
import math

import pytest

from lifshitz_cp.errors import ConfigError
from lifshitz_cp.materials import (FIXTURES, MOBILITY_SI_TO_GAUSS, atom_from_dict,
                                   fixture_document, load_atom, load_wall, wall_from_dict)
from lifshitz_cp.response import is_metal, sigma_dc


def test_all_fixtures_load():
    kinds = {name: load_wall(name).kind for name in FIXTURES}
    assert kinds["sio2"] == "oscillator" and kinds["sio2_dc"] == "oscillator_dc"
    assert kinds["gold_plasma"] == "plasma" and kinds["gold_drude"] == "drude"
    assert kinds["gold_screened"] == "screened"


def test_fixture_static_permittivities():
    assert load_wall("sio2").core.eps0 == pytest.approx(3.81, rel=1e-12)
    assert load_wall("si").core.eps0 == pytest.approx(11.67, rel=1e-12)


def test_screened_gold_matches_drude_conductivity():
    gold = load_wall("gold_screened")
    drude = load_wall("gold_drude")
    four_pi_sigma = 4 * math.pi * sigma_dc(gold.conductivity, 300.0)
    assert four_pi_sigma == pytest.approx(drude.plasma.omega_p**2 / drude.gamma, rel=1e-9)
    assert is_metal(gold)


def test_mobility_conversion():
    assert MOBILITY_SI_TO_GAUSS == pytest.approx(299.792458, rel=1e-15)


def test_load_by_file_name_and_path(tmp_path):
    assert load_wall("sio2.json").kind == "oscillator"
    p = tmp_path / "m.json"
    p.write_text(json.dumps(fixture_document("si")))
    assert load_wall(str(p)).core.eps0 == pytest.approx(11.67)
    with pytest.raises(FileNotFoundError):
        load_wall(str(tmp_path / "missing.json"))


@pytest.mark.parametrize("doc", [
    {"variant": "plasma"},
    {"variant": "plasma", "omega_p_eV": -1},
    {"variant": "plasma", "omega_p_eV": 9, "sigma_ref": 1},
    {"variant": "oscillator", "oscillators": [], "extra": 1},
    {"variant": "magic"},
    {"variant": "oscillator_dc", "oscillators": [], "sigma_ref": 1},
    {"variant": "screened", "oscillators": [], "screening": {
        "statistics": "FermiDirac", "n_law": {"kind": "constant", "value": 1},
        "mu_law": {"kind": "constant", "value": 1}}},
])
def test_invalid_materials_rejected(doc):
    with pytest.raises(ConfigError):
        wall_from_dict(doc)


def test_atom():
    at = load_atom()
    assert at.beta == 0.06
    assert at.alpha0 == pytest.approx(319 * (0.529177210903e-8) ** 3, rel=1e-9)
    with pytest.raises(ConfigError):
        atom_from_dict({"alpha0_au": 1.0})
    with pytest.raises(ConfigError):
        fixture_document("nope")
