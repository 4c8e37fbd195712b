"""Material and atom definition files (JSON), validated against strict schemas.

Energies and frequencies are given in eV and converted through hbar.
Conductivities are Gaussian (1/s), densities 1/cm^3 and mobilities
cm^2/(V s) (converted to Gaussian by the factor 299.792458).

Example (dielectric with an activated dc conductivity)::

    {
      "variant": "oscillator_dc",
      "oscillators": [{"strength_eV2": 280.99, "omega_eV": 10.0}],
      "sigma_ref": 1e12, "delta_eV": 0.8, "gamma_eV": 0.01
    }
"""
from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import jsonschema

from .constants import BOHR3, CONSTANTS
from .errors import ConfigError
from .response import (ActivatedLaw, AtomModel, ConductivityLaw, ConstantLaw,
                       DecompositionMode, Drude, Oscillator, OscillatorModel,
                       OscillatorPlusDc, Plasma, PlasmaModel, Resonance, Screened,
                       ScreeningSpec, Statistics, TabulatedLaw)

#: mobility conversion cm^2/(V s) -> cm^2/(statV s)
MOBILITY_SI_TO_GAUSS = CONSTANTS.c * 1e-8

FIXTURES = ("sio2", "si", "sio2_dc", "gold_plasma", "gold_drude",
            "sio2_screened_persistent", "sio2_screened_vanishing", "gold_screened")

_NONNEG = {"type": "number", "minimum": 0}
_POS = {"type": "number", "exclusiveMinimum": 0}

_LAW = {
    "oneOf": [
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "value"],
         "properties": {"kind": {"const": "constant"}, "value": _NONNEG}},
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "prefactor", "delta_eV"],
         "properties": {"kind": {"const": "activated"}, "prefactor": _NONNEG,
                        "delta_eV": _NONNEG}},
        {"type": "object", "additionalProperties": False,
         "required": ["kind", "T", "values"],
         "properties": {"kind": {"const": "table"},
                        "T": {"type": "array", "items": _NONNEG, "minItems": 2},
                        "values": {"type": "array", "items": _NONNEG, "minItems": 2}}},
    ]
}

_OSCILLATOR = {
    "type": "object", "additionalProperties": False,
    "required": ["strength_eV2", "omega_eV"],
    "properties": {"strength_eV2": _NONNEG, "omega_eV": _POS, "gamma_eV": _NONNEG},
}

MATERIAL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["variant"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "variant": {"enum": ["oscillator", "oscillator_dc", "plasma", "drude", "screened"]},
        "oscillators": {"type": "array", "items": _OSCILLATOR},
        "damped": {"type": "boolean"},
        "sigma_ref": _NONNEG,
        "delta_eV": _NONNEG,
        "gamma_eV": _NONNEG,
        "omega_p_eV": _POS,
        "screening": {
            "type": "object", "additionalProperties": False,
            "required": ["statistics", "n_law", "mu_law"],
            "properties": {
                "statistics": {"enum": ["MaxwellBoltzmann", "FermiDirac"]},
                "n_law": _LAW,
                "mu_law": _LAW,
                "E_F_eV": _POS,
                "eps0_host": {"type": "number", "minimum": 1},
            },
        },
    },
    "allOf": [
        {"if": {"properties": {"variant": {"const": "oscillator"}}},
         "then": {"required": ["oscillators"],
                  "not": {"anyOf": [{"required": [k]} for k in
                                    ("sigma_ref", "delta_eV", "omega_p_eV", "screening")]}}},
        {"if": {"properties": {"variant": {"const": "oscillator_dc"}}},
         "then": {"required": ["oscillators", "sigma_ref", "delta_eV"],
                  "not": {"anyOf": [{"required": [k]} for k in ("omega_p_eV", "screening")]}}},
        {"if": {"properties": {"variant": {"const": "plasma"}}},
         "then": {"required": ["omega_p_eV"],
                  "not": {"anyOf": [{"required": [k]} for k in
                                    ("oscillators", "sigma_ref", "delta_eV", "gamma_eV",
                                     "screening")]}}},
        {"if": {"properties": {"variant": {"const": "drude"}}},
         "then": {"required": ["omega_p_eV", "gamma_eV"],
                  "not": {"anyOf": [{"required": [k]} for k in
                                    ("oscillators", "sigma_ref", "delta_eV", "screening")]}}},
        {"if": {"properties": {"variant": {"const": "screened"}}},
         "then": {"required": ["oscillators", "screening"],
                  "not": {"anyOf": [{"required": [k]} for k in ("sigma_ref", "delta_eV")]}}},
    ],
}

ATOM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["alpha0_au", "beta"],
    "properties": {
        "name": {"type": "string"},
        "alpha0_au": _POS,
        "beta": _NONNEG,
    },
}


def _validate(doc, schema, what: str):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid {what} at {where}: {exc.message}") from None


def _law(doc, scale: float = 1.0):
    kind = doc["kind"]
    if kind == "constant":
        return ConstantLaw(doc["value"] * scale)
    if kind == "activated":
        return ActivatedLaw(doc["prefactor"] * scale, CONSTANTS.ev_to_erg(doc["delta_eV"]))
    if len(doc["T"]) != len(doc["values"]):
        raise ConfigError("table law needs equally long T and values")
    try:
        return TabulatedLaw(tuple(doc["T"]), tuple(v * scale for v in doc["values"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _core(doc) -> OscillatorModel:
    w = CONSTANTS.ev_to_rad_s
    oscs = [Resonance(o["strength_eV2"] * w(1.0) ** 2, w(o["omega_eV"]), w(o.get("gamma_eV", 0.0)))
            for o in doc["oscillators"]]
    return OscillatorModel(tuple(oscs), damped=doc.get("damped", False))


def wall_from_dict(doc: dict):
    """Build a wall model from a parsed material document."""
    _validate(doc, MATERIAL_SCHEMA, "material")
    w = CONSTANTS.ev_to_rad_s
    variant = doc["variant"]
    try:
        if variant == "oscillator":
            return Oscillator(_core(doc))
        if variant == "oscillator_dc":
            gamma = w(doc["gamma_eV"]) if "gamma_eV" in doc else math.inf
            law = ConductivityLaw(DecompositionMode.ACTIVATION, doc["sigma_ref"],
                                  CONSTANTS.ev_to_erg(doc["delta_eV"]), gamma)
            return OscillatorPlusDc(_core(doc), law)
        if variant == "plasma":
            return Plasma(PlasmaModel(w(doc["omega_p_eV"])))
        if variant == "drude":
            return Drude(PlasmaModel(w(doc["omega_p_eV"])), w(doc["gamma_eV"]))
        core = _core(doc)
        scr = doc["screening"]
        stats = Statistics(scr["statistics"])
        n_law = _law(scr["n_law"])
        mu_law = _law(scr["mu_law"], MOBILITY_SI_TO_GAUSS)
        gamma = w(doc["gamma_eV"]) if "gamma_eV" in doc else math.inf
        law = ConductivityLaw(DecompositionMode.ASSEMBLED, gamma_free=gamma,
                              n_law=n_law, mu_law=mu_law)
        fermi = None
        if stats is Statistics.FERMI_DIRAC:
            if "E_F_eV" not in scr:
                raise ConfigError("Fermi-Dirac screening needs E_F_eV")
            fermi = CONSTANTS.ev_to_erg(scr["E_F_eV"])
        spec = ScreeningSpec(stats, n_law, scr.get("eps0_host", core.eps0), mu_law, fermi)
        return Screened(core, law, spec)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"invalid material: {exc}") from None


def atom_from_dict(doc: dict) -> AtomModel:
    """Atom from ``{"alpha0_au": ..., "beta": ...}`` (polarizability in atomic units)."""
    _validate(doc, ATOM_SCHEMA, "atom")
    return AtomModel(doc["alpha0_au"] * BOHR3, doc["beta"])


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None


def fixture_document(name: str) -> dict:
    """Parsed JSON of a shipped fixture (material or the ``rb`` atom)."""
    ref = resources.files("lifshitz_cp") / "fixtures" / f"{name}.json"
    if not ref.is_file():
        raise ConfigError(f"unknown fixture {name!r}")
    return json.loads(ref.read_text(encoding="utf-8"))


def load_wall(spec: str):
    """Wall from a fixture name or a path to a JSON file."""
    if spec in FIXTURES:
        return wall_from_dict(fixture_document(spec))
    path = Path(spec)
    if path.suffix == ".json" and not path.exists() and path.stem in FIXTURES:
        return wall_from_dict(fixture_document(path.stem))
    return wall_from_dict(read_json(path))


def load_atom(spec: str | None = None) -> AtomModel:
    if spec is None or spec == "rb":
        return atom_from_dict(fixture_document("rb"))
    return atom_from_dict(read_json(spec))
