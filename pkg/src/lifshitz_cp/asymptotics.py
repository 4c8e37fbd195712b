"""Closed-form low-temperature laws used as references for the numerics.

With x = T / T_eff:

* dielectric wall:  F = E - (hbar c pi^3 / 240 a^4) alpha0 C(eps0) x^4,
                    S = (pi^3 k_B / 30 a^3) alpha0 C(eps0) x^3
* with a dc conductivity the l = 0 term changes by -(k_B T / 4 a^3)(1 - r0) alpha0,
  leaving the residual entropy k_B (1 - r0) alpha0 / 4 a^3 at T = 0
* ideal-metal wall: F = E + (hbar c pi^3 / 360 a^4) alpha0 x^4,
                    S = -(pi^3 k_B / 45 a^3) alpha0 x^3

The metal law has the thermal correction *raising* F: the Euler-Maclaurin
remainder of g(zeta) = 2 e^{-zeta}(zeta^2 + 2 zeta + 2) = 4 - 2 zeta^3 / 3 + ...
is +tau^4 / 180, so the entropy approaches zero from below.
"""
from __future__ import annotations

import enum
import math

from .constants import CONSTANTS
from .lifshitz import EvaluationPoint
from .response import AtomModel

#: C(eps0) of the dielectric low-temperature law; only these are known.
C_TABLE = {3.81: 2.70, 11.67: 6.33}

MAX_TAU = 0.1


class CarrierClass(enum.Enum):
    VANISHING_N = "VanishingN"
    PERSISTENT_N = "PersistentN"


def c_coefficient(eps0: float) -> float:
    """Tabulated C(eps0); anything else is an error, never an interpolation."""
    for key, value in C_TABLE.items():
        if math.isclose(eps0, key, rel_tol=1e-9):
            return value
    raise KeyError(f"C(eps0) is not tabulated for eps0 = {eps0!r}; "
                   f"available: {sorted(C_TABLE)}")


def r0(eps0: float) -> float:
    """Static TM reflection coefficient (eps0 - 1)/(eps0 + 1); 1 for eps0 = inf."""
    if not eps0 >= 1:
        raise ValueError("static permittivity must be >= 1")
    if math.isinf(eps0):
        return 1.0
    return (eps0 - 1.0) / (eps0 + 1.0)


def _x(pt: EvaluationPoint) -> float:
    if pt.tau > MAX_TAU:
        raise ValueError(f"asymptotic law needs tau <= {MAX_TAU}, got {pt.tau:.4g}")
    return pt.T / pt.T_eff


def dielectric_free_energy_asym(eps0: float, atom: AtomModel, pt: EvaluationPoint,
                                e0: float) -> float:
    """E(a) plus the quartic thermal correction; ``e0`` is the T = 0 energy."""
    C = c_coefficient(eps0)
    x = _x(pt)
    if x == 0:
        return e0
    return e0 - CONSTANTS.hbar_c * math.pi**3 / (240.0 * pt.a**4) * atom.alpha0 * C * x**4


def dielectric_entropy_asym(eps0: float, atom: AtomModel, pt: EvaluationPoint) -> float:
    C = c_coefficient(eps0)
    x = _x(pt)
    return math.pi**3 * CONSTANTS.k_B / (30.0 * pt.a**3) * atom.alpha0 * C * x**3


def dc_free_energy_correction(eps0: float, atom: AtomModel, pt: EvaluationPoint) -> float:
    """Change of the l = 0 term when the dc conductivity is included."""
    return -CONSTANTS.k_B * pt.T / (4.0 * pt.a**3) * (1.0 - r0(eps0)) * atom.alpha0


def dc_entropy_limit(eps0: float, atom: AtomModel, a: float) -> float:
    """Residual entropy S(a, 0) = k_B (1 - r0) alpha0 / 4 a^3."""
    if not a > 0:
        raise ValueError("separation must be positive")
    return CONSTANTS.k_B * (1.0 - r0(eps0)) * atom.alpha0 / (4.0 * a**3)


def metal_entropy_scale(atom: AtomModel, a: float) -> float:
    """pi^3 k_B alpha0 / 45 a^3, the magnitude of the cubic metal coefficient."""
    return math.pi**3 * CONSTANTS.k_B / (45.0 * a**3) * atom.alpha0


def metal_asym(atom: AtomModel, pt: EvaluationPoint, e0: float) -> tuple[float, float]:
    """(F, S) for an atom near an ideal-metal wall at low temperature."""
    x = _x(pt)
    F = e0 + CONSTANTS.hbar_c * math.pi**3 / (360.0 * pt.a**4) * atom.alpha0 * x**4
    S = -metal_entropy_scale(atom, pt.a) * x**3
    return F, S


def screened_entropy_limit(eps0: float, atom: AtomModel, a: float,
                           carrier_class: CarrierClass) -> float:
    """S(a, 0) with screening: zero if n(T) -> 0, else the dc residual value."""
    carrier_class = CarrierClass(carrier_class)
    if carrier_class is CarrierClass.VANISHING_N:
        return 0.0
    return dc_entropy_limit(eps0, atom, a)


def screened_metal_check(atom: AtomModel, pt: EvaluationPoint) -> float:
    """S(a, 0) for a screened metal wall (plasma or Drude bulk): zero."""
    return 0.0
