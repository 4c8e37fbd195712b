"""Dielectric response of the wall and dynamic polarizability of the atom.

All frequencies are angular frequencies on the imaginary axis, in rad/s.
Internally everything is Gaussian; eV inputs are converted through hbar at
the boundary (see :mod:`lifshitz_cp.materials`).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from .constants import CONSTANTS

# ---------------------------------------------------------------------------
# carrier density / mobility laws


@dataclass(frozen=True)
class ConstantLaw:
    """A temperature independent quantity."""

    value: float
    kind: ClassVar[str] = "constant"

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError("law value must be non-negative")

    def __call__(self, T):
        if np.ndim(T):
            return np.full(np.shape(T), float(self.value))
        return float(self.value)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value}


@dataclass(frozen=True)
class ActivatedLaw:
    """``prefactor * exp(-delta / (k_B T))``; the T = 0 value is the limit."""

    prefactor: float
    delta: float  # erg
    kind: ClassVar[str] = "activated"

    def __post_init__(self):
        if not self.prefactor >= 0:
            raise ValueError("prefactor must be non-negative")
        if not self.delta >= 0:
            raise ValueError("activation energy must be non-negative")

    def __call__(self, T):
        T = np.asarray(T, dtype=float)
        if np.any(T < 0):
            raise ValueError("temperature must be non-negative")
        with np.errstate(divide="ignore", over="ignore"):
            expo = np.where(T > 0, -self.delta / (CONSTANTS.k_B * np.where(T > 0, T, 1.0)), -np.inf)
        if self.delta == 0.0:
            expo = np.zeros_like(T)
        out = self.prefactor * np.exp(expo)
        return float(out) if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "prefactor": self.prefactor,
                "delta_eV": self.delta / CONSTANTS.eV}


@dataclass(frozen=True)
class TabulatedLaw:
    """Piecewise-linear interpolation of tabulated values, clamped at the ends."""

    temperatures: tuple
    values: tuple
    kind: ClassVar[str] = "table"

    def __post_init__(self):
        T = np.asarray(self.temperatures, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if T.ndim != 1 or T.shape != v.shape or T.size < 2:
            raise ValueError("table needs matching 1-d temperature and value arrays")
        if np.any(np.diff(T) <= 0):
            raise ValueError("table temperatures must be strictly increasing")
        if np.any(v < 0):
            raise ValueError("tabulated values must be non-negative")

    def __call__(self, T):
        out = np.interp(T, self.temperatures, self.values)
        return float(out) if np.ndim(out) == 0 else out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "T": list(self.temperatures), "values": list(self.values)}


Law = Union[ConstantLaw, ActivatedLaw, TabulatedLaw]


# ---------------------------------------------------------------------------
# material models


@dataclass(frozen=True)
class Resonance:
    strength: float  # g_j, rad^2/s^2
    omega: float  # rad/s
    gamma: float = 0.0  # rad/s

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("oscillator frequency must be positive")
        if not self.strength >= 0:
            raise ValueError("oscillator strength must be non-negative")
        if not self.gamma >= 0:
            raise ValueError("oscillator damping must be non-negative")


@dataclass(frozen=True)
class OscillatorModel:
    """Bound-electron (core) permittivity as a sum of oscillators.

    By default the damping terms are dropped; ``damped=True`` keeps them
    for sensitivity studies.
    """

    oscillators: tuple = ()
    damped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "oscillators", tuple(self.oscillators))
        for osc in self.oscillators:
            if not isinstance(osc, Resonance):
                raise TypeError("oscillators must be Resonance instances")
        if not math.isfinite(self.eps0):
            raise ValueError("static permittivity must be finite")

    @property
    def eps0(self) -> float:
        return 1.0 + sum(o.strength / o.omega**2 for o in self.oscillators)

    @classmethod
    def single(cls, eps0: float, omega: float) -> "OscillatorModel":
        """One undamped oscillator at ``omega`` reproducing a static permittivity."""
        if not eps0 >= 1:
            raise ValueError("static permittivity must be >= 1")
        return cls((Resonance((eps0 - 1.0) * omega**2, omega),))


class DecompositionMode(enum.Enum):
    ACTIVATION = "activation"
    ASSEMBLED = "assembled"


@dataclass(frozen=True)
class ConductivityLaw:
    """dc conductivity sigma(0, T) of the wall, Gaussian units (1/s).

    ``ACTIVATION``: ``sigma_ref * exp(-delta / k_B T)``.
    ``ASSEMBLED``: ``mu(T) |e| n(T)``.
    """

    mode: DecompositionMode = DecompositionMode.ACTIVATION
    sigma_ref: float = 0.0
    delta: float = 0.0  # erg
    gamma_free: float = math.inf  # rad/s
    n_law: Law | None = None
    mu_law: Law | None = None

    def __post_init__(self):
        if self.mode is DecompositionMode.ACTIVATION:
            if not self.sigma_ref >= 0:
                raise ValueError("sigma_ref must be non-negative")
            if not self.delta >= 0:
                raise ValueError("activation energy must be non-negative")
        else:
            if self.n_law is None or self.mu_law is None:
                raise ValueError("assembled conductivity needs n_law and mu_law")
        if not self.gamma_free > 0:
            raise ValueError("free-carrier relaxation frequency must be positive")

    @property
    def is_conducting(self) -> bool:
        """True when sigma(0, T) > 0 at every T > 0 (mathematically, not in floats)."""
        if self.mode is DecompositionMode.ACTIVATION:
            return self.sigma_ref > 0
        return _law_positive(self.n_law) and _law_positive(self.mu_law)


def _law_positive(law) -> bool:
    if isinstance(law, ConstantLaw):
        return law.value > 0
    if isinstance(law, ActivatedLaw):
        return law.prefactor > 0
    return bool(np.all(np.asarray(law.values) > 0))


@dataclass(frozen=True)
class PlasmaModel:
    omega_p: float  # rad/s

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("plasma frequency must be positive")

    @property
    def skin_depth(self) -> float:
        """delta_0 = c / omega_p in cm."""
        return CONSTANTS.c / self.omega_p


class Statistics(enum.Enum):
    MAXWELL_BOLTZMANN = "MaxwellBoltzmann"
    FERMI_DIRAC = "FermiDirac"


@dataclass(frozen=True)
class ScreeningSpec:
    """Carrier statistics and density controlling the screening length.

    For Fermi-Dirac statistics ``fermi_energy`` is taken as hbar*omega_p, as
    the underlying screened-reflection model prescribes; this is not the usual
    free-electron Fermi energy.
    """

    statistics: Statistics
    n_law: Law
    eps0_host: float
    mu_law: Law | None = None
    fermi_energy: float | None = None  # erg

    def __post_init__(self):
        if not self.eps0_host >= 1:
            raise ValueError("host static permittivity must be >= 1")
        if self.statistics is Statistics.FERMI_DIRAC:
            if self.fermi_energy is None or not self.fermi_energy > 0:
                raise ValueError("Fermi-Dirac screening needs a positive Fermi energy")


@dataclass(frozen=True)
class AtomModel:
    """Single-oscillator atom: static polarizability ``alpha0`` (cm^3)."""

    alpha0: float
    beta: float = 0.0

    def __post_init__(self):
        if not self.alpha0 >= 0:
            raise ValueError("static polarizability must be non-negative")
        if not self.beta >= 0:
            raise ValueError("beta must be non-negative")


# wall variants -------------------------------------------------------------


@dataclass(frozen=True)
class Oscillator:
    core: OscillatorModel
    kind: ClassVar[str] = "oscillator"


@dataclass(frozen=True)
class OscillatorPlusDc:
    core: OscillatorModel
    conductivity: ConductivityLaw
    kind: ClassVar[str] = "oscillator_dc"


@dataclass(frozen=True)
class Plasma:
    plasma: PlasmaModel
    kind: ClassVar[str] = "plasma"


@dataclass(frozen=True)
class Drude:
    plasma: PlasmaModel
    gamma: float
    kind: ClassVar[str] = "drude"

    def __post_init__(self):
        if not self.gamma >= 0:
            raise ValueError("Drude relaxation must be non-negative")


@dataclass(frozen=True)
class Screened:
    core: OscillatorModel
    conductivity: ConductivityLaw
    screening: ScreeningSpec
    kind: ClassVar[str] = "screened"


WallModel = Union[Oscillator, OscillatorPlusDc, Plasma, Drude, Screened]
WALL_TYPES = (Oscillator, OscillatorPlusDc, Plasma, Drude, Screened)

METAL_KINDS = frozenset({"plasma", "drude"})


def is_metal(wall) -> bool:
    if wall.kind in METAL_KINDS:
        return True
    return wall.kind == "screened" and wall.screening.statistics is Statistics.FERMI_DIRAC


# ---------------------------------------------------------------------------
# operations


def _check_xi(xi, strict: bool):
    xi = np.asarray(xi, dtype=float)
    if strict and np.any(~(xi > 0)):
        raise ValueError("frequency must be positive")
    if not strict and np.any(~(xi >= 0)):
        raise ValueError("frequency must be non-negative")
    return xi


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def eps_core(model: OscillatorModel, xi):
    """1 + sum_j g_j / (omega_j^2 + xi^2)  (plus gamma_j xi if damped)."""
    return _scalar(1.0 + core_susceptibility(model, xi))


def sigma_dc(law: ConductivityLaw, T):
    """dc conductivity in 1/s."""
    if np.any(np.asarray(T) < 0):
        raise ValueError("temperature must be non-negative")
    if law.mode is DecompositionMode.ACTIVATION:
        return ActivatedLaw(law.sigma_ref, law.delta)(T)
    return _scalar(law.mu_law(T) * CONSTANTS.e * law.n_law(T))


def dc_term(law: ConductivityLaw, xi, T):
    """Drude-like addition 4 pi sigma / [xi (1 + xi / gamma)]."""
    xi = _check_xi(xi, strict=True)
    relax = 1.0 + xi / law.gamma_free
    return _scalar(4.0 * math.pi * sigma_dc(law, T) / (xi * relax))


def eps_with_dc(model: OscillatorModel, law: ConductivityLaw, xi, T):
    return _scalar(np.asarray(eps_core(model, _check_xi(xi, strict=True)))
                   + dc_term(law, xi, T))


def eps_plasma(model: PlasmaModel, xi):
    xi = _check_xi(xi, strict=True)
    return _scalar(1.0 + (model.omega_p / xi) ** 2)


def eps_drude(model: PlasmaModel, gamma: float, xi):
    if not gamma >= 0:
        raise ValueError("Drude relaxation must be non-negative")
    xi = _check_xi(xi, strict=True)
    return _scalar(1.0 + model.omega_p**2 / (xi * (xi + gamma)))


def screening_kappa(spec: ScreeningSpec, T: float) -> float:
    """Inverse screening length (1/cm): Debye-Hueckel or Thomas-Fermi."""
    n = spec.n_law(T)
    if n < 0:
        raise ValueError("carrier density must be non-negative")
    e2 = CONSTANTS.e**2
    if spec.statistics is Statistics.MAXWELL_BOLTZMANN:
        if not T > 0:
            raise ValueError("Debye-Hueckel screening needs T > 0")
        return math.sqrt(4.0 * math.pi * e2 * n / (spec.eps0_host * CONSTANTS.k_B * T))
    return math.sqrt(6.0 * math.pi * e2 * n / (spec.eps0_host * spec.fermi_energy))


def alpha_dynamic(atom: AtomModel, zeta):
    """alpha(i omega_c zeta) = alpha0 / (1 + beta^2 zeta^2)."""
    zeta = np.asarray(zeta, dtype=float)
    if np.any(~(zeta >= 0)):
        raise ValueError("dimensionless frequency must be non-negative")
    return _scalar(atom.alpha0 / (1.0 + (atom.beta * zeta) ** 2))


def permittivities(wall, xi, T: float):
    """(eps, eps_tilde) on positive frequencies ``xi`` for any wall variant.

    ``eps`` is the core permittivity, ``eps_tilde`` the full one including
    free carriers. They coincide for the oscillator-only wall; for the pure
    metal variants there is no separate core and both are the metal response.
    """
    xi = _check_xi(xi, strict=True)
    kind = wall.kind
    if kind == "oscillator":
        eps = np.asarray(eps_core(wall.core, xi))
        return eps, eps
    if kind in ("oscillator_dc", "screened"):
        eps = np.asarray(eps_core(wall.core, xi))
        return eps, eps + dc_term(wall.conductivity, xi, T)
    if kind == "plasma":
        eps = np.asarray(eps_plasma(wall.plasma, xi))
        return eps, eps
    if kind == "drude":
        eps = np.asarray(eps_drude(wall.plasma, wall.gamma, xi))
        return eps, eps
    raise TypeError(f"unknown wall model {wall!r}")


def core_susceptibility(model: OscillatorModel, xi):
    """eps_core - 1 summed directly, accurate where eps_core is close to 1."""
    xi = _check_xi(xi, strict=False)
    out = np.zeros_like(xi)
    for o in model.oscillators:
        denom = o.omega**2 + xi * xi
        if model.damped:
            denom = denom + o.gamma * xi
        out = out + o.strength / denom
    return out


def susceptibilities(wall, xi, T: float):
    """(eps - 1, eps_tilde - eps) on positive frequencies, without cancellation.

    This is the form consumed by the quadrature kernels.
    """
    xi = _check_xi(xi, strict=True)
    kind = wall.kind
    if kind == "oscillator":
        return core_susceptibility(wall.core, xi), np.zeros_like(xi)
    if kind in ("oscillator_dc", "screened"):
        return (core_susceptibility(wall.core, xi),
                np.asarray(dc_term(wall.conductivity, xi, T), dtype=float))
    if kind == "plasma":
        return (wall.plasma.omega_p / xi) ** 2, np.zeros_like(xi)
    if kind == "drude":
        return wall.plasma.omega_p**2 / (xi * (xi + wall.gamma)), np.zeros_like(xi)
    raise TypeError(f"unknown wall model {wall!r}")


def static_permittivity(wall) -> float:
    """eps(0) of the core; infinite for the metal variants."""
    if wall.kind in METAL_KINDS:
        return math.inf
    return wall.core.eps0
