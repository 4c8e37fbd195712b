"""TM/TE reflection coefficients at imaginary Matsubara frequencies.

Coefficients are written in cancellation-free form in terms of ``eps - 1``:

    r_TM = (eps - 1) [(eps + 1) y^2 - zeta^2] / (eps y + S)^2
    r_TE = -zeta^2 (eps - 1) / (y + S)^2,      S = sqrt(y^2 + zeta^2 (eps - 1))

which equal the usual ratios ``(eps y - S)/(eps y + S)`` and
``(y - S)/(y + S)`` but stay accurate for eps -> 1 and at the light-cone
boundary y = zeta. Zero-frequency values are analytic branches and never
come from evaluating the ratios at zeta = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FrequencyPoint:
    zeta: float
    y: float
    l: int

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("Matsubara index must be non-negative")
        if not self.zeta >= 0 or not self.y >= self.zeta:
            raise ValueError("need y >= zeta >= 0")
        if (self.l == 0) != (self.zeta == 0):
            raise ValueError("zeta vanishes exactly for l = 0")


@dataclass(frozen=True)
class ReflectionPair:
    r_tm: float
    r_te: float


@dataclass(frozen=True)
class ScreeningContext:
    """Permittivities and screening parameter at one Matsubara frequency.

    ``eps`` is the core permittivity, ``eps_tilde`` includes the free-carrier
    term, ``kappa_a = 2 a kappa`` and ``eps0`` is the static core permittivity.
    """

    eps: float
    eps_tilde: float
    kappa_a: float
    eps0: float

    def __post_init__(self):
        if not self.kappa_a >= 0:
            raise ValueError("screening parameter must be non-negative")
        if not self.eps >= 1 or not self.eps0 >= 1:
            raise ValueError("permittivities must be >= 1")
        if not self.eps_tilde >= self.eps:
            raise ValueError("eps_tilde < eps makes the screening root non-real")

    @property
    def dterm(self) -> float:
        return self.eps_tilde - self.eps

    def eta(self, point: FrequencyPoint) -> float:
        """Auxiliary root eta_l (infinite when there are no free carriers)."""
        d = self.dterm
        if d == 0:
            return math.inf
        return math.sqrt(_light_cone(point.zeta, point.y)
                         + self.kappa_a**2 * self.eps0 * self.eps_tilde / (self.eps * d))


# ---------------------------------------------------------------------------
# vectorized cores (shared with the pure-python kernel)


def _light_cone(zeta, y):
    """y^2 - zeta^2 evaluated as (y - zeta)(y + zeta)."""
    return (y - zeta) * (y + zeta)


def rtm_std(em1, zeta, y):
    """Standard TM coefficient from ``em1 = eps - 1`` for zeta > 0."""
    s = np.sqrt(y * y + zeta * zeta * em1)
    eps = 1.0 + em1
    return em1 * ((em1 + 2.0) * y * y - zeta * zeta) / (eps * y + s) ** 2


def rte_std(em1, zeta, y):
    s = np.sqrt(y * y + zeta * zeta * em1)
    return -(zeta * zeta) * em1 / (y + s) ** 2


def rtm_mod(em1, dterm, kappa2, eps0, zeta, y):
    """Screened (drift + diffusion) TM coefficient for zeta > 0.

    ``em1`` is eps - 1 of the core, ``dterm`` = eps_tilde - eps.
    """
    em1, dterm = np.asarray(em1, dtype=float), np.asarray(dterm, dtype=float)
    zeta, y = np.asarray(zeta, dtype=float), np.asarray(y, dtype=float)
    em1t = em1 + dterm
    eps = 1.0 + em1
    epst = 1.0 + em1t
    s = np.sqrt(y * y + zeta * zeta * em1t)
    big = epst * y + s
    small = em1t * ((em1t + 2.0) * y * y - zeta * zeta) / big
    u = _light_cone(zeta, y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        k = kappa2 * eps0 * epst / (eps * dterm)
        q = u * dterm / (eps * np.sqrt(u + k))
    q = np.where((dterm == 0) | (u == 0), 0.0, q)
    # without free carriers the standard coefficient is returned bit for bit
    return np.where(dterm == 0, rtm_std(em1, zeta, y), (small - q) / (big + q))


def rtm_zero_mod(eps0, kappa_a, y):
    """Screened TM coefficient at zero frequency."""
    root = eps0 * np.sqrt(y * y + kappa_a * kappa_a)
    return (root - y) / (root + y)


# ---------------------------------------------------------------------------
# public scalar operations


def _static_tm(eps0: float) -> float:
    if math.isinf(eps0):
        return 1.0
    return (eps0 - 1.0) / (eps0 + 1.0)


def standard_pair(eps_l: float, point: FrequencyPoint) -> ReflectionPair:
    """Unscreened TM/TE pair; at l = 0 ``eps_l`` is the static permittivity."""
    if not eps_l >= 1:
        raise ValueError("permittivity must be >= 1")
    if point.l == 0:
        return ReflectionPair(_static_tm(eps_l), 0.0)
    if math.isinf(eps_l):
        return ReflectionPair(1.0, -1.0)
    em1 = eps_l - 1.0
    return ReflectionPair(float(rtm_std(em1, point.zeta, point.y)),
                          float(rte_std(em1, point.zeta, point.y)))


def modified_tm(ctx: ScreeningContext, point: FrequencyPoint) -> float:
    """TM coefficient including screening and diffusion currents."""
    if point.l == 0:
        if math.isinf(ctx.kappa_a):
            return 1.0
        return float(rtm_zero_mod(ctx.eps0, ctx.kappa_a, point.y))
    return float(rtm_mod(ctx.eps - 1.0, ctx.dterm, ctx.kappa_a**2, ctx.eps0,
                         point.zeta, point.y))


def modified_te(eps_tilde: float, point: FrequencyPoint) -> float:
    if not eps_tilde >= 1:
        raise ValueError("permittivity must be >= 1")
    if point.l == 0:
        return 0.0
    return standard_pair(eps_tilde, point).r_te


def _first_order_check(point: FrequencyPoint, small: float, bound: float, name: str):
    if point.l == 0:
        raise ValueError("expansions apply to nonzero Matsubara frequencies only")
    if not 0 <= small < bound:
        raise ValueError(f"{name} must lie in [0, {bound})")


def expand_tm_dielectric(eps_l: float, beta_l: float, point: FrequencyPoint) -> float:
    """First order in beta_l = eps_tilde - eps of the screened TM coefficient.

    The first-order coefficient is d r_TM / d eps; the screening root only
    enters beyond all orders when kappa_a^2 * beta_l >> 1.
    """
    _first_order_check(point, beta_l, 0.1, "beta_l")
    z, y = point.zeta, point.y
    s = math.sqrt(y * y + z * z * (eps_l - 1.0))
    slope = y * (2.0 * y * y + (eps_l - 2.0) * z * z) / (s * (eps_l * y + s) ** 2)
    return standard_pair(eps_l, point).r_tm + beta_l * slope


def expand_te_dielectric(eps_l: float, beta_l: float, point: FrequencyPoint) -> float:
    """First order in beta_l of the TE coefficient evaluated with eps_tilde."""
    _first_order_check(point, beta_l, 0.1, "beta_l")
    z, y = point.zeta, point.y
    s = math.sqrt(y * y + z * z * (eps_l - 1.0))
    slope = -y * z * z / (s * (y + s) ** 2)
    return standard_pair(eps_l, point).r_te + beta_l * slope


def metal_z(ctx: ScreeningContext, point: FrequencyPoint) -> float:
    """Coefficient of -2 beta_a in the large-screening expansion."""
    z, y = point.zeta, point.y
    et, e, d = ctx.eps_tilde, ctx.eps, ctx.dterm
    s = math.sqrt(y * y + (et - 1.0) * z * z)
    return math.sqrt(et * d**3 / (ctx.eps0 * e)) * y * _light_cone(z, y) / (et * y + s) ** 2


def expand_tm_metal(ctx: ScreeningContext, beta_a: float, point: FrequencyPoint) -> float:
    """r_TM(eps_tilde) - 2 beta_a Z_l with beta_a = 1 / kappa_a."""
    _first_order_check(point, beta_a, 0.05, "beta_a")
    if beta_a == 0:
        if not math.isinf(ctx.kappa_a):
            raise ValueError("beta_a = 0 requires an infinite screening parameter")
        return standard_pair(ctx.eps_tilde, point).r_tm
    if not math.isclose(beta_a * ctx.kappa_a, 1.0, rel_tol=1e-12):
        raise ValueError("beta_a must equal 1 / kappa_a of the context")
    return standard_pair(ctx.eps_tilde, point).r_tm - 2.0 * beta_a * metal_z(ctx, point)
