"""Casimir-Polder free energy, entropy and zero-temperature energy.

The computed object is the reduced free energy

    Phi = sum'_l alpha_l e^{-zeta_l} J(zeta_l),   F = -k_B T Phi / (8 a^3),

where J is the exponentially weighted inner integral of
:mod:`lifshitz_cp.kernels` and the l = 0 term carries a factor 1/2.
Zero-frequency coefficients are analytic branches.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels_py, kernels
from .constants import CONSTANTS
from .errors import ConvergenceError
from .reflection import rtm_zero_mod
from .response import (Statistics, alpha_dynamic, screening_kappa, sigma_dc,
                       static_permittivity, susceptibilities)

MIN_LEVEL = 1  # coarse level of the first attempt; fine is one above


@dataclass(frozen=True)
class EvaluationPoint:
    """Separation ``a`` (cm) and temperature ``T`` (K) with derived scales."""

    a: float
    T: float

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError("separation must be positive and finite")
        if not (self.T >= 0 and math.isfinite(self.T)):
            raise ValueError("temperature must be non-negative and finite")

    @property
    def omega_c(self) -> float:
        """Characteristic frequency c / 2a (rad/s)."""
        return CONSTANTS.c / (2.0 * self.a)

    @property
    def T_eff(self) -> float:
        """Effective temperature, k_B T_eff = hbar omega_c."""
        return CONSTANTS.hbar * self.omega_c / CONSTANTS.k_B

    @property
    def tau(self) -> float:
        """tau = 2 pi T / T_eff = 4 pi k_B T a / (hbar c) = zeta_1."""
        return 4.0 * math.pi * CONSTANTS.k_B * self.T * self.a / CONSTANTS.hbar_c

    def at(self, T: float) -> "EvaluationPoint":
        return EvaluationPoint(self.a, T)


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy controls.

    ``tol`` is the relative target for the free energy. The sum runs to
    ``zeta_max / tau`` terms unless ``lmax`` caps it, in which case the
    rigorous tail bound must still meet ``tol``. ``node_budget`` caps the
    total number of integrand evaluations.
    """

    tol: float = 1e-10
    node_budget: int = 400_000_000
    lmax: int | None = None
    zeta_max: float = 64.0

    def __post_init__(self):
        if not 0 < self.tol <= 1e-4:
            raise ValueError("tolerance must lie in (0, 1e-4]")
        if self.lmax is not None and self.lmax < 0:
            raise ValueError("lmax must be non-negative")
        if not self.zeta_max >= 20:
            raise ValueError("zeta_max below 20 cannot meet the default tolerance")
        if self.node_budget <= 0:
            raise ValueError("node budget must be positive")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Everything discrete about an evaluation, reused across nearby T."""

    n_terms: int
    layout: kernels.Layout
    level: int
    zero_layout: kernels.Layout | None = None
    zero_level: int = MIN_LEVEL + 1


@dataclass(frozen=True, eq=False)
class ComputationResult:
    free_energy: float | None = None
    entropy: float | None = None
    energy_T0: float | None = None
    diagnostics: dict = field(default_factory=dict)
    rule: QuadratureRule | None = field(default=None, repr=False)


def matsubara_grid(pt: EvaluationPoint, l_max: int) -> np.ndarray:
    """zeta_l = l tau for l = 0..l_max."""
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    return np.arange(l_max + 1, dtype=float) * pt.tau


def tail_bound(alpha_next: float, zeta_next: float, tau: float) -> float:
    """Bound on sum_{l >= L+1} alpha_l e^{-zeta_l} J_l using |r| <= 1.

    Each term is at most 2 alpha e^{-zeta}(zeta^2 + 2 zeta + 2); the sum is
    bounded by its first term plus the integral of the envelope.
    """
    z = zeta_next
    first = math.exp(-z) * (z * z + 2.0 * z + 2.0)
    rest = math.exp(-z) * (z * z + 4.0 * z + 6.0) / tau
    return 2.0 * alpha_next * (first + rest)


# ---------------------------------------------------------------------------
# wall dispatch


@dataclass(frozen=True)
class _Response:
    """Per-term data handed to the kernel."""

    em1: np.ndarray
    dterm: np.ndarray
    mode: int
    kappa2: float
    eps0: float
    scale: np.ndarray | None


def _kappa_a(wall, a: float, T: float) -> float:
    spec = wall.screening
    if T == 0 and spec.statistics is Statistics.MAXWELL_BOLTZMANN:
        return math.inf
    return 2.0 * a * screening_kappa(spec, T)


def _response(wall, zeta, a: float, T: float) -> _Response:
    xi = (CONSTANTS.c / (2.0 * a)) * zeta
    em1, dterm = susceptibilities(wall, xi, T)
    em1 = np.asarray(em1, dtype=float)
    dterm = np.asarray(dterm, dtype=float)
    if wall.kind != "screened":
        return _Response(em1, dterm, kernels.MODE_STANDARD, 0.0, 1.0, None)
    kappa_a = _kappa_a(wall, a, T)
    eps0 = wall.core.eps0
    kappa2 = kappa_a * kappa_a
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        K = kappa2 * eps0 * (1.0 + em1 + dterm) / ((1.0 + em1) * dterm)
    K = np.where(dterm > 0, K, np.inf)
    return _Response(em1, dterm, kernels.MODE_SCREENED, kappa2, eps0,
                     kernels.screened_scale(zeta, K))


def zero_frequency_tm(wall, a: float, T: float) -> float | None:
    """Constant l = 0 TM coefficient, or None when it depends on y.

    With free carriers included through a Drude-like term, the coefficient
    is exactly 1 regardless of the conductivity's magnitude.
    """
    kind = wall.kind
    if kind in ("plasma", "drude"):
        return 1.0
    eps0 = static_permittivity(wall)
    r0 = (eps0 - 1.0) / (eps0 + 1.0)
    if kind == "oscillator":
        return r0
    if kind == "oscillator_dc":
        conducting = wall.conductivity.is_conducting if T > 0 else \
            sigma_dc(wall.conductivity, 0.0) > 0
        return 1.0 if conducting else r0
    kappa_a = _kappa_a(wall, a, T)
    if kappa_a == 0:
        return r0
    if math.isinf(kappa_a):
        return 1.0
    return None


def _zero_integral(eps0: float, kappa_a: float, layout: kernels.Layout, level: int) -> float:
    """int_0^inf 2 y^2 e^{-y} r_TM^mod(0, y) dy on a fixed node set."""
    gl_x, gl_w, lag_x, lag_w = kernels.nodes(level)
    t, w = _kernels_py._term_nodes(layout.start, layout.ratio, int(layout.npanel[0]),
                                   gl_x, gl_w, lag_x, lag_w, kernels.T_SPLIT)
    t, w = t[0], w[0]
    return math.fsum(w * 2.0 * t * t * rtm_zero_mod(eps0, kappa_a, t))


def _zero_term(wall, a, T, rule: QuadratureRule | None):
    """(J_0, error estimate, layout, level) for the l = 0 inner integral."""
    r = zero_frequency_tm(wall, a, T)
    if r is not None:
        return 4.0 * r, 0.0, None, MIN_LEVEL + 1
    kappa_a = _kappa_a(wall, a, T)
    eps0 = wall.core.eps0
    if rule is not None and rule.zero_layout is not None:
        return (_zero_integral(eps0, kappa_a, rule.zero_layout, rule.zero_level), 0.0,
                rule.zero_layout, rule.zero_level)
    layout = kernels.make_layout(np.array([kappa_a]))
    fine = _zero_integral(eps0, kappa_a, layout, MIN_LEVEL + 1)
    coarse = _zero_integral(eps0, kappa_a, layout, MIN_LEVEL)
    return fine, abs(fine - coarse), layout, MIN_LEVEL + 1


# ---------------------------------------------------------------------------
# adaptive inner quadrature


def _node_count(layout: kernels.Layout, level: int) -> int:
    n_gl, n_lag = kernels.LEVELS[level]
    return int(np.sum((layout.npanel + 1) * n_gl + n_lag))


def _adaptive_inner(zeta, weights, resp: _Response, layout, tol, scale_extra, budget):
    """Inner integrals with a coarse/fine error estimate.

    Attempts raise the node level, then refine the panel layout. Accepts
    when sum_l w_l |J_fine - J_coarse| <= tol/10 of the weighted total.
    Returns (J, term_errors, layout, level, nodes_used, refined).
    """
    attempts = [(False, lev) for lev in range(MIN_LEVEL, len(kernels.LEVELS) - 1)]
    attempts += [(True, lev) for lev in range(MIN_LEVEL + 1, len(kernels.LEVELS) - 1)]
    used = 0
    refined_layout = None
    last = None
    for refine, lev in attempts:
        if refine:
            refined_layout = refined_layout or layout.refined()
            lay = refined_layout
        else:
            lay = layout
        used += _node_count(lay, lev) + _node_count(lay, lev + 1)
        if used > budget:
            raise ConvergenceError("node budget exhausted in the inner quadrature",
                                   {"nodes": used, "budget": budget})
        coarse = kernels.inner_integrals(zeta, resp.em1, resp.dterm, lay, lev,
                                         resp.mode, resp.kappa2, resp.eps0)
        fine = kernels.inner_integrals(zeta, resp.em1, resp.dterm, lay, lev + 1,
                                       resp.mode, resp.kappa2, resp.eps0)
        if not np.all(np.isfinite(fine)):
            raise ConvergenceError("non-finite inner integral",
                                   {"zeta": zeta[~np.isfinite(fine)][:5].tolist()})
        term_err = weights * np.abs(fine - coarse)
        err = math.fsum(term_err)
        total = abs(math.fsum(weights * fine)) + scale_extra
        last = (fine, term_err, lay, lev + 1, used, refine, err, total)
        if err <= 0.1 * tol * total:
            return fine, term_err, lay, lev + 1, used, refine
    fine, term_err, lay, lev, used, refine, err, total = last
    raise ConvergenceError("inner quadrature did not reach the tolerance",
                           {"error": err, "scale": total, "level": lev, "nodes": used})


# ---------------------------------------------------------------------------
# public operations


def _n_terms(tau: float, q: QuadratureSpec) -> int:
    return max(1, math.ceil(q.zeta_max / tau))


def free_energy(wall, atom, pt: EvaluationPoint, q: QuadratureSpec = QuadratureSpec(),
                rule: QuadratureRule | None = None) -> ComputationResult:
    """Free energy (erg) by Matsubara summation.

    Passing the ``rule`` of an earlier result reuses its term count, panel
    layout and node level exactly, so that nearby temperatures differ only
    through the physics (used for differencing).
    """
    if not pt.T > 0:
        raise ValueError("free energy needs T > 0; use energy_T0 for T = 0")
    tau = pt.tau
    if rule is not None:
        L = rule.n_terms
    else:
        L = _n_terms(tau, q)
        if q.lmax is not None:
            L = min(L, q.lmax)
    l = np.arange(1, L + 1, dtype=float)
    zeta = l * tau
    alpha = np.asarray(alpha_dynamic(atom, zeta), dtype=float)
    weights = alpha * np.exp(-zeta)
    resp = _response(wall, zeta, pt.a, pt.T)

    J0, err0, zero_layout, zero_level = _zero_term(wall, pt.a, pt.T, rule)
    term0 = 0.5 * atom.alpha0 * J0

    if L == 0:
        J = np.empty(0)
        term_err = np.empty(0)
        layout, level, used, refined = kernels.make_layout(zeta), MIN_LEVEL + 1, 0, False
    elif rule is not None:
        layout, level = rule.layout, rule.level
        J = kernels.inner_integrals(zeta, resp.em1, resp.dterm, layout, level,
                                    resp.mode, resp.kappa2, resp.eps0)
        term_err = np.full(L, np.nan)
        used, refined = _node_count(layout, level), False
    else:
        layout = kernels.make_layout(zeta, resp.scale)
        J, term_err, layout, level, used, refined = _adaptive_inner(
            zeta, weights, resp, layout, q.tol, abs(term0), q.node_budget)

    terms = weights * J
    phi = math.fsum([term0, *terms])  # ascending l, correctly rounded
    quad_err = 0.5 * atom.alpha0 * err0 + (math.fsum(term_err) if rule is None else 0.0)

    zeta_next = (L + 1) * tau
    tail = tail_bound(float(alpha_dynamic(atom, zeta_next)), zeta_next, tau)
    if rule is None and tail > q.tol * abs(phi) and phi != 0:
        raise ConvergenceError(
            f"term cap l_max={L} leaves a tail bound {tail:.3e} above tolerance",
            {"l_max": L, "tail_bound": tail, "phi": phi})

    pref = CONSTANTS.k_B * pt.T / (8.0 * pt.a**3)
    F = -pref * phi + 0.0  # no negative zero
    last = abs(terms[-1]) if L else 0.0
    diag = {
        "l_max": L,
        "tau": tau,
        "level": level,
        "layout_refined": bool(refined),
        "nodes": used,
        "zero_frequency_term": -pref * term0 + 0.0,
        "quadrature_error": pref * quad_err,
        "tail_bound": pref * tail,
        "last_term_ratio": last / abs(phi) if phi else 0.0,
        "term_errors": pref * term_err,
        "backend": kernels.BACKEND,
        "frozen_rule": rule is not None,
    }
    new_rule = rule or QuadratureRule(L, layout, level, zero_layout, zero_level)
    return ComputationResult(free_energy=F, diagnostics=diag, rule=new_rule)


def entropy_step(pt: EvaluationPoint) -> float:
    """Base step for temperature differencing, relative step in [1e-3, 0.05]."""
    rel = min(max(1e-3 / pt.tau, 1e-3), 0.05)
    return rel * pt.T


def entropy(wall, atom, pt: EvaluationPoint, q: QuadratureSpec = QuadratureSpec()
            ) -> ComputationResult:
    """S = -dF/dT by central differences with two Richardson stages.

    All evaluations share the quadrature rule chosen at ``pt`` so that the
    differences contain no discretization jumps. Steps h, h/2, h/4.
    """
    if not pt.T > 0:
        raise ValueError("entropy needs T > 0")
    center = free_energy(wall, atom, pt, q)
    rule = center.rule
    h = entropy_step(pt)

    def slope(step):
        up = free_energy(wall, atom, pt.at(pt.T + step), q, rule).free_energy
        down = free_energy(wall, atom, pt.at(pt.T - step), q, rule).free_energy
        return (up - down) / (2.0 * step)

    d = [slope(h), slope(h / 2.0), slope(h / 4.0)]
    r1 = (4.0 * d[1] - d[0]) / 3.0
    r2 = (4.0 * d[2] - d[1]) / 3.0
    S = -(16.0 * r2 - r1) / 15.0
    err = abs(r1 - r2)
    scale = max(abs(S), abs(center.free_energy) / pt.T)
    diag = dict(center.diagnostics)
    diag.update({"step": h, "differences": d, "richardson": [r1, r2],
                 "derivative_error": err})
    if err > 100.0 * q.tol * scale:
        raise ConvergenceError("entropy differences inconsistent between step sizes", diag)
    return ComputationResult(free_energy=center.free_energy, entropy=S,
                             diagnostics=diag, rule=rule)


# zero temperature -----------------------------------------------------------

_OUTER_LEVELS = ((16, 40), (24, 60), (32, 80), (48, 110))
_OUTER_START = 1e-7


def _outer_nodes(n_gl: int, n_lag: int):
    """Graded Gauss-Legendre panels on [0, 4] plus a Gauss-Laguerre tail in zeta."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_gl)
    lag_x, lag_w = np.polynomial.laguerre.laggauss(n_lag)
    layout = kernels.make_layout(np.array([8.0 * _OUTER_START]))
    # the weights include the factor e^{-zeta}
    z, w = _kernels_py._term_nodes(layout.start, layout.ratio, int(layout.npanel[0]),
                                   gl_x, gl_w, lag_x, lag_w, kernels.T_SPLIT)
    return z[0], w[0]


def energy_T0(wall, atom, a: float, q: QuadratureSpec = QuadratureSpec()) -> ComputationResult:
    """Zero-temperature energy as the continuum limit of the Matsubara sum.

        E(a) = -(hbar c / 32 pi a^4) int_0^inf dzeta alpha(zeta) e^{-zeta} J(zeta)

    which is the limit of F(T) as T -> 0 (k_B T / tau = hbar c / 4 pi a).
    Conductivity laws enter through their T -> 0 limits.
    """
    if not a > 0:
        raise ValueError("separation must be positive")
    pref = CONSTANTS.hbar_c / (32.0 * math.pi * a**4)
    results = []
    used = 0
    for n_gl, n_lag in _OUTER_LEVELS:
        z, w = _outer_nodes(n_gl, n_lag)
        alpha = np.asarray(alpha_dynamic(atom, z), dtype=float)
        weights = alpha * w  # e^{-zeta} already in w
        resp = _response(wall, z, a, 0.0)
        layout = kernels.make_layout(z, resp.scale)
        J, term_err, _, level, n_used, _ = _adaptive_inner(
            z, weights, resp, layout, q.tol, 0.0, q.node_budget)
        used += n_used
        results.append((math.fsum(weights * J), math.fsum(term_err), level))
        if len(results) >= 2:
            (prev, _, _), (cur, inner_err, level) = results[-2], results[-1]
            outer_err = abs(cur - prev)
            if outer_err <= 0.1 * q.tol * abs(cur) or cur == 0:
                E = -pref * cur + 0.0
                diag = {"outer_nodes": z.size, "inner_level": level, "nodes": used,
                        "quadrature_error": pref * (outer_err + inner_err),
                        "backend": kernels.BACKEND}
                return ComputationResult(energy_T0=E, diagnostics=diag)
    raise ConvergenceError("zeta integral for the zero-temperature energy did not converge",
                           {"estimates": [r[0] for r in results]})
