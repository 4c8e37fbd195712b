"""Nernst heat theorem audit.

The entropy is computed on a descending grid of reduced temperatures, a
low-temperature law ``S = s0 + sum_k s_k x^{p_k}`` (x = T / T_eff) is fitted,
and the extrapolated ``s0`` is compared with a reference entropy scale:
the wall violates the theorem iff ``|s0| > theta * S_ref``.

The default fit is ``s0 + s3 x^3``. Walls whose free carriers keep a finite
dc conductivity as T -> 0 (Drude metals) have an entropy vanishing as
x^{3/2} at low T, from the linear-in-frequency term zeta^2 (eps - 1) ~ zeta;
their default fit adds an x^{3/2} term so the extrapolation is not biased.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from . import __version__
from .asymptotics import dc_entropy_limit, metal_entropy_scale
from .errors import ConvergenceError
from .lifshitz import EvaluationPoint, QuadratureSpec, entropy
from .response import AtomModel, is_metal, sigma_dc, static_permittivity

DEFAULT_TAUS = (0.05, 0.03, 0.02, 0.01, 0.005)
DEFAULT_THETA = 0.02


class Verdict(enum.Enum):
    SATISFIED = "Satisfied"
    VIOLATED = "Violated"


class MaterialClass(enum.Enum):
    DIELECTRIC_VANISHING_N = "DielectricVanishingN"
    DIELECTRIC_PERSISTENT_N = "DielectricPersistentN"
    METAL = "Metal"


class IndeterminateError(ValueError):
    """The carrier-density limit could not be classified."""


def classify_material(wall, temperatures=(0.5, 1.0)) -> MaterialClass:
    """Classify the T -> 0 behaviour of the wall's carrier density.

    Uses n(T_lo) / n(T_hi) at the two given temperatures: >= 0.9 means the
    density persists, <= 0.5 that it vanishes; anything in between is
    reported as indeterminate rather than guessed.
    """
    if is_metal(wall):
        return MaterialClass.METAL
    if wall.kind != "screened":
        raise ValueError(f"wall variant {wall.kind!r} carries no carrier-density law")
    t_lo, t_hi = sorted(temperatures)[:2]
    if not 0 < t_lo < t_hi:
        raise ValueError("need two distinct positive temperatures")
    n_lo = float(wall.screening.n_law(t_lo))
    n_hi = float(wall.screening.n_law(t_hi))
    if n_hi == 0.0:
        ratio = 0.0 if n_lo == 0.0 else math.inf
    else:
        ratio = n_lo / n_hi
    if ratio >= 0.9:
        return MaterialClass.DIELECTRIC_PERSISTENT_N
    if ratio <= 0.5:
        return MaterialClass.DIELECTRIC_VANISHING_N
    raise IndeterminateError(f"carrier-density ratio {ratio:.3g} between 0.5 and 0.9 "
                             f"at T = {t_lo:g}, {t_hi:g} K")


def _persistent_conductivity(wall) -> bool:
    """True if sigma(0, T) stays finite as T -> 0 (metallic free carriers)."""
    if wall.kind == "drude":
        return wall.gamma > 0
    if wall.kind == "screened":
        return sigma_dc(wall.conductivity, 0.0) > 0
    return False


def default_fit_powers(wall) -> tuple:
    return (1.5, 3.0) if _persistent_conductivity(wall) else (3.0,)


@dataclass(frozen=True)
class AuditConfig:
    wall: object
    atom: AtomModel
    a: float
    taus: tuple = DEFAULT_TAUS
    theta: float = DEFAULT_THETA
    fit_powers: tuple | None = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        taus = tuple(float(t) for t in self.taus)
        object.__setattr__(self, "taus", taus)
        if not self.a > 0:
            raise ValueError("separation must be positive")
        if len(taus) < 2 or any(t <= 0 or t > 0.1 for t in taus):
            raise ValueError("tau grid needs at least two values in (0, 0.1]")
        if any(t2 >= t1 for t1, t2 in zip(taus, taus[1:])):
            raise ValueError("tau grid must be strictly descending")
        if not 0 < self.theta < 0.1:
            raise ValueError("theta must lie in (0, 0.1)")
        powers = self.fit_powers if self.fit_powers is not None else default_fit_powers(self.wall)
        powers = tuple(float(p) for p in powers)
        if not powers or any(p <= 0 for p in powers) or list(powers) != sorted(set(powers)):
            raise ValueError("fit powers must be positive and strictly increasing")
        if len(powers) + 1 > len(taus):
            raise ValueError("more fit parameters than grid points")
        object.__setattr__(self, "fit_powers", powers)


@dataclass(frozen=True)
class GridPoint:
    tau: float
    T: float
    x: float
    S: float
    S_err: float


@dataclass(frozen=True)
class NernstReport:
    s0: float
    s0_err: float
    s3: float
    s3_err: float
    coefficients: dict  # power -> (value, uncertainty)
    S_ref: float
    S_ref_kind: str
    theta: float
    verdict: Verdict
    material_class: MaterialClass | None
    points: tuple
    residuals: tuple  # relative, (S - fit) / |S|
    residual_norm: float
    config: dict

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "config": self.config,
            "verdict": self.verdict.value,
            "material_class": self.material_class.value if self.material_class else None,
            "s0": self.s0, "s0_err": self.s0_err,
            "s3": self.s3, "s3_err": self.s3_err,
            "coefficients": [{"power": p, "value": v, "err": e}
                             for p, (v, e) in sorted(self.coefficients.items())],
            "S_ref": self.S_ref, "S_ref_kind": self.S_ref_kind, "theta": self.theta,
            "points": [{"tau": p.tau, "T": p.T, "x": p.x, "S": p.S, "S_err": p.S_err}
                       for p in self.points],
            "residuals": list(self.residuals),
            "residual_norm": self.residual_norm,
        }

    def table(self) -> str:
        """Human-readable summary."""
        lines = [f"{'tau':>8} {'T [K]':>12} {'S [erg/K]':>14} {'fit resid':>10}"]
        for p, r in zip(self.points, self.residuals):
            lines.append(f"{p.tau:8.4f} {p.T:12.6g} {p.S:14.6e} {r:10.2e}")
        lines.append(f"s0 = {self.s0:.6e} +- {self.s0_err:.2e} erg/K")
        for pw, (v, e) in sorted(self.coefficients.items()):
            lines.append(f"s(x^{pw:g}) = {v:.6e} +- {e:.2e} erg/K")
        lines.append(f"S_ref ({self.S_ref_kind}) = {self.S_ref:.6e} erg/K, theta = {self.theta:g}")
        lines.append(f"|s0| / S_ref = {abs(self.s0) / self.S_ref:.3e}  ->  {self.verdict.value}")
        return "\n".join(lines)


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["version", "config", "verdict", "material_class", "s0", "s0_err", "s3",
                 "s3_err", "coefficients", "S_ref", "S_ref_kind", "theta", "points",
                 "residuals", "residual_norm"],
    "properties": {
        "version": {"type": "string"},
        "config": {"type": "object"},
        "verdict": {"enum": [v.value for v in Verdict]},
        "material_class": {"enum": [m.value for m in MaterialClass] + [None]},
        "s0": {"type": "number"}, "s0_err": {"type": "number", "minimum": 0},
        "s3": {"type": "number"}, "s3_err": {"type": "number", "minimum": 0},
        "coefficients": {"type": "array", "items": {
            "type": "object", "additionalProperties": False,
            "required": ["power", "value", "err"],
            "properties": {"power": {"type": "number"}, "value": {"type": "number"},
                           "err": {"type": "number", "minimum": 0}}}},
        "S_ref": {"type": "number", "exclusiveMinimum": 0},
        "S_ref_kind": {"enum": ["dielectric", "metal"]},
        "theta": {"type": "number"},
        "points": {"type": "array", "items": {
            "type": "object", "additionalProperties": False,
            "required": ["tau", "T", "x", "S", "S_err"],
            "properties": {k: {"type": "number"} for k in ("tau", "T", "x", "S", "S_err")}}},
        "residuals": {"type": "array", "items": {"type": "number"}},
        "residual_norm": {"type": "number", "minimum": 0},
    },
}


def validate_report(doc: dict) -> None:
    jsonschema.validate(doc, REPORT_SCHEMA)


@functools.lru_cache(maxsize=512)
def _cached_entropy(wall, atom, a, T, q):
    return entropy(wall, atom, EvaluationPoint(a, T), q)


def reference_entropy(wall, atom: AtomModel, a: float, tau_min: float) -> tuple[float, str]:
    """S_ref and its kind.

    Dielectrics: the dc residual entropy k_B (1 - r0) alpha0 / 4 a^3.
    Metals: (pi^3 k_B / 45 a^3) alpha0 tau_min^3.
    """
    if is_metal(wall):
        return metal_entropy_scale(atom, a) * tau_min**3, "metal"
    return dc_entropy_limit(static_permittivity(wall), atom, a), "dielectric"


def fit_law(x, S, S_err, powers):
    """Relative-weighted least squares of S = s0 + sum_k s_k x^{p_k}.

    Returns (coefficients, uncertainties, relative residuals). Uncertainties
    combine the propagated entropy errors with the residual scatter.
    """
    x = np.asarray(x, dtype=float)
    S = np.asarray(S, dtype=float)
    S_err = np.asarray(S_err, dtype=float)
    scale = np.abs(S)
    floor = np.max(scale) if np.any(scale > 0) else 1.0
    w = 1.0 / np.where(scale > 0, scale, floor)
    A = np.stack([np.ones_like(x)] + [x**p for p in powers], axis=1)
    Aw = A * w[:, None]
    coef, *_ = np.linalg.lstsq(Aw, S * w, rcond=None)
    G = np.linalg.pinv(Aw) * w[None, :]  # coef = G @ S
    cov = G @ np.diag(S_err**2) @ G.T
    resid = (S - A @ coef) * w
    dof = len(S) - len(coef)
    if dof > 0:
        s2 = float(resid @ resid) / dof
        cov = cov + s2 * np.linalg.pinv(Aw.T @ Aw)
    err = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return coef, err, resid


def run_audit(cfg: AuditConfig) -> NernstReport:
    """Sweep the tau grid (descending), fit, and classify."""
    probe = EvaluationPoint(cfg.a, 0.0)
    T_eff = probe.T_eff
    points = []
    for tau in cfg.taus:
        T = tau * T_eff / (2.0 * math.pi)
        try:
            res = _cached_entropy(cfg.wall, cfg.atom, cfg.a, T, cfg.quadrature)
        except ConvergenceError as exc:
            raise ConvergenceError(f"entropy failed at tau = {tau:g} (T = {T:.6g} K): {exc}",
                                   {"tau": tau, "T": T, **exc.diagnostics}) from exc
        points.append(GridPoint(tau, T, T / T_eff, res.entropy,
                                res.diagnostics["derivative_error"]))

    x = [p.x for p in points]
    coef, err, resid = fit_law(x, [p.S for p in points], [p.S_err for p in points],
                               cfg.fit_powers)
    coefficients = {p: (float(c), float(e)) for p, c, e in zip(cfg.fit_powers, coef[1:], err[1:])}
    s3, s3_err = coefficients.get(3.0, (math.nan, math.nan))
    S_ref, kind = reference_entropy(cfg.wall, cfg.atom, cfg.a, min(cfg.taus))
    s0 = float(coef[0])
    verdict = Verdict.VIOLATED if abs(s0) > cfg.theta * S_ref else Verdict.SATISFIED

    temps = sorted(p.T for p in points)[:2]
    try:
        mclass = classify_material(cfg.wall, temps)
    except ValueError:
        mclass = None

    config = {
        "wall": cfg.wall.kind,
        "a_cm": cfg.a,
        "alpha0_cm3": cfg.atom.alpha0,
        "beta": cfg.atom.beta,
        "taus": list(cfg.taus),
        "theta": cfg.theta,
        "fit_powers": list(cfg.fit_powers),
        "tol": cfg.quadrature.tol,
    }
    return NernstReport(
        s0=s0, s0_err=float(err[0]), s3=s3, s3_err=s3_err, coefficients=coefficients,
        S_ref=S_ref, S_ref_kind=kind, theta=cfg.theta, verdict=verdict,
        material_class=mclass, points=tuple(points), residuals=tuple(float(r) for r in resid),
        residual_norm=float(np.linalg.norm(resid)), config=config)
