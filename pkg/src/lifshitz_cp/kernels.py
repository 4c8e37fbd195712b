"""Backend selection and quadrature layout for the inner integrals.

Every Matsubara term needs

    J(zeta) = int_0^inf dt e^{-t} [(2 y^2 - zeta^2) r_TM - zeta^2 r_TE],  y = zeta + t.

The t-axis is split into one panel [0, s], geometrically graded panels from
s up to ``T_SPLIT`` (Gauss-Legendre on each), and a shifted Gauss-Laguerre
tail. Grading resolves the branch points of the square roots, which sit at
distance ~zeta (or ~K / 2 zeta for the screened root) from t = 0.

The compiled kernel is used when it imports; ``LIFSHITZ_CP_PURE_PYTHON=1``
forces the numpy fallback. ``LIFSHITZ_CP_THREADS`` caps the thread count.
"""
from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass

import numpy as np

from . import _kernels_py

MODE_STANDARD = _kernels_py.MODE_STANDARD
MODE_SCREENED = _kernels_py.MODE_SCREENED

T_SPLIT = 4.0
#: (Gauss-Legendre nodes per panel, Gauss-Laguerre tail nodes) by level.
LEVELS = ((10, 32), (14, 44), (20, 60), (28, 80), (40, 110))
MAX_PANELS = 64


def _select_backend():
    if os.environ.get("LIFSHITZ_CP_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "cython"


_backend, BACKEND = _select_backend()


def thread_count() -> int:
    raw = os.environ.get("LIFSHITZ_CP_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"LIFSHITZ_CP_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


@functools.lru_cache(maxsize=None)
def nodes(level: int):
    """Cached Gauss-Legendre and Gauss-Laguerre nodes/weights for ``level``."""
    n_gl, n_lag = LEVELS[level]
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_gl)
    lag_x, lag_w = np.polynomial.laguerre.laggauss(n_lag)
    arrays = (gl_x, gl_w, lag_x, lag_w)
    for arr in arrays:
        arr.setflags(write=False)
    return arrays


@dataclass(frozen=True)
class Layout:
    """Per-term panel layout; frozen across temperatures for differencing."""

    start: np.ndarray
    ratio: np.ndarray
    npanel: np.ndarray

    def refined(self) -> "Layout":
        """Quarter the first panel and halve the grading ratio in log scale."""
        start = self.start / 4.0
        graded = start < T_SPLIT
        npanel = np.where(graded, np.minimum(2 * self.npanel + 4, MAX_PANELS), 0)
        npanel = np.where(graded & (npanel == 0), 1, npanel)
        ratio = _ratio(start, npanel)
        start = np.where(graded, start, T_SPLIT)
        return Layout(start, ratio, npanel.astype(np.int_))


def _ratio(start, npanel):
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (T_SPLIT / start) ** (1.0 / np.maximum(npanel, 1))
    return np.where(npanel > 0, q, 1.0)


def make_layout(zeta, scale=None, grading: float = 2.0) -> Layout:
    """Layout whose first panel is an eighth of the local feature scale.

    ``scale`` is the distance from t = 0 of the nearest singularity; by
    default the light-cone scale ``zeta``.
    """
    zeta = np.asarray(zeta, dtype=float)
    scale = zeta if scale is None else np.minimum(zeta, scale)
    start = np.minimum(scale / 8.0, T_SPLIT)
    start = np.maximum(start, T_SPLIT * grading ** (-MAX_PANELS))
    graded = start < T_SPLIT
    npanel = np.where(graded,
                      np.ceil(np.log(T_SPLIT / start) / math.log(grading) - 1e-9), 0)
    npanel = np.clip(npanel, 0, MAX_PANELS).astype(np.int_)
    npanel = np.where(graded & (npanel == 0), 1, npanel)
    return Layout(start, _ratio(start, npanel), npanel)


def screened_scale(zeta, kappa2_eff):
    """Scale of the screening root sqrt(t (2 zeta + t) + K) near t = 0."""
    zeta = np.asarray(zeta, dtype=float)
    K = np.asarray(kappa2_eff, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(K < zeta * zeta, K / (2.0 * zeta), np.sqrt(K))
    return np.where(np.isfinite(s), s, np.inf)


def inner_integrals(zeta, em1, dterm, layout: Layout, level: int,
                    mode: int = MODE_STANDARD, kappa2: float = 0.0, eps0: float = 1.0,
                    backend=None):
    """J(zeta_l) for each term on the given layout and node level."""
    backend = _backend if backend is None else backend
    gl_x, gl_w, lag_x, lag_w = nodes(level)
    c = np.ascontiguousarray
    return backend.inner_integrals(
        c(zeta, dtype=np.float64), c(em1, dtype=np.float64), c(dterm, dtype=np.float64),
        c(layout.start, dtype=np.float64), c(layout.ratio, dtype=np.float64),
        c(layout.npanel, dtype=np.int_), int(mode), float(kappa2), float(eps0),
        gl_x, gl_w, lag_x, lag_w, T_SPLIT, thread_count())
