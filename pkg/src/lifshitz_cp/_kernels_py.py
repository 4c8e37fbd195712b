"""Pure-numpy inner integrals, the fallback for the compiled kernel.

Computes, for each Matsubara term,

    J = int_0^inf dt e^{-t} [(2 y^2 - zeta^2) r_TM - zeta^2 r_TE],  y = zeta + t

on the panel layout described in :mod:`lifshitz_cp.kernels`: one panel
[0, s], ``npanel`` geometric panels from s to ``t_split``, then a shifted
Gauss-Laguerre tail.
"""
import numpy as np

from .reflection import rte_std, rtm_mod, rtm_std

MODE_STANDARD = 0
MODE_SCREENED = 1


def integrand(t, zeta, em1, dterm, mode, kappa2, eps0):
    """Bracket of the inner integral without the exponential weight."""
    y = zeta + t
    u = t * (zeta + y)
    em1t = em1 + dterm
    if mode == MODE_STANDARD:
        rtm = rtm_std(em1t, zeta, y)
    else:
        rtm = rtm_mod(em1, dterm, kappa2, eps0, zeta, y)
    rte = rte_std(em1t, zeta, y)
    return (y * y + u) * rtm - zeta * zeta * rte


def _term_nodes(start, ratio, npanel, gl_x, gl_w, lag_x, lag_w, t_split):
    """Nodes and weights (exponential weight folded in) for a group of terms."""
    s = start[:, None]
    k = np.arange(npanel, dtype=float)[None, :]
    lo = s * ratio[:, None] ** k
    hi = lo * ratio[:, None]
    if npanel:
        hi[:, -1] = t_split
        a = np.concatenate([np.zeros_like(s), lo], axis=1)
        b = np.concatenate([s, hi], axis=1)
    else:
        a = np.zeros_like(s)
        b = s
    half = 0.5 * (b - a)
    t = (a[:, :, None] + half[:, :, None] * (gl_x[None, None, :] + 1.0))
    w = half[:, :, None] * gl_w[None, None, :] * np.exp(-t)
    t = t.reshape(len(start), -1)
    w = w.reshape(len(start), -1)
    t_tail = np.broadcast_to(t_split + lag_x, (len(start), lag_x.size))
    w_tail = np.broadcast_to(np.exp(-t_split) * lag_w, (len(start), lag_x.size))
    return np.concatenate([t, t_tail], axis=1), np.concatenate([w, w_tail], axis=1)


def inner_integrals(zeta, em1, dterm, start, ratio, npanel, mode, kappa2, eps0,
                    gl_x, gl_w, lag_x, lag_w, t_split, threads=1):
    zeta = np.asarray(zeta, dtype=float)
    out = np.empty_like(zeta)
    npanel = np.asarray(npanel)
    for p in np.unique(npanel):
        idx = np.nonzero(npanel == p)[0]
        for chunk in np.array_split(idx, max(1, idx.size // 2048)):
            if chunk.size == 0:
                continue
            t, w = _term_nodes(start[chunk], ratio[chunk], int(p), gl_x, gl_w,
                               lag_x, lag_w, t_split)
            g = integrand(t, zeta[chunk, None], em1[chunk, None], dterm[chunk, None],
                          mode, kappa2, eps0)
            # ascending node order, plain left-to-right accumulation as in the C loop
            acc = np.zeros(chunk.size)
            for j in range(t.shape[1]):
                acc += w[:, j] * g[:, j]
            out[chunk] = acc
    return out
