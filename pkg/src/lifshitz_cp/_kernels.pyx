# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner integrals; same panel layout and node order as _kernels_py."""
import numpy as np

cimport cython
from cython.parallel cimport prange
from libc.math cimport exp, pow, sqrt

cdef enum:
    MODE_STANDARD = 0


cdef inline double _rtm_std(double em1, double z, double y) noexcept nogil:
    cdef double s = sqrt(y * y + z * z * em1)
    cdef double d = (1.0 + em1) * y + s
    return em1 * ((em1 + 2.0) * y * y - z * z) / (d * d)


cdef inline double _rte_std(double em1, double z, double y) noexcept nogil:
    cdef double s = sqrt(y * y + z * z * em1)
    cdef double d = y + s
    return -(z * z) * em1 / (d * d)


cdef inline double _rtm_mod(double em1, double dterm, double kappa2, double eps0,
                            double z, double y, double u) noexcept nogil:
    cdef double em1t = em1 + dterm
    cdef double eps = 1.0 + em1
    cdef double epst = 1.0 + em1t
    cdef double s = sqrt(y * y + z * z * em1t)
    cdef double big = epst * y + s
    cdef double small = em1t * ((em1t + 2.0) * y * y - z * z) / big
    cdef double k, q = 0.0
    if dterm != 0.0 and u != 0.0:
        k = kappa2 * eps0 * epst / (eps * dterm)
        q = u * dterm / (eps * sqrt(u + k))
    return (small - q) / (big + q)


cdef inline double _bracket(double t, double z, double em1, double dterm, int mode,
                            double kappa2, double eps0) noexcept nogil:
    cdef double y = z + t
    cdef double u = t * (z + y)
    cdef double em1t = em1 + dterm
    cdef double rtm
    if mode == MODE_STANDARD:
        rtm = _rtm_std(em1t, z, y)
    else:
        rtm = _rtm_mod(em1, dterm, kappa2, eps0, z, y, u)
    return (y * y + u) * rtm - z * z * _rte_std(em1t, z, y)


def inner_integrals(const double[::1] zeta, const double[::1] em1,
                    const double[::1] dterm, const double[::1] start,
                    const double[::1] ratio, const long[::1] npanel,
                    int mode, double kappa2, double eps0,
                    const double[::1] gl_x, const double[::1] gl_w,
                    const double[::1] lag_x, const double[::1] lag_w,
                    double t_split, int threads=1):
    cdef Py_ssize_t n = zeta.shape[0]
    cdef Py_ssize_t ngl = gl_x.shape[0]
    cdef Py_ssize_t nlag = lag_x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef long k, p
    cdef double acc, a, b, half, t, z, e1, dt, s, q, tail_w
    tail_w = exp(-t_split)
    for i in prange(n, nogil=True, num_threads=threads, schedule="static"):
        z = zeta[i]
        e1 = em1[i]
        dt = dterm[i]
        s = start[i]
        q = ratio[i]
        p = npanel[i]
        acc = 0.0
        # panel [0, s]
        half = 0.5 * s
        for j in range(ngl):
            t = half * (gl_x[j] + 1.0)
            acc = acc + half * gl_w[j] * exp(-t) * _bracket(t, z, e1, dt, mode, kappa2, eps0)
        # geometric panels up to t_split
        for k in range(p):
            a = s * pow(q, <double>k)
            if k == p - 1:
                b = t_split
            else:
                b = a * q
            half = 0.5 * (b - a)
            for j in range(ngl):
                t = a + half * (gl_x[j] + 1.0)
                acc = acc + half * gl_w[j] * exp(-t) * _bracket(t, z, e1, dt, mode, kappa2, eps0)
        # Gauss-Laguerre tail from t_split
        for j in range(nlag):
            t = t_split + lag_x[j]
            acc = acc + tail_w * lag_w[j] * _bracket(t, z, e1, dt, mode, kappa2, eps0)
        out[i] = acc
    return out_arr
