# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Same contract as :mod:`specgap._purekernels`."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()


def direct_dft(const double complex[::1] values, int sign):
    """``out[a] = sum_n values[n] * exp(sign * 2*pi*i*a*n/p)`` in O(p^2)."""
    cdef Py_ssize_t p = values.shape[0]
    cdef Py_ssize_t a, n, idx
    cdef double complex acc
    cdef double complex[::1] tw = np.empty(p, dtype=np.complex128)
    out = np.empty(p, dtype=np.complex128)
    cdef double complex[::1] o = out
    for n in range(p):
        tw[n] = cos(2.0 * M_PI * n / p) + 1j * sign * sin(2.0 * M_PI * n / p)
    for a in range(p):
        acc = 0
        idx = 0
        for n in range(p):
            acc = acc + values[n] * tw[idx]
            idx += a
            if idx >= p:
                idx -= p
        o[a] = acc
    return out


def direct_convolve(const double complex[::1] f, const double complex[::1] g):
    """``out[n] = sum_m f[m] * g[(n - m) % p]`` by the double loop."""
    cdef Py_ssize_t p = f.shape[0]
    cdef Py_ssize_t n, m, j
    cdef double fr, fi, gr, gi
    out = np.zeros(p, dtype=np.complex128)
    # interleaved (re, im) views; hand-written products vectorise better
    cdef double[::1] o = out.view(np.float64)
    cdef const double[::1] gv = np.asarray(g).view(np.float64)
    for m in range(p):
        fr = f[m].real
        fi = f[m].imag
        if fr == 0 and fi == 0:
            continue
        # two contiguous segments keep the inner loop branch-free
        j = -m
        for n in range(m, p):
            gr = gv[2 * (n + j)]
            gi = gv[2 * (n + j) + 1]
            o[2 * n] += fr * gr - fi * gi
            o[2 * n + 1] += fr * gi + fi * gr
        j = p - m
        for n in range(m):
            gr = gv[2 * (n + j)]
            gi = gv[2 * (n + j) + 1]
            o[2 * n] += fr * gr - fi * gi
            o[2 * n + 1] += fr * gi + fi * gr
    return out


def pair_sum_counts(const cnp.int64_t[::1] xs, const cnp.int64_t[::1] ys, long long p):
    """Count pairs (x, y) with x + y = n (mod p), for every n."""
    cdef Py_ssize_t i, j, nx = xs.shape[0], ny = ys.shape[0]
    cdef long long s
    out = np.zeros(p, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    for i in range(nx):
        for j in range(ny):
            s = (xs[i] + ys[j]) % p
            if s < 0:
                s += p
            o[s] += 1
    return out


def dilation_scan(const cnp.int64_t[::1] rs, long long p, long long cap):
    """Smallest m in 1..p-1 with every |balanced(m*r)| <= cap, or 0."""
    cdef Py_ssize_t i, t = rs.shape[0]
    cdef long long m, c, half = p // 2
    cdef bint ok
    for m in range(1, p):
        ok = True
        for i in range(t):
            c = (m * rs[i]) % p
            if c > half:
                c = p - c
            if c > cap:
                ok = False
                break
        if ok:
            return m
    return 0
