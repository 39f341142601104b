# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot loops; interfaces match _kernels_py."""

from libc.stdlib cimport malloc, free

cdef extern from *:
    ctypedef long long int128 "__int128"


cdef inline long long _mulmod(long long x, long long y, long long m):
    return <long long>((<int128>x * y) % m)


def pullback_functional(long long a, long long b, long long c, long long d, phi, int w,
                        long long modulus):
    cdef int n = w + 1
    cdef long long *A = <long long *>malloc(n * n * sizeof(long long))
    cdef long long *C = <long long *>malloc(n * n * sizeof(long long))
    cdef long long *ph = <long long *>malloc(n * sizeof(long long))
    cdef int i, r, t
    cdef long long s, x
    a %= modulus; b %= modulus; c %= modulus; d %= modulus
    if a < 0: a += modulus
    if b < 0: b += modulus
    if c < 0: c += modulus
    if d < 0: d += modulus
    try:
        for i in range(n):
            x = phi[i] % modulus
            ph[i] = x + modulus if x < 0 else x
        for i in range(n * n):
            A[i] = 0
            C[i] = 0
        A[0] = 1
        C[0] = 1
        for i in range(1, n):
            for r in range(i + 1):
                s = 0
                if r < i:
                    s = _mulmod(A[(i - 1) * n + r], b, modulus)
                if r > 0:
                    s = (s + _mulmod(A[(i - 1) * n + r - 1], a, modulus)) % modulus
                A[i * n + r] = s
                s = 0
                if r < i:
                    s = _mulmod(C[(i - 1) * n + r], d, modulus)
                if r > 0:
                    s = (s + _mulmod(C[(i - 1) * n + r - 1], c, modulus)) % modulus
                C[i * n + r] = s
        out = [0] * n
        for i in range(n):
            s = 0
            for r in range(i + 1):
                if A[i * n + r] == 0:
                    continue
                for t in range(w - i + 1):
                    x = _mulmod(A[i * n + r], C[(w - i) * n + t], modulus)
                    s = (s + _mulmod(x, ph[r + t], modulus)) % modulus
            out[i] = s
        return out
    finally:
        free(A)
        free(C)
        free(ph)


def fiber_sum(values, index, int nbins, long long modulus):
    cdef long long *acc = <long long *>malloc(nbins * sizeof(long long))
    cdef Py_ssize_t i, n = len(values)
    cdef long long v
    cdef int k
    try:
        for k in range(nbins):
            acc[k] = 0
        for i in range(n):
            v = values[i] % modulus
            if v < 0:
                v += modulus
            k = index[i]
            acc[k] = (acc[k] + v) % modulus
        return [acc[k] for k in range(nbins)]
    finally:
        free(acc)


def binomial_transport(coeffs, exps, int M, long long modulus):
    cdef Py_ssize_t i, n = len(coeffs)
    cdef long long E = 0, e
    cdef long long v
    cdef int t
    if n == 0:
        return [0] * M
    for i in range(n):
        if exps[i] > E:
            E = exps[i]
    cdef long long *agg = <long long *>malloc((E + 1) * sizeof(long long))
    cdef long long *out = <long long *>malloc(M * sizeof(long long))
    try:
        for e in range(E + 1):
            agg[e] = 0
        for t in range(M):
            out[t] = 0
        for i in range(n):
            v = coeffs[i] % modulus
            if v < 0:
                v += modulus
            e = exps[i]
            agg[e] = (agg[e] + v) % modulus
        e = E
        while e >= 0:
            for t in range(M - 1, 0, -1):
                out[t] = (out[t] + out[t - 1]) % modulus
            out[0] = (out[0] + agg[e]) % modulus
            e -= 1
        return [out[t] for t in range(M)]
    finally:
        free(agg)
        free(out)
