# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin
from libc.stdint cimport uint64_t

cnp.import_array()

NAME = "cython"

cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def splitmix64(uint64_t seed, Py_ssize_t count):
    out_arr = np.empty(count, dtype=np.uint64)
    cdef cnp.uint64_t[::1] out = out_arr
    cdef uint64_t state = seed
    cdef Py_ssize_t i
    with nogil:
        for i in range(count):
            state = state + 0x9E3779B97F4A7C15ULL
            out[i] = _mix(state)
    return out_arr


def gaussian_fill(Py_ssize_t count, uint64_t seed):
    cdef Py_ssize_t npairs = (count + 1) // 2
    out_arr = np.empty(2 * npairs)
    cdef double[::1] out = out_arr
    cdef uint64_t state = seed
    cdef double u1, u2, radius, angle
    cdef Py_ssize_t j
    with nogil:
        for j in range(npairs):
            state = state + 0x9E3779B97F4A7C15ULL
            u1 = (<double>(_mix(state) >> 11) + 1.0) * INV_2_53
            state = state + 0x9E3779B97F4A7C15ULL
            u2 = <double>(_mix(state) >> 11) * INV_2_53
            radius = sqrt(-2.0 * log(u1))
            angle = TWO_PI * u2
            out[2 * j] = radius * cos(angle)
            out[2 * j + 1] = radius * sin(angle)
    return out_arr[:count]


def pairwise_sq_dists(X):
    cdef double[:, ::1] x = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1]
    out = np.zeros((n, n))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double acc, t
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(d):
                    t = x[i, k] - x[j, k]
                    acc = acc + t * t
                o[i, j] = acc
                o[j, i] = acc
    return out


def double_center_sq(D):
    cdef double[:, ::1] d = np.ascontiguousarray(D, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    out = np.empty((n, n))
    cdef double[:, ::1] g = out
    cdef double[::1] row = np.zeros(n)
    cdef Py_ssize_t i, j
    cdef double total = 0.0, s
    with nogil:
        for i in range(n):
            s = 0.0
            for j in range(n):
                s = s + d[i, j] * d[i, j]
            row[i] = s / n
            total = total + row[i]
        total = total / n
        for i in range(n):
            for j in range(n):
                g[i, j] = -0.5 * (d[i, j] * d[i, j] - row[i] - row[j] + total)
    return out
