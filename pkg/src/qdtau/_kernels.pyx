# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the _kernels_py evaluation loops."""

import numpy as np

cimport numpy as cnp

cdef extern from "complex.h":
    double complex csqrt(double complex) nogil

BACKEND = "cython"


def eval_sheet1(x, mids, halves, ray_base=None, ray_sigma=None):
    xa = np.ascontiguousarray(np.asarray(x, dtype=complex).ravel())
    cdef cnp.ndarray[complex, ndim=1] xv = xa
    cdef cnp.ndarray[complex, ndim=1] mv = np.ascontiguousarray(
        np.asarray(mids, dtype=complex)
    )
    cdef cnp.ndarray[complex, ndim=1] hv = np.ascontiguousarray(
        np.asarray(halves, dtype=complex)
    )
    cdef cnp.ndarray[complex, ndim=1] out = np.empty(xv.shape[0], dtype=complex)
    cdef Py_ssize_t i, k, npts = xv.shape[0], ncuts = mv.shape[0]
    cdef double complex acc, u, rb = 0, rs = 0
    cdef bint has_ray = ray_base is not None
    if has_ray:
        rb = ray_base
        rs = ray_sigma
    with nogil:
        for i in range(npts):
            acc = 1.0
            for k in range(ncuts):
                u = (xv[i] - mv[k]) / hv[k]
                acc = acc * (hv[k] * u * csqrt(1.0 - 1.0 / (u * u)))
            if has_ray:
                acc = acc * csqrt((xv[i] - rb) * rs) / csqrt(rs)
            out[i] = acc
    shape = np.asarray(x, dtype=complex).shape
    return out.reshape(shape)


def eval_oncut(owner, t, side, mids, halves, ray_base=None, ray_sigma=None):
    ta = np.ascontiguousarray(np.asarray(t, dtype=float).ravel())
    cdef cnp.ndarray[double, ndim=1] tv = ta
    cdef cnp.ndarray[complex, ndim=1] mv = np.ascontiguousarray(
        np.asarray(mids, dtype=complex)
    )
    cdef cnp.ndarray[complex, ndim=1] hv = np.ascontiguousarray(
        np.asarray(halves, dtype=complex)
    )
    cdef cnp.ndarray[complex, ndim=1] out = np.empty(tv.shape[0], dtype=complex)
    cdef Py_ssize_t i, k, npts = tv.shape[0], ncuts = mv.shape[0]
    cdef Py_ssize_t own = owner
    cdef double sd = side
    cdef double complex acc, u, xi, rb = 0, rs = 0
    cdef bint has_ray = ray_base is not None
    if has_ray:
        rb = ray_base
        rs = ray_sigma
    with nogil:
        for i in range(npts):
            xi = mv[own] + tv[i] * hv[own]
            acc = 1j * sd * hv[own] * csqrt(1.0 - tv[i] * tv[i] + 0j)
            for k in range(ncuts):
                if k == own:
                    continue
                u = (xi - mv[k]) / hv[k]
                acc = acc * (hv[k] * u * csqrt(1.0 - 1.0 / (u * u)))
            if has_ray:
                acc = acc * csqrt((xi - rb) * rs) / csqrt(rs)
            out[i] = acc
    shape = np.asarray(t, dtype=float).shape
    return out.reshape(shape)
