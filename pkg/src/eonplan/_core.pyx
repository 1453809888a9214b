# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: GN-model spectral sums and spectrum window scans.

Signatures match ``eonplan._kernels_py``; ``eonplan.kernels`` picks one
implementation at import time.
"""

from libc.math cimport asinh, fabs, log

import numpy as np

cimport numpy as cnp

cnp.import_array()

M_PI = 3.141592653589793


def nli_bracket(
    double f_test,
    double b_test,
    double g_test,
    double[::1] f_int,
    double[::1] b_int,
    double[::1] g_int,
    double beta2_leffa,
):
    """Closed-form GN spectral sum for one channel under test (SI units)."""
    cdef double pi = 3.141592653589793
    cdef double spm = g_test * g_test * g_test * asinh(
        0.5 * pi * pi * beta2_leffa * b_test * b_test
    )
    cdef double xpm = 0.0
    cdef double df, half
    cdef Py_ssize_t j, n = f_int.shape[0]
    for j in range(n):
        df = fabs(f_int[j] - f_test)
        half = 0.5 * b_int[j]
        xpm += g_int[j] * g_int[j] * log((df + half) / (df - half))
    return spm + g_test * xpm


def first_free_window(cnp.uint8_t[::1] occupancy, Py_ssize_t width):
    """Lowest start index of ``width`` consecutive free (zero) slots, else -1."""
    cdef Py_ssize_t n = occupancy.shape[0]
    if width <= 0 or width > n:
        return -1
    cdef Py_ssize_t run = 0
    cdef Py_ssize_t i
    for i in range(n):
        if occupancy[i] == 0:
            run += 1
            if run >= width:
                return i - width + 1
        else:
            run = 0
    return -1
