"""Pure-numpy implementations of the hot kernels.

Mirrors the compiled extension in ``_core.pyx``; selected at import time by
``eonplan.kernels`` when the extension is unavailable or disabled.
"""

from __future__ import annotations

import numpy as np


def nli_bracket(
    f_test: float,
    b_test: float,
    g_test: float,
    f_int: np.ndarray,
    b_int: np.ndarray,
    g_int: np.ndarray,
    beta2_leffa: float,
) -> float:
    """Spectral sum of the closed-form GN model for one channel under test.

    All quantities in SI units: frequencies/bandwidths in Hz, PSDs in W/Hz,
    ``beta2_leffa`` = |beta2| * L_eff,a in s^2. Returns the bracketed term
    (self-channel asinh plus cross-channel log sum) in W^3/Hz^3.
    """
    spm = g_test**3 * np.arcsinh(0.5 * np.pi**2 * beta2_leffa * b_test**2)
    if len(f_int) == 0:
        return float(spm)
    df = np.abs(np.asarray(f_int, dtype=float) - f_test)
    half = 0.5 * np.asarray(b_int, dtype=float)
    ratio = (df + half) / (df - half)
    xpm = g_test * np.sum(np.asarray(g_int, dtype=float) ** 2 * np.log(ratio))
    return float(spm + xpm)


def first_free_window(occupancy: np.ndarray, width: int) -> int:
    """Lowest start index of ``width`` consecutive free (zero) slots, else -1."""
    occ = np.asarray(occupancy, dtype=np.uint8)
    n = occ.size
    if width <= 0 or width > n:
        return -1
    free = occ == 0
    if width == 1:
        idx = np.flatnonzero(free)
        return int(idx[0]) if idx.size else -1
    run = np.cumsum(free)
    # run[i] - run[i - width] == width means slots (i-width, i] are all free.
    window = run[width - 1 :].copy()
    window[1:] -= run[: n - width]
    idx = np.flatnonzero(window == width)
    return int(idx[0]) if idx.size else -1
