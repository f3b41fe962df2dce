"""Hot per-segment loops, jitted with numba when available.

The transient simulation spends essentially all its time computing, for
every segment, conductance totals over every row and the resulting line
currents. Those loops are implemented twice: a numba version and a pure
numpy version built on a segment-by-row activation matrix. The active
backend is numba when importable, unless the CIMCOL_DISABLE_NUMBA
environment variable is set truthy ("1", "true", "yes", "on").

Both implementations stay importable under their _numba / _numpy names so
the benchmark script can time them against each other; the *_numba names
are None when numba is not usable.

Segment/state convention shared with the rest of the package: a row is in
its direct state during segment s exactly when x[i] > edges[s]. Since
every x[i] is itself an edge, the comparison at the segment start decides
the whole segment.
"""

from __future__ import annotations

import os

import numpy as np


def _disabled() -> bool:
    return os.environ.get("CIMCOL_DISABLE_NUMBA", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


# ---------------------------------------------------------------------------
# pure numpy implementations
# ---------------------------------------------------------------------------


def _activation(x, edges):
    # boolean (segments, rows) matrix; float cast so the sums become matmuls
    return (x[None, :] > edges[:-1, None]).astype(np.float64)


def culd_ideal_totals_numpy(gp, gn, x, edges, wl_only, i_bias):
    """Per-segment total bit-line currents, ideal sensing and stiff tail."""
    act = _activation(x, edges)
    if wl_only:
        a = act @ gp
        b = act @ gn
    else:
        # summed per state, not via the sum(gp-gn) identity, so that
        # exchanging the active and inactive sets exchanges a and b bitwise
        inact = 1.0 - act
        a = act @ gp + inact @ gn
        b = act @ gn + inact @ gp
    g = a + b
    i_p = np.zeros_like(g)
    i_n = np.zeros_like(g)
    np.divide(i_bias * a, g, out=i_p, where=g > 0.0)
    np.divide(i_bias * b, g, out=i_n, where=g > 0.0)
    return i_p, i_n


def culd_nonideal_totals_numpy(gp, gn, x, edges, wl_only, i_bias, r_s, g_out, v_supply):
    """Per-segment totals with series sense resistance and finite tail shunt."""
    act = _activation(x, edges)
    if wl_only:
        a = act @ gp
        b = act @ gn
    else:
        inact = 1.0 - act
        a = act @ gp + inact @ gn
        b = act @ gn + inact @ gp
    if r_s > 0.0:
        gs = 1.0 / r_s
        pa = a * gs / (gs + a)
        pb = b * gs / (gs + b)
    else:
        pa, pb = a, b
    live = (a + b) > 0.0
    denom = np.where(live, pa + pb + g_out, 1.0)
    v_sl = ((pa + pb) * v_supply - i_bias) / denom
    drop = v_supply - v_sl
    i_p = np.where(live, pa * drop, 0.0)
    i_n = np.where(live, pb * drop, 0.0)
    return i_p, i_n


def discharge_line_totals_numpy(gp, gn, x, edges):
    """Per-segment conductance pulling each line down, conventional style."""
    act = _activation(x, edges)
    return act @ gp, act @ gn


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

njit = None
if not _disabled():
    try:
        from numba import njit
    except ImportError:
        njit = None

if njit is not None:

    @njit(cache=True)
    def culd_ideal_totals_numba(gp, gn, x, edges, wl_only, i_bias):
        nseg = edges.shape[0] - 1
        n = x.shape[0]
        i_p = np.zeros(nseg)
        i_n = np.zeros(nseg)
        for s in range(nseg):
            t = edges[s]
            a = 0.0
            b = 0.0
            for i in range(n):
                if x[i] > t:
                    a += gp[i]
                    b += gn[i]
                elif not wl_only:
                    a += gn[i]
                    b += gp[i]
            g = a + b
            if g > 0.0:
                i_p[s] = i_bias * a / g
                i_n[s] = i_bias * b / g
        return i_p, i_n

    @njit(cache=True)
    def culd_nonideal_totals_numba(gp, gn, x, edges, wl_only, i_bias, r_s, g_out, v_supply):
        nseg = edges.shape[0] - 1
        n = x.shape[0]
        i_p = np.zeros(nseg)
        i_n = np.zeros(nseg)
        for s in range(nseg):
            t = edges[s]
            a = 0.0
            b = 0.0
            for i in range(n):
                if x[i] > t:
                    a += gp[i]
                    b += gn[i]
                elif not wl_only:
                    a += gn[i]
                    b += gp[i]
            if a + b == 0.0:
                continue
            if r_s > 0.0:
                gs = 1.0 / r_s
                pa = a * gs / (gs + a)
                pb = b * gs / (gs + b)
            else:
                pa = a
                pb = b
            v_sl = ((pa + pb) * v_supply - i_bias) / (pa + pb + g_out)
            drop = v_supply - v_sl
            i_p[s] = pa * drop
            i_n[s] = pb * drop
        return i_p, i_n

    @njit(cache=True)
    def discharge_line_totals_numba(gp, gn, x, edges):
        nseg = edges.shape[0] - 1
        n = x.shape[0]
        g_p = np.zeros(nseg)
        g_n = np.zeros(nseg)
        for s in range(nseg):
            t = edges[s]
            for i in range(n):
                if x[i] > t:
                    g_p[s] += gp[i]
                    g_n[s] += gn[i]
        return g_p, g_n

else:
    culd_ideal_totals_numba = None
    culd_nonideal_totals_numba = None
    discharge_line_totals_numba = None


if njit is not None:
    BACKEND = "numba"
    culd_ideal_totals = culd_ideal_totals_numba
    culd_nonideal_totals = culd_nonideal_totals_numba
    discharge_line_totals = discharge_line_totals_numba
else:
    BACKEND = "numpy"
    culd_ideal_totals = culd_ideal_totals_numpy
    culd_nonideal_totals = culd_nonideal_totals_numpy
    discharge_line_totals = discharge_line_totals_numpy
