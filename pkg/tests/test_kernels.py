import os
import subprocess
import sys

import numpy as np
import pytest

from cimcol import PwmDrive, pwm_edges, row_state, solve_ideal, solve_nonideal
from cimcol import _kernels
from cimcol.devices import CurrentSourceSpec, SenseSpec
from util import random_drive, random_matched_column

HAVE_NUMBA = _kernels.culd_ideal_totals_numba is not None

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")


def _kernel_inputs(rng, n, mode="complementary"):
    column, _ = random_matched_column(rng, n)
    drive = random_drive(rng, n, mode=mode)
    gp, gn = column.conductances()
    return column, drive, gp, gn, drive.x, pwm_edges(drive)


def test_backend_reports_something_sensible():
    assert _kernels.BACKEND in ("numba", "numpy")


@needs_numba
@pytest.mark.parametrize("wl_only", [False, True])
def test_ideal_kernel_backends_agree(rng, wl_only):
    _, _, gp, gn, x, edges = _kernel_inputs(rng, 60)
    ref = _kernels.culd_ideal_totals_numpy(gp, gn, x, edges, wl_only, 1e-5)
    jit = _kernels.culd_ideal_totals_numba(gp, gn, x, edges, wl_only, 1e-5)
    np.testing.assert_allclose(jit[0], ref[0], rtol=1e-12, atol=1e-20)
    np.testing.assert_allclose(jit[1], ref[1], rtol=1e-12, atol=1e-20)


@needs_numba
@pytest.mark.parametrize("wl_only", [False, True])
@pytest.mark.parametrize("r_s,g_out", [(1e4, 0.0), (0.0, 2e-7), (1e4, 2e-7), (0.0, 0.0)])
def test_nonideal_kernel_backends_agree(rng, wl_only, r_s, g_out):
    _, _, gp, gn, x, edges = _kernel_inputs(rng, 60)
    args = (gp, gn, x, edges, wl_only, 1e-5, r_s, g_out, 0.8)
    ref = _kernels.culd_nonideal_totals_numpy(*args)
    jit = _kernels.culd_nonideal_totals_numba(*args)
    np.testing.assert_allclose(jit[0], ref[0], rtol=1e-12, atol=1e-20)
    np.testing.assert_allclose(jit[1], ref[1], rtol=1e-12, atol=1e-20)


@needs_numba
def test_discharge_kernel_backends_agree(rng):
    _, _, gp, gn, x, edges = _kernel_inputs(rng, 60)
    ref = _kernels.discharge_line_totals_numpy(gp, gn, x, edges)
    jit = _kernels.discharge_line_totals_numba(gp, gn, x, edges)
    np.testing.assert_allclose(jit[0], ref[0], rtol=1e-12, atol=0.0)
    np.testing.assert_allclose(jit[1], ref[1], rtol=1e-12, atol=0.0)


@pytest.mark.parametrize("mode", ["complementary", "wl_only"])
def test_ideal_kernel_matches_reference_solver(rng, mode):
    # the kernels must agree segment by segment with the per-row network
    # solve driven by the public instantaneous row_state definition
    column, drive, gp, gn, x, edges = _kernel_inputs(rng, 13, mode=mode)
    i_p, i_n = _kernels.culd_ideal_totals(gp, gn, x, edges, mode == "wl_only", 1e-5)
    for s, t in enumerate(edges[:-1]):
        states = [row_state(drive, i, float(t)) for i in range(column.n)]
        sol = solve_ideal(column.rows, states, 1e-5)
        assert i_p[s] == pytest.approx(sol.i_p_total, rel=1e-12, abs=1e-22)
        assert i_n[s] == pytest.approx(sol.i_n_total, rel=1e-12, abs=1e-22)


@pytest.mark.parametrize("mode", ["complementary", "wl_only"])
def test_nonideal_kernel_matches_reference_solver(rng, mode):
    column, drive, gp, gn, x, edges = _kernel_inputs(rng, 13, mode=mode)
    source = CurrentSourceSpec(i_bias=1e-5, r_out=5e6)
    sense = SenseSpec.constant_r(1e4)
    i_p, i_n = _kernels.culd_nonideal_totals(
        gp, gn, x, edges, mode == "wl_only", 1e-5, 1e4, 1.0 / 5e6, 0.8
    )
    for s, t in enumerate(edges[:-1]):
        states = [row_state(drive, i, float(t)) for i in range(column.n)]
        sol = solve_nonideal(column.rows, states, source, sense)
        assert i_p[s] == pytest.approx(sol.i_p_total, rel=1e-12, abs=1e-22)
        assert i_n[s] == pytest.approx(sol.i_n_total, rel=1e-12, abs=1e-22)


def test_all_off_segments_carry_no_current(rng):
    column, _ = random_matched_column(rng, 5)
    gp, gn = column.conductances()
    drive = PwmDrive(np.zeros(5), 1e-7, "wl_only")
    edges = pwm_edges(drive)
    i_p, i_n = _kernels.culd_ideal_totals(gp, gn, drive.x, edges, True, 1e-5)
    assert np.all(i_p == 0.0)
    i_p, i_n = _kernels.culd_nonideal_totals(
        gp, gn, drive.x, edges, True, 1e-5, 1e4, 0.0, 0.8
    )
    assert np.all(i_p == 0.0)
    assert np.all(i_n == 0.0)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, CIMCOL_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from cimcol import _kernels; print(_kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numpy"


@needs_numba
def test_default_backend_is_numba_when_available():
    env = {k: v for k, v in os.environ.items() if k != "CIMCOL_DISABLE_NUMBA"}
    out = subprocess.run(
        [sys.executable, "-c", "from cimcol import _kernels; print(_kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "numba"
