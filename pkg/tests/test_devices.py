import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cimcol import (
    CapacitorSpec,
    CurrentSourceSpec,
    DriveMode,
    PwmDrive,
    ResistancePair,
    RowState,
    SenseSpec,
    effective_weight,
    pwm_edges,
    row_state,
)
from cimcol.errors import InvalidDrive

resistances = st.floats(min_value=1e2, max_value=1e9)


# ---------------------------------------------------------------------------
# ResistancePair / effective_weight
# ---------------------------------------------------------------------------


def test_effective_weight_known_pairs():
    # hand-computed: (r_n - r_p) / (r_p + r_n)
    assert effective_weight(ResistancePair(1e7, 1e5)) == -9900000.0 / 10100000.0
    assert effective_weight(ResistancePair(1e5, 1e7)) == 9900000.0 / 10100000.0
    assert effective_weight(ResistancePair(1e6, 1e7)) == 9000000.0 / 11000000.0
    assert effective_weight(ResistancePair(2e5, 2e5)) == 0.0


def test_effective_weight_frozen_values():
    assert effective_weight(ResistancePair(1e7, 1e5)) == pytest.approx(
        -0.9801980198019802, rel=1e-15
    )
    assert effective_weight(ResistancePair(1e6, 1e7)) == pytest.approx(
        0.8181818181818182, rel=1e-15
    )


@given(r_p=resistances, r_n=resistances)
def test_effective_weight_bounded_and_antisymmetric(r_p, r_n):
    pair = ResistancePair(r_p, r_n)
    w = effective_weight(pair)
    assert -1.0 < w < 1.0
    # same addends in both denominators, so the negation is exact
    assert effective_weight(pair.swapped()) == -w


def test_pair_validation():
    with pytest.raises(ValueError):
        ResistancePair(0.0, 1e5)
    with pytest.raises(ValueError):
        ResistancePair(1e5, -1.0)
    with pytest.raises(ValueError):
        ResistancePair(math.inf, 1e5)


def test_pair_conductances():
    pair = ResistancePair(1e5, 1e7)
    assert pair.g_p == 1e-5
    assert pair.g_n == 1e-7
    assert pair.g_sum == pytest.approx(1.01e-5, rel=1e-15)


def test_pair_is_immutable():
    with pytest.raises(dataclasses.FrozenInstanceError):
        ResistancePair(1e5, 1e7).r_p = 2e5


# ---------------------------------------------------------------------------
# PwmDrive / pwm_edges / row_state
# ---------------------------------------------------------------------------


def test_pwm_edges_examples():
    d = PwmDrive(np.array([30e-9, 70e-9, 100e-9]), 100e-9)
    assert np.array_equal(pwm_edges(d), [0.0, 30e-9, 70e-9, 100e-9])

    d = PwmDrive(np.array([0.0, 100e-9]), 100e-9)
    assert np.array_equal(pwm_edges(d), [0.0, 100e-9])

    d = PwmDrive(np.array([25e-9, 75e-9, 25e-9]), 100e-9)
    assert np.array_equal(pwm_edges(d), [0.0, 25e-9, 75e-9, 100e-9])


@given(
    x=st.lists(st.floats(min_value=0.0, max_value=1e-7), min_size=1, max_size=40),
)
def test_pwm_edges_properties(x):
    drive = PwmDrive(np.array(x), 1e-7)
    edges = pwm_edges(drive)
    assert edges[0] == 0.0
    assert edges[-1] == 1e-7
    assert edges.size <= drive.n + 2
    assert np.all(np.diff(edges) > 0.0)
    interior = set(edges[1:-1].tolist())
    assert interior <= set(x)


def test_row_state_complementary():
    drive = PwmDrive(np.array([50e-9, 0.0, 100e-9]), 100e-9)
    assert row_state(drive, 0, 0.0) is RowState.POS
    assert row_state(drive, 0, 49e-9) is RowState.POS
    assert row_state(drive, 0, 50e-9) is RowState.NEG  # boundary belongs to the tail
    assert row_state(drive, 1, 0.0) is RowState.NEG  # zero width: never direct
    assert row_state(drive, 2, 99e-9) is RowState.POS  # full width: always direct


def test_row_state_wl_only():
    drive = PwmDrive(np.array([50e-9]), 100e-9, DriveMode.WL_ONLY)
    assert row_state(drive, 0, 10e-9) is RowState.POS
    assert row_state(drive, 0, 50e-9) is RowState.OFF
    assert row_state(drive, 0, 99e-9) is RowState.OFF


def test_row_state_rejects_times_outside_window():
    drive = PwmDrive(np.array([50e-9]), 100e-9)
    with pytest.raises(ValueError):
        row_state(drive, 0, -1e-9)
    with pytest.raises(ValueError):
        row_state(drive, 0, 100e-9)


def test_drive_validation():
    with pytest.raises(InvalidDrive):
        PwmDrive(np.array([-1e-9]), 100e-9)
    with pytest.raises(InvalidDrive, match="row 1"):
        PwmDrive(np.array([50e-9, 200e-9]), 100e-9)
    with pytest.raises(InvalidDrive):
        PwmDrive(np.array([]), 100e-9)
    with pytest.raises(InvalidDrive):
        PwmDrive(np.array([1e-9]), 0.0)
    with pytest.raises(InvalidDrive):
        PwmDrive(np.array([1e-9]), math.nan)


def test_drive_array_is_read_only():
    drive = PwmDrive([50e-9], 100e-9)
    with pytest.raises(ValueError):
        drive.x[0] = 0.0


def test_drive_accepts_lists_and_mode_strings():
    drive = PwmDrive([50e-9], 100e-9, "wl_only")
    assert drive.mode is DriveMode.WL_ONLY
    assert drive.n == 1


# ---------------------------------------------------------------------------
# source / sense / capacitor specs
# ---------------------------------------------------------------------------


def test_source_defaults_and_validation():
    src = CurrentSourceSpec(i_bias=1e-5)
    assert math.isinf(src.r_out)
    assert src.v_supply == 0.8
    with pytest.raises(ValueError):
        CurrentSourceSpec(i_bias=0.0)
    with pytest.raises(ValueError):
        CurrentSourceSpec(i_bias=1e-5, r_out=0.0)
    with pytest.raises(ValueError):
        CurrentSourceSpec(i_bias=1e-5, v_supply=-0.1)


def test_sense_resolve_r_s():
    assert SenseSpec.ideal().resolve_r_s(1e-5) == 0.0
    assert SenseSpec.constant_r(1e4).resolve_r_s(1e-5) == 1e4
    gm = SenseSpec.gm_scaled(0.031622776601683794)
    # 1/(k*sqrt(i)) lands at 10 kOhm for a 10 uA bias with this k
    assert gm.resolve_r_s(1e-5) == pytest.approx(1e4, rel=1e-12)
    # quadrupling the bias halves the resistance
    assert gm.resolve_r_s(4e-5) == pytest.approx(gm.resolve_r_s(1e-5) / 2.0, rel=1e-12)


def test_sense_validation():
    with pytest.raises(ValueError):
        SenseSpec.constant_r(0.0)
    with pytest.raises(ValueError):
        SenseSpec.gm_scaled(-1.0)
    assert SenseSpec.ideal().is_ideal
    assert not SenseSpec.constant_r(1.0).is_ideal


def test_capacitor_validation():
    assert CapacitorSpec(c=3e-12).v_init == 0.0
    with pytest.raises(ValueError):
        CapacitorSpec(c=0.0)
    with pytest.raises(ValueError):
        CapacitorSpec(c=3e-12, v_init=-0.1)
