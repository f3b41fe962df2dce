"""Builders shared across the test modules."""

import numpy as np

from cimcol import (
    CapacitorSpec,
    CurrentSourceSpec,
    PwmDrive,
    ResistancePair,
    SenseSpec,
    WeightCodec,
    build_column,
)

X_MAX = 1e-7
SOURCE = CurrentSourceSpec(i_bias=1e-5)
CAP = CapacitorSpec(c=3e-12)
IDEAL = SenseSpec.ideal()

# the worked two-row example used throughout: weights -w and +w at the
# codec limit, stored as (10 MOhm, 100 kOhm) and its mirror
ROW_NEG = ResistancePair(1e7, 1e5)
ROW_POS = ResistancePair(1e5, 1e7)


def random_matched_column(rng, n, *, codec=None, source=SOURCE, sense=IDEAL, cap=CAP):
    """Random weights through the codec; returns (column, weights)."""
    codec = codec or WeightCodec()
    w = rng.uniform(-codec.w_lim, codec.w_lim, n)
    return build_column(w, codec, source, sense, cap), w


def random_drive(rng, n, x_max=X_MAX, **kwargs):
    return PwmDrive(rng.uniform(0.0, x_max, n), x_max, **kwargs)
