"""Codecs between algorithm space and device space.

Weights map onto resistance pairs under a fixed per-row conductance sum
g_total, which keeps every row's parallel resistance identical. That
matching is what lets the tail bias split 1/N per row and makes the
column's output a clean dot product. Inputs map onto pulse widths with
the signed zero sitting at half the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .devices import CapacitorSpec, CurrentSourceSpec, ResistancePair, SenseSpec, effective_weight
from .errors import EmptyColumn, InputOutOfRange, InvalidCodec, WeightOutOfRange

# Slack applied to the representable-weight bound so that a weight computed
# as exactly +-w_lim survives its own float rounding.
_LIMIT_SLACK = 1e-12


@dataclass(frozen=True)
class WeightCodec:
    """Maps signed weights to resistance pairs with a fixed conductance sum.

    Parameters
    ----------
    g_total : float
        Per-row conductance sum in siemens, shared by all rows.
    r_min, r_max : float
        Resistance window the device technology can realize, in ohms.

    The defaults put the window at [100 kOhm, 10 MOhm] with g_total equal
    to the window's own conductance sum, so the extreme weights land the
    pair exactly on the window edges.
    """

    g_total: float = 10.1e-6
    r_min: float = 100e3
    r_max: float = 10e6

    def __post_init__(self):
        if not (math.isfinite(self.g_total) and self.g_total > 0.0):
            raise InvalidCodec(f"g_total must be positive and finite, got {self.g_total!r}")
        if not (0.0 < self.r_min < self.r_max):
            raise InvalidCodec(
                f"need 0 < r_min < r_max, got r_min={self.r_min!r}, r_max={self.r_max!r}"
            )
        half = 0.5 * self.g_total
        if not (1.0 / self.r_max <= half <= 1.0 / self.r_min):
            raise InvalidCodec(
                "g_total/2 must lie inside the conductance window "
                f"[1/r_max, 1/r_min]; got g_total={self.g_total!r}"
            )

    @property
    def w_lim(self) -> float:
        """Largest |w| whose pair stays inside the resistance window.

        Both window edges bound the range: the high side caps the small
        conductance at 1/r_max, the low side caps the large one at 1/r_min.
        """
        high = (self.g_total - 2.0 / self.r_max) / self.g_total
        low = (2.0 / self.r_min - self.g_total) / self.g_total
        return min(high, low)


def weight_to_pair(w: float, codec: WeightCodec) -> ResistancePair:
    """Encode a signed weight as a resistance pair.

    Splits g_total so that g_p - g_n = w * g_total while g_p + g_n stays
    pinned at g_total. Raises WeightOutOfRange when |w| exceeds the
    codec's representable limit.
    """
    lim = codec.w_lim
    if not abs(w) <= lim * (1.0 + _LIMIT_SLACK):
        raise WeightOutOfRange(f"|w|={abs(w)!r} exceeds the representable limit {lim!r}")
    g_p = 0.5 * codec.g_total * (1.0 + w)
    g_n = codec.g_total - g_p
    return ResistancePair(1.0 / g_p, 1.0 / g_n)


def pair_to_weight(pair: ResistancePair) -> float:
    """Decode the signed weight stored in a resistance pair."""
    return effective_weight(pair)


@dataclass(frozen=True)
class InputCodec:
    """Maps signed inputs in [-1, 1] to pulse widths in [0, x_max].

    resolution_bits of None means continuous widths; an integer b snaps
    widths onto 2**b - 1 uniform steps spanning the full window, rounding
    half away from zero in code space.
    """

    x_max: float
    resolution_bits: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.x_max) and self.x_max > 0.0):
            raise InvalidCodec(f"x_max must be positive and finite, got {self.x_max!r}")
        if self.resolution_bits is not None:
            if not isinstance(self.resolution_bits, int) or self.resolution_bits < 1:
                raise InvalidCodec(
                    f"resolution_bits must be a positive integer or None, "
                    f"got {self.resolution_bits!r}"
                )

    @property
    def levels(self) -> int | None:
        if self.resolution_bits is None:
            return None
        return (1 << self.resolution_bits) - 1


def input_to_pulse(s: float, codec: InputCodec) -> float:
    """Pulse width for a signed input; s = 0 lands at half the window."""
    if not -1.0 <= s <= 1.0:
        raise InputOutOfRange(f"input {s!r} outside [-1, 1]")
    frac = 0.5 * (1.0 + s)
    levels = codec.levels
    if levels is not None:
        frac = math.floor(frac * levels + 0.5) / levels
    return frac * codec.x_max


def pulse_to_input(x: float, codec: InputCodec) -> float:
    """Signed input corresponding to a pulse width (no re-quantization)."""
    if not 0.0 <= x <= codec.x_max:
        raise InputOutOfRange(f"pulse width {x!r} outside [0, {codec.x_max!r}]")
    return (2.0 * x - codec.x_max) / codec.x_max


@dataclass(frozen=True)
class MatchReport:
    """Result of a column matching check.

    violations holds (row index, relative deviation) for every row whose
    conductance sum deviates from the column mean by more than tol.
    """

    ok: bool
    tol: float
    g_mean: float
    max_rel_dev: float
    violations: tuple[tuple[int, float], ...]

    def __str__(self) -> str:
        head = (
            f"g_mean_s={self.g_mean:.9e} max_rel_dev={self.max_rel_dev:.9e} "
            f"tol={self.tol:.9e}"
        )
        if self.ok:
            return head + "\nOK"
        rows = ", ".join(f"{i} (dev={d:.9e})" for i, d in self.violations)
        return head + f"\nVIOLATION rows: {rows}"


def check_matching(rows, tol: float = 1e-9) -> MatchReport:
    """Check that all rows share the same conductance sum.

    The 1/N bias split, and with it the closed-form MAC law, relies on
    every row presenting the same parallel resistance to the source line.
    """
    rows = tuple(rows)
    if not rows:
        raise EmptyColumn("matching check needs at least one row")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    sums = [p.g_sum for p in rows]
    g_mean = sum(sums) / len(sums)
    devs = [abs(g - g_mean) / g_mean for g in sums]
    violations = tuple((i, d) for i, d in enumerate(devs) if d > tol)
    return MatchReport(
        ok=not violations,
        tol=tol,
        g_mean=g_mean,
        max_rel_dev=max(devs),
        violations=violations,
    )


def build_column(
    weights,
    codec: WeightCodec,
    source: CurrentSourceSpec,
    sense: SenseSpec,
    cap: CapacitorSpec,
    topology=None,
):
    """Encode a weight vector and assemble a simulatable column.

    topology defaults to the current-limited differential style; pass a
    Topology value to override.
    """
    from .engine import Topology, WeightColumn

    weights = list(weights)
    if not weights:
        raise EmptyColumn("a column needs at least one weight")
    rows = tuple(weight_to_pair(float(w), codec) for w in weights)
    if topology is None:
        topology = Topology.CURRENT_LIMITED
    return WeightColumn(rows=rows, source=source, sense=sense, cap=cap, topology=topology)
