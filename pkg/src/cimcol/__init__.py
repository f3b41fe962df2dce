"""Behavioral simulator for differential current-mode in-memory MAC columns.

Weights live as complementary resistance pairs, inputs arrive as pulse
widths, and a tail current source fixes the total read current so the
integrated differential output voltage is a scaled dot product. The
package pairs an event-driven transient engine with the closed-form law
it must reproduce, plus codecs, nonideality models, sweeps, and a CLI.
"""

from ._kernels import BACKEND
from .analytics import (
    MacResult,
    SweepResult,
    closed_form_v_diff,
    linearity_r2,
    mac_pipeline,
    max_idiff,
    max_idiff_total,
    sweep_ibias,
    sweep_input,
    sweep_n,
)
from .devices import (
    CapacitorSpec,
    CurrentSourceSpec,
    DriveMode,
    PwmDrive,
    ResistancePair,
    RowState,
    SenseModel,
    SenseSpec,
    effective_weight,
    pwm_edges,
    row_state,
)
from .engine import Topology, TransientTrace, WeightColumn, readout, simulate
from .mapping import (
    InputCodec,
    MatchReport,
    WeightCodec,
    build_column,
    check_matching,
    input_to_pulse,
    pair_to_weight,
    pulse_to_input,
    weight_to_pair,
)
from .network import (
    SegmentSolution,
    attenuation_closed_form,
    conventional_req,
    solve_ideal,
    solve_nonideal,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacitorSpec",
    "CurrentSourceSpec",
    "DriveMode",
    "InputCodec",
    "MacResult",
    "MatchReport",
    "PwmDrive",
    "ResistancePair",
    "RowState",
    "SegmentSolution",
    "SenseModel",
    "SenseSpec",
    "SweepResult",
    "Topology",
    "TransientTrace",
    "WeightCodec",
    "WeightColumn",
    "attenuation_closed_form",
    "build_column",
    "check_matching",
    "closed_form_v_diff",
    "conventional_req",
    "effective_weight",
    "input_to_pulse",
    "linearity_r2",
    "mac_pipeline",
    "max_idiff",
    "max_idiff_total",
    "pair_to_weight",
    "pulse_to_input",
    "pwm_edges",
    "readout",
    "row_state",
    "simulate",
    "solve_ideal",
    "solve_nonideal",
    "sweep_ibias",
    "sweep_input",
    "sweep_n",
    "weight_to_pair",
    "__version__",
]
