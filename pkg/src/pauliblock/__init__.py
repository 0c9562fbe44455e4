"""Compile programs of weighted Pauli-string blocks into gate circuits."""

from .circuit import Circuit, Gate, emit_qasm, metrics, peephole_cancel
from .device import DeviceModel, cheapest_path, load_device
from .pauli import (
    ParseError,
    PauliBlock,
    PauliString,
    Program,
    UnboundParameterError,
    WeightedString,
    emit_program,
    parse_program,
)
from .schedule import Layer, Schedule, do_schedule, gco_schedule
from .synth_ft import ft_synthesize, naive_synthesize
from .synth_sc import naive_route, sc_synthesize
from .verify import check_equivalence

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "DeviceModel",
    "Gate",
    "Layer",
    "ParseError",
    "PauliBlock",
    "PauliString",
    "Program",
    "Schedule",
    "UnboundParameterError",
    "WeightedString",
    "check_equivalence",
    "cheapest_path",
    "do_schedule",
    "emit_program",
    "emit_qasm",
    "ft_synthesize",
    "gco_schedule",
    "load_device",
    "metrics",
    "naive_route",
    "naive_synthesize",
    "parse_program",
    "peephole_cancel",
    "sc_synthesize",
]
