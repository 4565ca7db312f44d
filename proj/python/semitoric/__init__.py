"""Semitoric invariants of the coupled spin-oscillator, coupled angular
momenta and two-focus families."""

import json

from ._core import (
    AccuracyError,
    ConfigError,
    Error,
    IntegrationError,
    NearDegenerateError,
    PreconditionError,
    RangeError,
    System,
    action,
    cam_transition_times,
    classify,
    hirzebruch_polygon,
    hirzebruch_transition_times,
    region_map,
    return_times,
    transition_scan,
)
from . import _core

__version__ = "0.1.0"


def invariants(system, signs=(), shear=0, threads=1):
    """All invariants of ``system`` as a dict (same document as ``semitoric invariants``)."""
    return json.loads(_core.invariants_json(system, list(signs), shear, threads))


__all__ = [
    "AccuracyError",
    "ConfigError",
    "Error",
    "IntegrationError",
    "NearDegenerateError",
    "PreconditionError",
    "RangeError",
    "System",
    "action",
    "cam_transition_times",
    "classify",
    "hirzebruch_polygon",
    "hirzebruch_transition_times",
    "invariants",
    "region_map",
    "return_times",
    "transition_scan",
]
