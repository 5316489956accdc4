"""Preferential-attachment simulation, exact oracles and rate functions."""

from ._core import (
    DegreeMeasure,
    EventLog,
    WeightSpec,
    __version__,
    attachment_law,
    contraction_gap,
    decay_scan,
    exact_event_probability,
    generate,
    importance_estimate,
    jensen_floor,
    minimize_rate_I,
    naive_estimate,
    oracle_law,
    pi_f,
    rate_I,
    vertex_law,
)

__all__ = [
    "DegreeMeasure",
    "EventLog",
    "WeightSpec",
    "__version__",
    "attachment_law",
    "contraction_gap",
    "decay_scan",
    "exact_event_probability",
    "generate",
    "importance_estimate",
    "jensen_floor",
    "minimize_rate_I",
    "naive_estimate",
    "oracle_law",
    "pi_f",
    "rate_I",
    "vertex_law",
]
