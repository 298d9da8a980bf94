"""Discrete ordered median problem: branch-price-and-cut solver."""

from ._core import (
    Instance,
    InstanceError,
    OracleTooLarge,
    example,
    generate,
    grasp,
    load,
    mp_relaxation,
    oracle,
    ordered_value,
    ranks,
    solve,
    woc_relaxation,
)

__all__ = [
    "Instance",
    "InstanceError",
    "OracleTooLarge",
    "example",
    "generate",
    "grasp",
    "load",
    "mp_relaxation",
    "oracle",
    "ordered_value",
    "ranks",
    "solve",
    "woc_relaxation",
]
