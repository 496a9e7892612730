"""Symbolic toolkit for non-homogeneous Hamiltonian operators of hydrodynamic type."""

import json

from . import _core
from ._core import (
    CatalogError,
    ExprError,
    FormatError,
    ParseError,
    TransformError,
    catalog_ids,
    example_ids,
    invert,
    is_zero,
    match,
    normalize,
)

__all__ = [
    "CatalogError",
    "ExprError",
    "FormatError",
    "ParseError",
    "TransformError",
    "catalog_ids",
    "check",
    "example_ids",
    "invert",
    "is_zero",
    "match",
    "normalize",
    "reproduce",
    "verify_entry",
]


def check(operator: str, seed: int = 0, trials: int = 25) -> dict:
    """Run every Hamiltonianity condition on an operator file's text."""
    return json.loads(_core.check_json(operator, seed, trials))


def verify_entry(entry_id: str, trials: int = 25, seed: int = 0) -> dict:
    return json.loads(_core.verify_entry_json(entry_id, trials, seed))


def reproduce(example: str, seed: int = 0, trials: int = 25, degree: int = 4) -> dict:
    return json.loads(_core.reproduce_json(example, seed, trials, degree))
