"""Central tolerance record.

Every numerical threshold used by the library lives here so that a single
JSON file (``--tol-file`` on the command line) can override them.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Tolerances:
    # regularity classification band around alpha == 1
    marginal: float = 1e-9
    # T entries below this are structurally zero (inadmissible transitions)
    admissibility: float = 1e-14
    # expansion coefficients below this are dropped
    coefficient_drop: float = 1e-14
    # relative frequency window for merging accidental coincidences
    frequency_merge: float = 1e-9
    # max |Im R(k)| after phase extraction
    reality: float = 1e-10
    # quadrature absolute tolerance
    quadrature: float = 1e-10
    quadrature_degree: int = 20
    # fixed-point iteration
    implicit: float = 1e-12
    implicit_max_iter: int = 10_000
    # oracle
    double_root: float = 1e-10
    separator_degenerate: float = 1e-9
    root_separation: float = 1e-9
    # resource caps
    max_directed_bonds: int = 24
    max_orbits: int = 10_000_000
    max_prime_sum_length: int = 24

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_file(cls, path) -> "Tolerances":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**data)


DEFAULT = Tolerances()
