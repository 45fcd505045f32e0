"""Dressed quantum graphs with scaling bond potentials.

A graph is stored as undirected bonds.  The directed-bond view used by the
scattering machinery is always derived (:func:`directed_bonds`), never
stored, so magnetic phases cannot become inconsistent.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import InvalidGraphError

__all__ = [
    "VertexCondition",
    "Bond",
    "Graph",
    "DirectedBond",
    "PiecewisePotential",
    "ValidationReport",
    "validate",
    "compile_potential",
    "directed_bonds",
    "load_graph",
    "dump_graph",
    "chain",
    "NEUMANN",
    "DIRICHLET",
]


@dataclass(frozen=True)
class VertexCondition:
    """Scaling delta strength ``lambda0`` at a vertex, or a Dirichlet wall."""

    kind: str = "scaling"
    lambda0: float = 0.0

    @classmethod
    def scaling(cls, lambda0: float = 0.0) -> "VertexCondition":
        return cls("scaling", float(lambda0))

    @classmethod
    def dirichlet(cls) -> "VertexCondition":
        return cls("dirichlet", math.inf)

    @property
    def is_dirichlet(self) -> bool:
        return self.kind == "dirichlet"

    def to_json(self) -> dict:
        if self.is_dirichlet:
            return {"type": "dirichlet"}
        return {"type": "scaling", "lambda0": self.lambda0}

    @classmethod
    def from_json(cls, d: dict) -> "VertexCondition":
        kind = d.get("type")
        if kind == "dirichlet":
            return cls.dirichlet()
        if kind == "scaling":
            return cls.scaling(d.get("lambda0", 0.0))
        raise ValueError(f"unknown vertex condition type {kind!r}")


NEUMANN = VertexCondition.scaling(0.0)
DIRICHLET = VertexCondition.dirichlet()


@dataclass(frozen=True)
class Bond:
    """Undirected bond between vertices ``i`` and ``j``.

    ``A`` is the magnetic constant for the traversal ``i -> j``; the reverse
    traversal carries ``-A``.
    """

    i: int
    j: int
    L: float
    lam: float = 0.0
    A: float = 0.0

    @property
    def beta(self) -> float:
        return math.sqrt(1.0 - self.lam)

    @property
    def action(self) -> float:
        """Reduced action length beta * L."""
        return self.beta * self.L

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "L": self.L, "lambda": self.lam, "A": self.A}

    @classmethod
    def from_json(cls, d: dict) -> "Bond":
        return cls(int(d["i"]), int(d["j"]), float(d["L"]),
                   float(d.get("lambda", 0.0)), float(d.get("A", 0.0)))


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    bonds: tuple[Bond, ...]
    vertex_conditions: tuple[VertexCondition, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bonds", tuple(self.bonds))
        object.__setattr__(self, "vertex_conditions", tuple(self.vertex_conditions))

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    def valency(self, v: int) -> int:
        return sum((b.i == v) + (b.j == v) for b in self.bonds)

    def connectivity(self) -> list[list[int]]:
        """Connectivity matrix C_ij (1 if at least one bond joins i and j)."""
        n = self.n_vertices
        C = [[0] * n for _ in range(n)]
        for b in self.bonds:
            if 0 <= b.i < n and 0 <= b.j < n:
                C[b.i][b.j] = C[b.j][b.i] = 1
        return C

    def to_json(self) -> dict:
        d = {
            "vertices": self.n_vertices,
            "bonds": [b.to_json() for b in self.bonds],
            "vertex_conditions": [c.to_json() for c in self.vertex_conditions],
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Graph":
        return cls(
            int(d["vertices"]),
            tuple(Bond.from_json(b) for b in d["bonds"]),
            tuple(VertexCondition.from_json(c) for c in d["vertex_conditions"]),
            name=d.get("name", ""),
        )


@dataclass(frozen=True)
class DirectedBond:
    index: int
    bond: int  # index of the undirected bond in Graph.bonds
    tail: int
    head: int
    L: float
    beta: float
    A: float
    reverse: int  # index of the reversed directed bond

    @property
    def action(self) -> float:
        return self.beta * self.L

    @property
    def label(self) -> str:
        return f"{self.tail}>{self.head}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]
    betas: tuple[float, ...]

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_invalid(self) -> None:
        if not self.ok:
            raise InvalidGraphError(self.problems)


def validate(graph: Graph) -> ValidationReport:
    """Check every graph invariant; never raises."""
    problems = []
    n = graph.n_vertices
    if n < 1:
        problems.append("graph has no vertices")
    if not graph.bonds:
        problems.append("graph has no bonds")
    if len(graph.vertex_conditions) != n:
        problems.append(f"expected {n} vertex conditions, got {len(graph.vertex_conditions)}")
    betas = []
    for idx, b in enumerate(graph.bonds):
        tag = f"bond {idx} ({b.i}-{b.j})"
        if not (0 <= b.i < n and 0 <= b.j < n):
            problems.append(f"{tag}: vertex id out of range")
        if b.i == b.j:
            problems.append(f"{tag}: self-loops are not supported")
        if not (math.isfinite(b.L) and b.L > 0):
            problems.append(f"{tag}: length must be > 0")
        if not math.isfinite(b.A):
            problems.append(f"{tag}: magnetic constant must be finite")
        if not math.isfinite(b.lam) or b.lam >= 1.0:
            problems.append(f"{tag}: lambda >= 1 (tunneling bonds are not supported)")
            betas.append(math.nan)
        else:
            betas.append(b.beta)
    for v, c in enumerate(graph.vertex_conditions):
        if c.kind not in ("scaling", "dirichlet"):
            problems.append(f"vertex {v}: unknown condition {c.kind!r}")
        elif c.kind == "scaling" and not (math.isfinite(c.lambda0) and c.lambda0 >= 0):
            problems.append(f"vertex {v}: lambda0 must be finite and >= 0")
    if n >= 1 and all(0 <= b.i < n and 0 <= b.j < n for b in graph.bonds):
        for v in range(n):
            if graph.valency(v) == 0:
                problems.append(f"vertex {v}: isolated (valency 0)")
        if not _connected(graph):
            problems.append("graph is not connected")
    return ValidationReport(not problems, tuple(problems), tuple(betas))


def _connected(graph: Graph) -> bool:
    adj = {v: set() for v in range(graph.n_vertices)}
    for b in graph.bonds:
        adj[b.i].add(b.j)
        adj[b.j].add(b.i)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == graph.n_vertices


def directed_bonds(graph: Graph) -> list[DirectedBond]:
    """Directed bonds in canonical order.

    Undirected bonds are sorted by ``(min(i, j), max(i, j), insertion index)``
    and each contributes ``i -> j`` followed by ``j -> i``.
    """
    order = sorted(range(graph.n_bonds),
                   key=lambda t: (min(graph.bonds[t].i, graph.bonds[t].j),
                                  max(graph.bonds[t].i, graph.bonds[t].j), t))
    out = []
    for t in order:
        b = graph.bonds[t]
        fwd = len(out)
        beta = b.beta
        out.append(DirectedBond(fwd, t, b.i, b.j, b.L, beta, b.A, fwd + 1))
        out.append(DirectedBond(fwd + 1, t, b.j, b.i, b.L, beta, -b.A, fwd))
    return out


@dataclass(frozen=True)
class PiecewisePotential:
    """Piecewise constant scaling potential ``U = lambda E`` in a box.

    ``segment_lambdas`` has one entry per segment, i.e. ``len(breakpoints) + 1``.
    Delta spikes are ``(position, lambda0)`` pairs.
    """

    box_length: float
    breakpoints: tuple[float, ...] = ()
    segment_lambdas: tuple[float, ...] = (0.0,)
    delta_spikes: tuple[tuple[float, float], ...] = ()
    end_conditions: tuple[VertexCondition, VertexCondition] = (DIRICHLET, DIRICHLET)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(x) for x in self.breakpoints))
        object.__setattr__(self, "segment_lambdas", tuple(float(x) for x in self.segment_lambdas))
        object.__setattr__(self, "delta_spikes",
                           tuple((float(x), float(s)) for x, s in self.delta_spikes))
        object.__setattr__(self, "end_conditions", tuple(self.end_conditions))

    def problems(self) -> list[str]:
        out = []
        if not self.box_length > 0:
            out.append("box_length must be > 0")
        bp = self.breakpoints
        if any(not (0 < x < self.box_length) for x in bp):
            out.append("breakpoints must lie strictly inside the box")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            out.append("breakpoints must be strictly ascending")
        if len(self.segment_lambdas) != len(bp) + 1:
            out.append("need exactly one lambda per segment")
        if any(lam >= 1 for lam in self.segment_lambdas):
            out.append("segment lambda >= 1")
        for x, s in self.delta_spikes:
            if not (0 < x < self.box_length):
                out.append(f"delta at {x} outside the open box")
            if not s >= 0:
                out.append(f"delta at {x} has negative strength")
        if len(self.end_conditions) != 2:
            out.append("need two end conditions")
        return out

    def to_json(self) -> dict:
        return {
            "box_length": self.box_length,
            "breakpoints": list(self.breakpoints),
            "segment_lambdas": list(self.segment_lambdas),
            "delta_spikes": [list(d) for d in self.delta_spikes],
            "end_conditions": [c.to_json() for c in self.end_conditions],
        }

    @classmethod
    def from_json(cls, d: dict) -> "PiecewisePotential":
        return cls(
            float(d["box_length"]),
            tuple(d.get("breakpoints", ())),
            tuple(d.get("segment_lambdas", (0.0,))),
            tuple(tuple(x) for x in d.get("delta_spikes", ())),
            tuple(VertexCondition.from_json(c) for c in
                  d.get("end_conditions", [{"type": "dirichlet"}] * 2)),
        )


def compile_potential(p: PiecewisePotential, name: str = "") -> Graph:
    """Turn a 1-D box potential into the equivalent linear chain graph."""
    problems = p.problems()
    if problems:
        raise InvalidGraphError(problems)
    strengths: dict[float, float] = {x: 0.0 for x in p.breakpoints}
    for x, s in p.delta_spikes:
        strengths[x] = strengths.get(x, 0.0) + s
    interior = sorted(strengths)
    positions = [0.0, *interior, p.box_length]
    edges = (0.0, *p.breakpoints, p.box_length)

    def segment_lambda(mid: float) -> float:
        for s, (a, b) in enumerate(zip(edges, edges[1:])):
            if a <= mid < b:
                return p.segment_lambdas[s]
        return p.segment_lambdas[-1]

    bonds = []
    for v, (a, b) in enumerate(zip(positions, positions[1:])):
        bonds.append(Bond(v, v + 1, b - a, segment_lambda(0.5 * (a + b))))
    conds = [p.end_conditions[0]]
    conds += [VertexCondition.scaling(strengths[x]) for x in interior]
    conds.append(p.end_conditions[1])
    return Graph(len(positions), tuple(bonds), tuple(conds), name=name)


def load_graph(path) -> Graph:
    """Read a graph JSON file; a potential JSON file is compiled on the fly."""
    d = json.loads(Path(path).read_text())
    if "box_length" in d:
        return compile_potential(PiecewisePotential.from_json(d), name=d.get("name", ""))
    return Graph.from_json(d)


def dump_graph(graph: Graph, path=None) -> str:
    text = json.dumps(graph.to_json(), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def chain(actions: Sequence[float], betas: Sequence[float],
          conditions: Sequence[VertexCondition]) -> Graph:
    """Linear chain with prescribed reduced actions and scaling factors."""
    bonds = [Bond(v, v + 1, s / b, 1.0 - b * b) for v, (s, b) in enumerate(zip(actions, betas))]
    return Graph(len(bonds) + 1, tuple(bonds), tuple(conditions))
