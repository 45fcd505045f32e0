"""Named example graphs and parameterised families.

Each constructor takes keyword parameters with sensible defaults and returns
a :class:`~qgraph.graph.Graph`.  Piecewise potentials in a box of length 1
are built through :func:`~qgraph.graph.compile_potential`, so the step and
delta examples come out as chains with the same vertex ordering.
"""
from __future__ import annotations

import inspect
import json
from dataclasses import dataclass
from importlib import resources
from typing import Callable

from .graph import (DIRICHLET, NEUMANN, Bond, Graph, PiecewisePotential, chain,
                    compile_potential)

__all__ = ["Example", "REGISTRY", "FAMILIES", "get", "build", "family_graph",
           "shipped_files", "load_shipped"]


def free_box(length: float = 1.0) -> Graph:
    """Single bond with Dirichlet ends; spectrum n pi / length."""
    return Graph(2, (Bond(0, 1, length),), (DIRICHLET, DIRICHLET), name="free-box")


def step_in_box(b: float = 0.3, lam: float = 0.5) -> Graph:
    """Potential step of height lam*E on (b, 1)."""
    return compile_potential(PiecewisePotential(1.0, (b,), (0.0, lam)), name="step-in-box")


def delta_in_box(x: float = 0.37, strength: float = 1.0) -> Graph:
    """Scaling delta spike at x in an otherwise free box."""
    p = PiecewisePotential(1.0, (), (0.0,), ((x, strength),))
    return compile_potential(p, name="delta-in-box")


def step_delta_in_box(b: float = 0.4, lam: float = 0.6, strength: float = 0.7) -> Graph:
    """Step at b with a delta spike sitting on the step edge."""
    p = PiecewisePotential(1.0, (b,), (0.0, lam), ((b, strength),))
    return compile_potential(p, name="step-delta-in-box")


def two_steps_in_box(b1: float = 0.3, b2: float = 0.65, lam2: float = 0.4,
                     lam3: float = -0.3) -> Graph:
    p = PiecewisePotential(1.0, (b1, b2), (0.0, lam2, lam3))
    return compile_potential(p, name="two-steps-in-box")


def four_vertex_chain(r2: float = 0.2, r3: float = 0.3, s1: float = 0.25,
                      s2: float = 0.33, s3: float = 0.42) -> Graph:
    """Four-vertex Dirichlet chain with prescribed reflection amplitudes.

    ``r2`` and ``r3`` are the reflection coefficients at the two inner
    vertices (for waves arriving from the left), ``s1..s3`` the reduced
    actions of the three bonds.  Both reflections must lie in (-1, 1).
    """
    if not (-1 < r2 < 1 and -1 < r3 < 1):
        raise ValueError("reflection amplitudes must lie in (-1, 1)")
    b12 = 1.0
    b23 = b12 * (1 - r2) / (1 + r2)
    b34 = b23 * (1 - r3) / (1 + r3)
    g = chain((s1, s2, s3), (b12, b23, b34), (DIRICHLET, NEUMANN, NEUMANN, DIRICHLET))
    return Graph(g.n_vertices, g.bonds, g.vertex_conditions, name="four-vertex-chain")


def two_delta_box(x2: float = 0.27, x3: float = 0.71, lam2: float = 0.8,
                  lam3: float = 1.7) -> Graph:
    p = PiecewisePotential(1.0, (), (0.0,), ((x2, lam2), (x3, lam3)))
    return compile_potential(p, name="two-delta-box")


def circle(beta1: float = 1.0, beta2: float = 0.61803, L1: float = 0.45,
           L2: float = 0.7913) -> Graph:
    """Two vertices joined by two bonds (a ring with two potential segments).

    The defaults keep the two reduced actions incommensurate enough that no
    root pair meets a separator within the first few hundred levels.
    """
    bonds = (Bond(0, 1, L1, 1 - beta1 ** 2), Bond(1, 0, L2, 1 - beta2 ** 2))
    return Graph(2, bonds, (NEUMANN, NEUMANN), name="circle")


def star(beta1: float = 1.0, beta2: float = 0.7, beta3: float = 1.3, L1: float = 0.5137,
         L2: float = 0.8123, L3: float = 0.3141) -> Graph:
    """Three-armed star, Dirichlet at the tips, Neumann-type centre."""
    bonds = tuple(Bond(i, 3, L, 1 - b ** 2)
                  for i, (b, L) in enumerate(((beta1, L1), (beta2, L2), (beta3, L3))))
    return Graph(4, bonds, (DIRICHLET,) * 3 + (NEUMANN,), name="star")


def fig2(L01: float = 0.7, L02: float = 1.1, L12: float = 0.9, L13: float = 1.3,
         L23: float = 0.6, L24: float = 1.7, L34: float = 0.8) -> Graph:
    """Five vertices, seven bonds; only the topology matters for orbit counts."""
    bonds = (Bond(0, 1, L01), Bond(0, 2, L02), Bond(1, 2, L12), Bond(1, 3, L13),
             Bond(2, 3, L23), Bond(2, 4, L24), Bond(3, 4, L34))
    return Graph(5, bonds, (NEUMANN,) * 5, name="fig2")


def manhattan(n_steps: int = 4, height: float = 0.6) -> PiecewisePotential:
    """Box with ``n_steps`` equally wide plateaus alternating between 0 and ``height``."""
    bp = tuple((i + 1) / n_steps for i in range(n_steps - 1))
    lams = tuple(height if i % 2 else 0.0 for i in range(n_steps))
    return PiecewisePotential(1.0, bp, lams)


@dataclass(frozen=True)
class Example:
    name: str
    build: Callable[..., object]
    summary: str

    def parameters(self) -> dict[str, float]:
        sig = inspect.signature(self.build)
        return {k: p.default for k, p in sig.parameters.items()}


REGISTRY: dict[str, Example] = {e.name: e for e in (
    Example("free-box", free_box, "single bond, Dirichlet ends"),
    Example("step-in-box", step_in_box, "potential step in a box"),
    Example("delta-in-box", delta_in_box, "delta spike in a box"),
    Example("step-delta-in-box", step_delta_in_box, "step plus delta at the step"),
    Example("two-steps-in-box", two_steps_in_box, "two steps, four-vertex chain"),
    Example("four-vertex-chain", four_vertex_chain, "chain parameterised by reflections"),
    Example("two-delta-box", two_delta_box, "two delta spikes in a box"),
    Example("circle", circle, "two-bond ring"),
    Example("star", star, "three-armed star"),
    Example("fig2", fig2, "five-vertex seven-bond topology"),
    Example("manhattan", manhattan, "alternating plateau potential (returned as a piecewise potential)"),
)}

# family name -> (constructor, first axis, second axis, axis range)
FAMILIES: dict[str, tuple[Callable[..., Graph], str, str, tuple[float, float]]] = {
    "four-vertex-chain": (four_vertex_chain, "r2", "r3", (-0.99, 0.99)),
    "two-delta-box": (two_delta_box, "lam2", "lam3", (0.0, 4.0)),
    "circle": (circle, "beta1", "beta2", (0.2, 1.5)),
}


def get(name: str) -> Example:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(REGISTRY)}") from None


def build(name: str, **params) -> Graph:
    """Construct a registered example as a graph (potentials are compiled)."""
    obj = get(name).build(**params)
    if isinstance(obj, PiecewisePotential):
        obj = compile_potential(obj, name=name)
    return obj


def family_graph(family: str, x: float, y: float) -> Graph:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    ctor, px, py, _ = FAMILIES[family]
    return ctor(**{px: x, py: y})


def shipped_files() -> list[str]:
    """Names of the example files bundled with the package."""
    root = resources.files("qgraph") / "data"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def load_shipped(filename: str) -> dict:
    return json.loads((resources.files("qgraph") / "data" / filename).read_text())


def _write_shipped(directory) -> None:
    """Regenerate the bundled JSON files (development helper)."""
    from pathlib import Path

    directory = Path(directory)
    for name, ex in REGISTRY.items():
        obj = ex.build()
        text = json.dumps(obj.to_json(), indent=2, sort_keys=True)
        (directory / f"{name}.json").write_text(text + "\n")

