"""Vertex scattering matrices and the bond scattering matrix S(k) = D(k) T."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .graph import DirectedBond, Graph, directed_bonds, validate

__all__ = [
    "VertexSigma",
    "ScatteringAssembly",
    "vertex_sigma",
    "assemble",
    "S_of_k",
    "delta_direct",
    "det_phase",
    "theta0_increment",
    "D_of_k",
]


@dataclass(frozen=True)
class VertexSigma:
    """k-independent scattering matrix of one vertex.

    ``matrix[a, b]`` is the amplitude for arriving along incident bond
    ``bonds[a]`` and leaving along ``bonds[b]``.
    """

    vertex: int
    bonds: tuple[int, ...]
    matrix: np.ndarray

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(len(m)))))


def vertex_sigma(graph: Graph, i: int) -> VertexSigma:
    incident = tuple(t for t, b in enumerate(graph.bonds) if i in (b.i, b.j))
    cond = graph.vertex_conditions[i]
    d = len(incident)
    if cond.is_dirichlet:
        return VertexSigma(i, incident, -np.eye(d, dtype=complex))
    w = np.sqrt([graph.bonds[t].beta for t in incident])
    v = float(np.sum(w * w))
    sigma = -np.eye(d, dtype=complex) + 2.0 * np.outer(w, w) / (v + 1j * cond.lambda0)
    return VertexSigma(i, incident, sigma)


@dataclass(frozen=True, eq=False)
class ScatteringAssembly:
    graph: Graph
    bonds: tuple[DirectedBond, ...]
    T: np.ndarray
    beta: np.ndarray
    L: np.ndarray
    A: np.ndarray
    S0: float
    gamma0: float
    v: np.ndarray
    tol: Tolerances = DEFAULT

    @property
    def dim(self) -> int:
        return len(self.bonds)

    @property
    def actions(self) -> np.ndarray:
        return self.beta * self.L

    @property
    def magnetic_phase(self) -> np.ndarray:
        return self.A * self.L

    def admissibility(self) -> np.ndarray:
        """0/1 matrix M[I, J] = 1 iff the passage I -> J has nonzero amplitude."""
        return (np.abs(self.T.T) > self.tol.admissibility).astype(np.int64)


def assemble(graph: Graph, tol: Tolerances = DEFAULT) -> ScatteringAssembly:
    """Build T, the directed-bond data, S0 and gamma0 for ``graph``."""
    validate(graph).raise_if_invalid()
    db = directed_bonds(graph)
    n = len(db)
    # (undirected bond, vertex) -> directed bond leaving / arriving there
    leaving = {(b.bond, b.tail): b.index for b in db}
    arriving = {(b.bond, b.head): b.index for b in db}
    T = np.zeros((n, n), dtype=complex)
    v = np.zeros(graph.n_vertices)
    gamma0 = 0.5 * (graph.n_bonds + graph.n_vertices)
    for i in range(graph.n_vertices):
        sig = vertex_sigma(graph, i)
        v[i] = sum(graph.bonds[t].beta for t in sig.bonds)
        for a, b_in in enumerate(sig.bonds):
            for b, b_out in enumerate(sig.bonds):
                T[leaving[(b_out, i)], arriving[(b_in, i)]] = sig.matrix[a, b]
        cond = graph.vertex_conditions[i]
        if cond.is_dirichlet:
            gamma0 += 0.5
        else:
            gamma0 += math.atan(cond.lambda0 / v[i]) / math.pi
    beta = np.array([b.beta for b in db])
    L = np.array([b.L for b in db])
    A = np.array([b.A for b in db])
    S0 = float(sum(b.action for b in graph.bonds))
    return ScatteringAssembly(graph, tuple(db), T, beta, L, A, S0, gamma0, v, tol)


def D_of_k(asm: ScatteringAssembly, k):
    """Diagonal of D(k); shape ``k.shape + (2N_B,)``."""
    k = np.asarray(k, dtype=float)
    return np.exp(1j * (np.multiply.outer(k, asm.beta) + asm.A) * asm.L)


def S_of_k(asm: ScatteringAssembly, k):
    """S(k) = D(k) T.  Vectorised over ``k``: returns ``k.shape + (n, n)``."""
    return D_of_k(asm, k)[..., :, None] * asm.T


def delta_direct(asm: ScatteringAssembly, k):
    """Spectral determinant det[1 - S(k)] by dense LU."""
    S = S_of_k(asm, k)
    return np.linalg.det(np.eye(asm.dim) - S)


def det_phase(asm: ScatteringAssembly, k):
    """Half the phase of det S(k), wrapped to (-pi/2, pi/2]."""
    d = np.linalg.det(S_of_k(asm, k))
    half = 0.5 * np.angle(d)
    return half


def theta0_increment(asm: ScatteringAssembly, k1: float, k2: float) -> float:
    """Theta0(k2) - Theta0(k1), with Theta0 = (1/2) arg det S(k) unwrapped continuously.

    Samples are spaced below pi / (2 S0) so the full phase of det S moves
    by less than pi between neighbours.
    """
    n = max(2, int(math.ceil(abs(k2 - k1) * 2 * asm.S0 / math.pi)) + 2)
    ks = np.linspace(k1, k2, n)
    phase = np.unwrap(np.angle(np.linalg.det(S_of_k(asm, ks))))
    return 0.5 * float(phase[-1] - phase[0])
