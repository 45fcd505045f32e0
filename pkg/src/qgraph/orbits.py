"""Periodic orbits on the directed-bond graph and trace resummation.

Two routes to the same orbit sums are provided.  Prime orbits can be listed
explicitly (Lyndon words over the directed bonds, generated with a
Fredricksen-Kessler-Maiorana style recursion restricted to admissible
transitions), which is feasible up to code lengths of roughly 20.  Traces
of powers of S(k) give the sum over all orbits of a fixed total code length
at matrix-multiplication cost, which reaches code lengths of several hundred.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import reduce

import numpy as np

from .errors import InadmissibleCodeError, SizeCapError
from .scattering import ScatteringAssembly, S_of_k

__all__ = [
    "PeriodicOrbit",
    "OrbitCensus",
    "canonical",
    "is_primitive",
    "orbit_weight",
    "enumerate_primes",
    "repetitions",
    "closed_walk_counts",
    "census",
    "trace_term",
    "trace_powers",
    "staircase_fluctuation",
]


@dataclass(frozen=True)
class PeriodicOrbit:
    code: tuple[int, ...]
    S_p0: float
    weight: complex
    prime: bool = True
    nu: int = 1

    @property
    def length(self) -> int:
        return len(self.code)

    def label(self, asm: ScatteringAssembly) -> str:
        return " ".join(asm.bonds[i].label for i in self.code)


def canonical(code) -> tuple[int, ...]:
    """Lexicographically minimal rotation of a cyclic word."""
    code = tuple(code)
    return min(code[i:] + code[:i] for i in range(len(code))) if code else code


def is_primitive(code) -> bool:
    """True unless the cyclic word is a repetition of a shorter word."""
    code = tuple(code)
    n = len(code)
    return all(code != code[d:] + code[:d] for d in range(1, n) if n % d == 0)


def orbit_weight(asm: ScatteringAssembly, code) -> complex:
    """Product of vertex amplitudes along the closed code, times its magnetic phase."""
    code = tuple(code)
    if not code:
        raise InadmissibleCodeError("empty code")
    w = 1.0 + 0j
    phase = 0.0
    for t, I in enumerate(code):
        J = code[(t + 1) % len(code)]
        amp = asm.T[J, I]
        if abs(amp) <= asm.tol.admissibility:
            raise InadmissibleCodeError(
                f"transition {asm.bonds[I].label} -> {asm.bonds[J].label} is not admissible")
        w *= amp
        phase += asm.A[I] * asm.L[I]
    return complex(w * cmath.exp(1j * phase))


def _successors(asm: ScatteringAssembly) -> list[list[int]]:
    M = asm.admissibility()
    return [np.flatnonzero(M[i]).tolist() for i in range(asm.dim)]


def closed_walk_counts(asm: ScatteringAssembly, l_max: int) -> list[int]:
    """Exact Tr M^l for l = 1..l_max (unweighted admissibility matrix)."""
    M = [[int(x) for x in row] for row in asm.admissibility()]
    n = len(M)
    P = [row[:] for row in M]
    out = []
    for _ in range(l_max):
        out.append(sum(P[i][i] for i in range(n)))
        P = [[sum(P[i][k] * M[k][j] for k in range(n) if P[i][k]) for j in range(n)]
             for i in range(n)]
    return out


def _estimated_prime_count(asm: ScatteringAssembly, l_max: int) -> float:
    M = asm.admissibility().astype(float)
    rho = max(abs(np.linalg.eigvals(M))) if M.size else 0.0
    return float(sum(asm.dim * rho ** l / l for l in range(1, l_max + 1)))


def _lyndon_words(succ, n_letters: int, l_max: int):
    """Yield every admissible Lyndon word of length <= l_max, depth first."""
    ordered = [sorted(x) for x in succ]
    sets = [set(x) for x in succ]
    for first in range(n_letters):
        yield from _extend_sorted([first], ordered, sets, l_max)


def _extend_sorted(word, ordered, sets, l_max):
    stack = [(1, 0)]  # (period, next successor index)
    while stack:
        p, idx = stack[-1]
        t = len(word)
        if idx == 0 and p == t and word[0] in sets[word[-1]]:
            yield tuple(word)
        cand = ordered[word[-1]] if t < l_max else ()
        lo = word[t - p]
        while idx < len(cand) and cand[idx] < lo:
            idx += 1
        if idx >= len(cand):
            stack.pop()
            word.pop()
            continue
        a = cand[idx]
        stack[-1] = (p, idx + 1)
        word.append(a)
        stack.append((p if a == lo else t + 1, 0))


def enumerate_primes(asm: ScatteringAssembly, l_max: int) -> list[PeriodicOrbit]:
    """All prime periodic orbits of code length <= l_max, in canonical rotation."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    est = _estimated_prime_count(asm, l_max)
    if est > asm.tol.max_orbits:
        raise SizeCapError(
            f"about {est:.3g} prime orbits up to length {l_max} exceeds the cap "
            f"{asm.tol.max_orbits}")
    actions = asm.actions
    out = []
    for code in _lyndon_words(_successors(asm), asm.dim, l_max):
        out.append(PeriodicOrbit(code, float(actions[list(code)].sum()), orbit_weight(asm, code)))
    out.sort(key=lambda o: (o.length, o.code))
    return out


def repetitions(primes, l_max: int) -> list[PeriodicOrbit]:
    """Primes together with their nu-fold repetitions of total length <= l_max."""
    out = []
    for p in primes:
        for nu in range(1, l_max // p.length + 1):
            out.append(PeriodicOrbit(p.code * nu, nu * p.S_p0, p.weight ** nu, nu == 1, nu))
    out.sort(key=lambda o: (o.length, o.code))
    return out


@dataclass(frozen=True)
class OrbitCensus:
    l_max: int
    primes: tuple[int, ...]  # prime orbits of length exactly l (index l-1)
    closed_walks: tuple[int, ...]  # Tr M^l
    period: int
    spectral_radius: float
    entropy: float  # growth-rate estimate at l_max
    entropy_naive: float  # ln #(l_max) / l_max

    @property
    def entropy_benchmark(self) -> float:
        return math.log(self.spectral_radius)

    def walks_from_primes(self) -> list[int]:
        """sum over d | l of d * primes[d]; equals closed_walks exactly."""
        return [sum(d * self.primes[d - 1] for d in range(1, l + 1) if l % d == 0)
                for l in range(1, self.l_max + 1)]


def _count_primes(asm: ScatteringAssembly, l_max: int) -> list[int]:
    counts = [0] * l_max
    for code in _lyndon_words(_successors(asm), asm.dim, l_max):
        counts[len(code) - 1] += 1
    return counts


def census(asm: ScatteringAssembly, l_max: int) -> OrbitCensus:
    """Prime-orbit counts by code length and topological entropy estimates.

    The growth-rate estimate rebuilds the number of closed walks
    ``W(l) = sum_{d | l} d pi(d)`` from the prime counts ``pi`` and compares it
    one period ``h`` apart, ``ln(W(l) / W(l-h)) / h``.  This removes the
    polynomial prefactor that biases ``ln #(l) / l`` at finite ``l``.
    """
    est = _estimated_prime_count(asm, l_max)
    if est > asm.tol.max_orbits:
        raise SizeCapError(f"about {est:.3g} prime orbits exceeds the cap {asm.tol.max_orbits}")
    primes = _count_primes(asm, l_max)
    walks = closed_walk_counts(asm, l_max)
    M = asm.admissibility().astype(float)
    rho = float(max(abs(np.linalg.eigvals(M))))
    h = reduce(math.gcd, [l for l, w in enumerate(walks, 1) if w], 0) or 1
    total = sum(primes)
    naive = math.log(total) / l_max if total else float("nan")
    c = OrbitCensus(l_max, tuple(primes), tuple(walks), h, rho, float("nan"), naive)
    W = c.walks_from_primes()
    for l in range(l_max, h, -1):
        if l % h == 0 and W[l - 1] and W[l - h - 1]:
            return replace(c, entropy=math.log(W[l - 1] / W[l - h - 1]) / h)
    return c


def trace_powers(asm: ScatteringAssembly, k, L: int) -> np.ndarray:
    """Tr S(k)^m for m = 1..L, by repeated multiplication; shape ``k.shape + (L,)``."""
    k = np.asarray(k, dtype=float)
    S = S_of_k(asm, k)
    out = np.empty(k.shape + (L,), dtype=complex)
    P = S
    for m in range(L):
        out[..., m] = np.trace(P, axis1=-2, axis2=-1)
        if m + 1 < L:
            P = P @ S
    return out


def trace_term(asm: ScatteringAssembly, m: int, k):
    """(1/m) Tr S(k)^m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return trace_powers(asm, k, m)[..., m - 1] / m


def staircase_fluctuation(asm: ScatteringAssembly, k, L: int):
    """Oscillating part of the spectral staircase, truncated at code length L."""
    k = np.asarray(k, dtype=float)
    if L < 1:
        return np.zeros(k.shape)
    tr = trace_powers(asm, k, L)
    return (tr @ (1.0 / np.arange(1, L + 1))).imag / np.pi
