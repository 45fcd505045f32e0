"""Exact trigonometric expansion of det[1 - S(k)] and regularity classes.

The determinant of ``1 - D(k) T`` is expanded over principal minors::

    det(1 - D T) = sum_U (-1)^|U| det(T_UU) prod_{I in U} D_II(k)

Each directed-bond subset ``U`` contributes a single exponential whose
frequency is fixed by how many times every undirected bond occurs in ``U``
(0, 1 or 2 times), so terms are keyed by that integer exponent vector.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import ConsistencyError, SizeCapError
from .scattering import ScatteringAssembly

__all__ = [
    "TrigTerm",
    "TrigPolynomial",
    "RegularityClass",
    "SpectralModel",
    "Classification",
    "expand_determinant",
    "extract_model",
    "classify",
    "spectral_model",
]


@dataclass(frozen=True)
class TrigTerm:
    provenance: tuple[tuple[int, ...], ...]  # exponent vectors merged into this term
    frequency: float
    coefficient: complex


@dataclass(frozen=True)
class TrigPolynomial:
    """Finite exponential sum ``sum_m c_m exp(i s_m k)``."""

    terms: tuple[TrigTerm, ...]
    n_subsets: int = 0

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([t.frequency for t in self.terms])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms])

    def __len__(self) -> int:
        return len(self.terms)

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        phase = np.exp(1j * np.multiply.outer(k, self.frequencies))
        return phase @ self.coefficients


def expand_determinant(asm: ScatteringAssembly, chunk: int = 1 << 16) -> TrigPolynomial:
    """Expand det[1 - S(k)] into a trigonometric polynomial (exact bookkeeping)."""
    tol = asm.tol
    n = asm.dim
    if n > tol.max_directed_bonds:
        raise SizeCapError(f"2N_B = {n} exceeds the expansion cap of {tol.max_directed_bonds}")
    nb = asm.graph.n_bonds
    bond_of = np.array([b.bond for b in asm.bonds])
    mag = asm.magnetic_phase
    weights = 3 ** np.arange(nb, dtype=np.int64)
    acc: dict[int, complex] = {0: 1.0 + 0j}
    for size in range(1, n + 1):
        it = combinations(range(n), size)
        while True:
            block = np.array(list(_take(it, chunk)), dtype=np.int64)
            if block.size == 0:
                break
            sub = asm.T[block[:, :, None], block[:, None, :]]
            dets = np.linalg.det(sub)
            coef = (-1) ** size * dets * np.exp(1j * mag[block].sum(axis=1))
            keys = weights[bond_of[block]].sum(axis=1)
            uniq, inv = np.unique(keys, return_inverse=True)
            re = np.bincount(inv, weights=coef.real)
            im = np.bincount(inv, weights=coef.imag)
            for key, r, i in zip(uniq.tolist(), re, im):
                acc[key] = acc.get(key, 0j) + complex(r, i)
    actions = np.array([b.action for b in asm.graph.bonds])
    raw = []
    for key, c in acc.items():
        vec = tuple((key // 3 ** b) % 3 for b in range(nb))
        raw.append((float(np.dot(vec, actions)), vec, c))
    raw.sort(key=lambda t: (t[0], t[1]))
    terms = _merge_by_frequency(raw, tol.frequency_merge * asm.S0, tol.coefficient_drop)
    return TrigPolynomial(tuple(terms), n_subsets=2 ** n)


def _take(it, n):
    for _, x in zip(range(n), it):
        yield x


def _merge_by_frequency(raw, width, drop):
    groups = []
    for s, vec, c in raw:
        if groups and s - groups[-1][0][-1] <= width:
            groups[-1][0].append(s)
            groups[-1][1].append(vec)
            groups[-1][2] += c
        else:
            groups.append([[s], [vec], c])
    terms = []
    for freqs, vecs, c in groups:
        if abs(c) < drop:
            continue
        terms.append(TrigTerm(tuple(vecs), float(np.mean(freqs)), complex(c)))
    return terms


class RegularityClass(str, enum.Enum):
    REGULAR = "Regular"
    MARGINAL = "Marginal"
    IRREGULAR = "Irregular"


@dataclass(frozen=True)
class SpectralModel:
    """Spectral equation ``cos(S0 k - pi gamma0) = sum_i a_i cos(S_i k - pi gamma_i)``."""

    S0: float
    gamma0: float
    a: np.ndarray
    S: np.ndarray
    gamma: np.ndarray
    tol: Tolerances = field(default=DEFAULT, compare=False)
    mu: int | None = None

    @property
    def alpha(self) -> float:
        return float(np.sum(np.abs(self.a)))

    @property
    def regularity(self) -> "RegularityClass":
        return _class_of(self.alpha, self.tol.marginal)

    @property
    def terms(self) -> list[tuple[float, float, float]]:
        return list(zip(self.a.tolist(), self.S.tolist(), self.gamma.tolist()))

    def with_mu(self, mu: int) -> "SpectralModel":
        return replace(self, mu=int(mu))

    def phi(self, k):
        """Characteristic function."""
        k = np.asarray(k, dtype=float)
        arg = np.multiply.outer(k, self.S) - np.pi * self.gamma
        return np.cos(arg) @ self.a

    def dphi(self, k):
        k = np.asarray(k, dtype=float)
        arg = np.multiply.outer(k, self.S) - np.pi * self.gamma
        return -np.sin(arg) @ (self.a * self.S)

    def lhs(self, k):
        return np.cos(self.S0 * np.asarray(k, dtype=float) - np.pi * self.gamma0)

    def F(self, k):
        """cos(S0 k - pi gamma0) - Phi(k); its zeros are the spectrum."""
        return self.lhs(k) - self.phi(k)

    def phasors(self) -> dict[float, complex]:
        """Phi(k) = Re sum_w z_w exp(i w k); keyed by frequency."""
        out: dict[float, complex] = {}
        for a, s, g in self.terms:
            z = a * np.cos(np.pi * g) if s == 0 else a * np.exp(-1j * np.pi * g)
            out[s] = out.get(s, 0) + z
        return out

    def to_json(self) -> dict:
        return {
            "S0": self.S0,
            "gamma0": self.gamma0,
            "alpha": self.alpha,
            "class": self.regularity.value,
            "mu": self.mu,
            "terms": [{"a": a, "S": s, "gamma": g} for a, s, g in self.terms],
        }


def _class_of(alpha: float, tol: float) -> RegularityClass:
    if alpha < 1 - tol:
        return RegularityClass.REGULAR
    if abs(alpha - 1) <= tol:
        return RegularityClass.MARGINAL
    return RegularityClass.IRREGULAR


def extract_model(tp: TrigPolynomial, asm: ScatteringAssembly, n_probe: int = 100,
                  seed: int = 0) -> SpectralModel:
    """Factor out exp(i(k S0 - pi gamma0)) and read off the cosine form."""
    tol = asm.tol
    S0, g0 = asm.S0, asm.gamma0
    width = tol.frequency_merge * S0
    w = tp.frequencies - S0
    d = tp.coefficients * np.exp(1j * np.pi * g0)

    top = np.flatnonzero(np.abs(w - S0) <= width)
    bottom = np.flatnonzero(np.abs(w + S0) <= width)
    if len(top) != 1 or len(bottom) != 1:
        raise ConsistencyError("leading frequency S0 is not unique")
    # the leading pair must be exactly 2 cos(S0 k - pi gamma0): checks gamma0 mod 2
    lead_err = max(abs(d[top[0]] - np.exp(-1j * np.pi * g0)),
                   abs(d[bottom[0]] - np.exp(1j * np.pi * g0)))
    if lead_err > 1e-9:
        raise ConsistencyError(f"gamma0 disagrees with the determinant phase ({lead_err:.2e})")

    rng = np.random.default_rng(seed)
    kp = rng.uniform(0, 50.0 / S0, n_probe)
    R = np.exp(1j * np.multiply.outer(kp, w)) @ d
    scale = max(1.0, float(np.sum(np.abs(d))))
    if np.max(np.abs(R.imag)) > tol.reality * scale:
        raise ConsistencyError(
            f"remainder is not real (max |Im R| = {np.max(np.abs(R.imag)):.2e})")

    a, S, gam = [], [], []
    for idx in np.argsort(w):
        wi = w[idx]
        if idx in (top[0], bottom[0]) or wi < -width:
            continue
        if abs(wi) <= width:
            a.append(-0.5 * d[idx].real)
            S.append(0.0)
            gam.append(0.0)
            continue
        partner = np.flatnonzero(np.abs(w + wi) <= width)
        z = d[idx] if len(partner) != 1 else 0.5 * (d[idx] + np.conj(d[partner[0]]))
        theta = (-(np.angle(z) + np.pi) / np.pi) % 2.0
        if theta < 1.0:
            a.append(abs(z)), gam.append(theta)
        else:
            a.append(-abs(z)), gam.append(theta - 1.0)
        S.append(float(wi))
    a, S, gam = np.array(a), np.array(S), np.array(gam)
    if len(S) and np.max(S) >= S0 - width:
        raise ConsistencyError("a characteristic frequency reaches S0")
    keep = np.abs(a) >= tol.coefficient_drop
    return SpectralModel(S0, g0, a[keep], S[keep], gam[keep], tol)


def spectral_model(asm: ScatteringAssembly) -> SpectralModel:
    return extract_model(expand_determinant(asm), asm)


@dataclass(frozen=True)
class Classification:
    regularity: RegularityClass
    alpha: float
    u: float | None = None  # arccos(alpha)/S0, k-units
    allowed_width: float | None = None
    forbidden_width: float | None = None

    def to_json(self) -> dict:
        return {"class": self.regularity.value, "alpha": self.alpha, "u": self.u,
                "allowed_width": self.allowed_width, "forbidden_width": self.forbidden_width}


def classify(model: SpectralModel) -> Classification:
    alpha = model.alpha
    cls = _class_of(alpha, model.tol.marginal)
    if cls is not RegularityClass.REGULAR:
        return Classification(cls, alpha)
    u = math.acos(alpha) / model.S0
    spacing = math.pi / model.S0
    return Classification(cls, alpha, u, spacing - 2 * u, 2 * u)
