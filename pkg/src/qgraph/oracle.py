"""Ground-truth roots of the spectral equation, independent of orbit sums.

Roots are located either from the extracted cosine form
``F(k) = cos(S0 k - pi gamma0) - Phi(k)`` or, with no model at hand, from the
real function ``Re[exp(-i(S0 k - pi gamma0)) det(1 - S(k))] / 2``, which
equals ``F`` but is evaluated by dense determinants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .charpoly import SpectralModel
from .errors import PreconditionError
from .scattering import ScatteringAssembly, delta_direct

__all__ = [
    "RootScan",
    "find_roots",
    "staircase",
    "average_staircase",
    "convergence_study",
    "direct_F",
]


@dataclass(frozen=True)
class RootScan:
    k_max: float
    method: str
    roots: np.ndarray
    residuals: np.ndarray
    multiplicity: np.ndarray
    heuristic: bool = False  # irregular graphs: completeness not guaranteed

    @property
    def flagged(self) -> np.ndarray:
        """Suspected double roots."""
        return self.roots[self.multiplicity > 1]

    def __len__(self) -> int:
        return int(self.multiplicity.sum())


def direct_F(asm: ScatteringAssembly):
    """F(k) computed from det[1 - S(k)] without the trigonometric expansion."""
    def F(k):
        k = np.asarray(k, dtype=float)
        phase = np.exp(-1j * (asm.S0 * k - math.pi * asm.gamma0))
        return 0.5 * (phase * delta_direct(asm, k)).real
    return F


def _source(source):
    if isinstance(source, SpectralModel):
        return source.F, source.S0, source.gamma0, source.alpha, source
    if isinstance(source, ScatteringAssembly):
        return direct_F(source), source.S0, source.gamma0, None, None
    raise TypeError("source must be a SpectralModel or a ScatteringAssembly")


def _refine(F, a, b):
    return brentq(F, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def find_roots(source, k_max: float, method: str = "auto") -> RootScan:
    """All positive roots of the spectral equation up to ``k_max``.

    ``frame-bisection`` brackets one root per separator interval (valid for
    regular and generic marginal graphs); ``dense-scan`` samples at a step
    tied to S0 and also reports tangential (double) roots.
    """
    if not k_max > 0:
        raise ValueError("k_max must be > 0")
    F, S0, g0, alpha, model = _source(source)
    if method == "auto":
        method = "frame-bisection" if model is not None and alpha <= 1 + model.tol.marginal \
            else "dense-scan"
    # k = 0 is often a (tangential) root of F; start just above it so that
    # rounding noise there cannot masquerade as a positive root
    eps = 1e-6 * math.pi / S0
    touch = model.tol.double_root if model is not None else 1e-10
    if method == "frame-bisection":
        if model is None:
            raise PreconditionError("frame-bisection needs the extracted spectral model")
        roots, mult = _frame_bisection(F, S0, g0, eps, k_max, model.tol.double_root)
    elif method == "dense-scan":
        step = math.pi / (8 * S0 * (1 + (alpha if alpha is not None else 1.0)))
        roots, mult = _dense_scan(F, eps, k_max, step, touch)
    else:
        raise ValueError(f"unknown method {method!r}")
    Fm = model.F if model is not None else F
    res = np.abs(Fm(roots)) if len(roots) else np.zeros(0)
    heuristic = model is None or model.alpha > 1 + model.tol.marginal
    return RootScan(k_max, method, roots, res, mult, heuristic)


def _frame_bisection(F, S0, g0, eps, k_max, touch):
    # separators sit where cos(S0 k - pi gamma0) = +-1, i.e. k = pi (m + gamma0) / S0
    m_lo = math.floor(-g0)
    m_hi = math.ceil(k_max * S0 / math.pi - g0) + 1
    edges = math.pi * (np.arange(m_lo, m_hi + 1) + g0) / S0
    edges = edges[edges > eps]
    edges = np.concatenate([[eps], edges])
    vals = F(edges)
    # |F| can only vanish at a separator when alpha == 1; such a zero is
    # tangential and serves both neighbouring frames
    zero = np.abs(vals) <= touch
    roots, mult = [], []
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        if a >= k_max:
            break
        if zero[i]:
            roots.append(a), mult.append(2)
        elif not zero[i + 1] and vals[i] * vals[i + 1] < 0:
            roots.append(_refine(F, a, b)), mult.append(1)
    roots, mult = np.array(roots), np.array(mult, dtype=int)
    keep = (roots > eps) & (roots <= k_max) if len(roots) else np.zeros(0, dtype=bool)
    return roots[keep], mult[keep]


def _dense_scan(F, eps, k_max, step, touch):
    ks = np.arange(eps, k_max + step, step)
    vals = F(ks)
    roots, mult = [], []
    for i in range(len(ks) - 1):
        a, b, fa, fb = ks[i], ks[i + 1], vals[i], vals[i + 1]
        if fa == 0.0:
            touch = 0 < i and vals[i - 1] * fb > 0
            roots.append(a), mult.append(2 if touch else 1)
        elif fa * fb < 0:
            roots.append(_refine(F, a, b)), mult.append(1)
    # tangential zeros: local minima of |F| without a sign change
    absF = np.abs(vals)
    for i in range(1, len(ks) - 1):
        if absF[i] <= absF[i - 1] and absF[i] <= absF[i + 1] and \
                vals[i - 1] * vals[i + 1] > 0 and vals[i] * vals[i - 1] > 0:
            opt = minimize_scalar(lambda k: abs(float(F(k))), bounds=(ks[i - 1], ks[i + 1]),
                                  method="bounded", options={"xatol": 1e-14})
            if abs(float(F(opt.x))) < touch:
                roots.append(float(opt.x)), mult.append(2)
    order = np.argsort(roots)
    roots = np.array(roots)[order] if roots else np.zeros(0)
    mult = np.array(mult, dtype=int)[order] if mult else np.zeros(0, dtype=int)
    keep = (roots > eps) & (roots <= k_max)
    return roots[keep], mult[keep]


def staircase(scan: RootScan, k) -> np.ndarray:
    """Number of roots <= k (double roots counted twice)."""
    k = np.asarray(k, dtype=float)
    if np.any(k > scan.k_max):
        raise ValueError("k beyond the scanned range")
    csum = np.concatenate([[0], np.cumsum(scan.multiplicity)])
    return csum[np.searchsorted(scan.roots, k, side="right")]


def average_staircase(model: SpectralModel, k):
    """Piercing average (S0/pi) k - (mu + gamma0 + 1)."""
    if model.mu is None:
        raise PreconditionError("mu has not been determined")
    return model.S0 / math.pi * np.asarray(k, dtype=float) - (model.mu + model.gamma0 + 1)


def convergence_study(model: SpectralModel, asm: ScatteringAssembly, n_list, L_list):
    """Relative errors |k_n^(L) - k_n| / k_n of the explicit formula.

    Returns a list of ``(n, L, k_explicit, k_oracle, eps)`` tuples.
    """
    from .spectra import eigenvalue_explicit, oracle_levels

    n_list = list(n_list)
    exact = oracle_levels(model, max(n_list))
    rows = []
    for n in n_list:
        for L in L_list:
            k = eigenvalue_explicit(model, asm, n, L)
            rows.append((n, L, k, exact[n - 1], abs(k - exact[n - 1]) / exact[n - 1]))
    return rows
