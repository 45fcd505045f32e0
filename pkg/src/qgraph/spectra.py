"""Individual eigenvalues: explicit orbit formula, implicit equation, moments.

Level ``n`` lives in the frame ``(khat_{n-1}, khat_n)`` with separators
``khat_n = pi (n + mu + gamma0 + 1) / S0``.  The explicit formula integrates
``k rho(k)`` over a frame; after integrating by parts and dropping the
boundary terms (the staircase fluctuation vanishes at separators) this is
``kbar_n - int_frame Ntilde(k) dk``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .charpoly import RegularityClass, SpectralModel
from .errors import (ClassRefusal, ConsistencyError, PreconditionError,
                     SearchWindowError, SizeCapError)
from .oracle import find_roots
from .orbits import enumerate_primes, repetitions, staircase_fluctuation
from .quadrature import adaptive_gauss_legendre
from .scattering import ScatteringAssembly

__all__ = [
    "LevelFrame",
    "LevelRecord",
    "SpectrumResult",
    "determine_mu",
    "separator",
    "separators",
    "oracle_levels",
    "eigenvalue_explicit",
    "eigenvalue_simplified",
    "eigenvalue_implicit",
    "moment",
    "compute_spectrum",
]


@dataclass(frozen=True)
class LevelFrame:
    n: int
    lo: float
    hi: float
    mean: float
    allowed: tuple[float, float] | None = None

    def contains(self, k: float) -> bool:
        return self.lo < k < self.hi

    def in_allowed(self, k: float, slack: float = 0.0) -> bool:
        """True if ``k`` lies in the closed allowed zone (widened by ``slack``).

        Roots can sit exactly on a zone edge when Phi reaches +-alpha there,
        so the test is inclusive.
        """
        if self.allowed is None:
            raise ValueError("allowed zones exist only for regular graphs")
        return self.allowed[0] - slack <= k <= self.allowed[1] + slack


def separator(model: SpectralModel, n) -> float:
    _need_mu(model)
    return math.pi / model.S0 * (np.asarray(n) + model.mu + model.gamma0 + 1)


def separators(model: SpectralModel, n: int) -> LevelFrame:
    _need_mu(model)
    lo, hi = float(separator(model, n - 1)), float(separator(model, n))
    allowed = None
    if model.regularity is RegularityClass.REGULAR:
        u = math.acos(model.alpha) / model.S0
        allowed = (lo + u, hi - u)
    return LevelFrame(n, lo, hi, 0.5 * (lo + hi), allowed)


def _need_mu(model: SpectralModel):
    if model.mu is None:
        raise PreconditionError("mu has not been determined (see determine_mu)")


def determine_mu(model: SpectralModel, check: bool = True, n_fit: int = 200) -> int:
    """Integer offset placing the first positive root in frame n = 1.

    With ``check`` the piercing-average intercept ``-(mu + gamma0 + 1)`` is
    compared against a fit to the first ``n_fit`` oracle roots (tolerance 0.1).
    """
    spacing = math.pi / model.S0
    scan = find_roots(model, 10 * spacing, method="dense-scan")
    if len(scan.roots) == 0:
        raise SearchWindowError("no positive root within 10 mean spacings")
    k1 = float(scan.roots[0])
    # k1 in (pi(mu+gamma0+1)/S0, pi(mu+gamma0+2)/S0)
    mu = math.floor(k1 / spacing - model.gamma0 - 1)
    if check:
        roots = oracle_levels(model.with_mu(mu), n_fit)
        n = np.arange(1, n_fit + 1)
        intercept = float(np.mean(n - 0.5 - roots / spacing))
        expected = -(mu + model.gamma0 + 1)
        if abs(intercept - expected) > 0.1:
            raise ConsistencyError(
                f"average staircase intercept {intercept:.4f} != {expected:.4f}")
    return mu


def oracle_levels(model: SpectralModel, n_max: int, method: str = "auto") -> np.ndarray:
    """First ``n_max`` positive roots in order, double roots listed twice."""
    spacing = math.pi / model.S0
    k_max = spacing * (n_max + 3)
    while True:
        scan = find_roots(model, k_max, method=method)
        if len(scan) >= n_max:
            return np.repeat(scan.roots, scan.multiplicity)[:n_max]
        k_max *= 1.5


def _check_class(model: SpectralModel):
    if model.regularity is RegularityClass.IRREGULAR:
        raise ClassRefusal(
            f"explicit spectral formulas need a regular or marginal graph; this one is "
            f"{model.regularity.value} (alpha = {model.alpha:.6g})")
    _need_mu(model)


def _fluctuation_integral(asm: ScatteringAssembly, lo: float, hi: float, L: int,
                          weight=None, tol: float = 1e-10, odd: bool = False) -> float:
    # integrand is band-limited: highest frequency is L * max(beta L)
    top = L * float(np.max(asm.actions))
    panels = max(1, math.ceil(top * (hi - lo) / (2 * math.pi)))

    def f(k):
        v = staircase_fluctuation(asm, k, L)
        if odd:
            v = 0.5 * (v - staircase_fluctuation(asm, -k, L))
        return v if weight is None else weight(k) * v

    return adaptive_gauss_legendre(f, lo, hi, tol=tol, degree=asm.tol.quadrature_degree,
                                   initial_panels=panels)


def _orbit_terms(asm, L, orbits):
    if L > asm.tol.max_prime_sum_length:
        raise SizeCapError(
            f"prime-sum at L = {L} is combinatorially expensive; use mode='trace-resum'")
    if orbits is None:
        orbits = enumerate_primes(asm, L)
    return repetitions([o for o in orbits if o.prime], L)


def eigenvalue_explicit(model: SpectralModel, asm: ScatteringAssembly, n: int, L: int,
                        mode: str = "trace-resum", orbits=None) -> float:
    """k_n from the periodic-orbit expansion truncated at total code length L.

    ``mode='prime-sum'`` sums the closed-form orbit series over primes and
    repetitions with ``nu * l_p <= L``; ``mode='trace-resum'`` integrates the
    same truncated staircase fluctuation numerically.  Both use identical
    term sets.
    """
    _check_class(model)
    frame = separators(model, n)
    if mode == "trace-resum":
        return frame.mean - _fluctuation_integral(asm, frame.lo, frame.hi, L,
                                                  tol=asm.tol.quadrature)
    if mode != "prime-sum":
        raise ValueError(f"unknown mode {mode!r}")
    c = n + model.mu + model.gamma0 + 0.5
    total = 0j
    for o in _orbit_terms(asm, L, orbits):
        # o carries the nu-fold action and weight; S_p and omega_p are the prime's
        S_p = o.S_p0 / o.nu
        omega = math.pi * S_p / model.S0
        total += (2.0 / S_p) * o.weight / o.nu ** 2 * math.sin(o.nu * omega / 2) \
            * np.exp(1j * o.nu * omega * c)
    return frame.mean - total.imag / math.pi


def _simplified_problems(model: SpectralModel, asm: ScatteringAssembly) -> list[str]:
    out = []
    g = asm.graph
    if any(not c.is_dirichlet and c.lambda0 != 0 for c in g.vertex_conditions):
        out.append("a non-Dirichlet vertex has lambda0 != 0")
    if np.any(asm.A != 0):
        out.append("magnetic constants are not all zero")
    if np.any(np.abs(asm.T.imag) > 0):
        out.append("orbit weights are not real")
    if model.mu is None:
        out.append("mu has not been determined")
    elif abs(model.mu + model.gamma0 + 0.5) > 1e-12:
        out.append(f"mu + gamma0 + 1/2 = {model.mu + model.gamma0 + 0.5:g}, not 0")
    return out


def eigenvalue_simplified(model: SpectralModel, asm: ScatteringAssembly, n: int, L: int,
                          mode: str | None = None, orbits=None) -> float:
    """Sine-series form of the explicit formula for real, time-reversal
    symmetric graphs whose constant phase ``mu + gamma0 + 1/2`` vanishes.

    ``n`` may be any integer; the series is odd in ``n``.  For L above the
    prime-sum cap the series is evaluated by integrating the odd part of the
    staircase fluctuation over ``(pi(n - 1/2)/S0, pi(n + 1/2)/S0)``.
    """
    problems = _simplified_problems(model, asm)
    if problems:
        raise PreconditionError("simplified formula does not apply: " + "; ".join(problems))
    _check_class(model)
    if mode is None:
        mode = "prime-sum" if L <= asm.tol.max_prime_sum_length else "trace-resum"
    base = math.pi * n / model.S0
    if mode == "trace-resum":
        h = 0.5 * math.pi / model.S0
        return base - _fluctuation_integral(asm, base - h, base + h, L, odd=True,
                                            tol=asm.tol.quadrature)
    total = 0.0
    for o in _orbit_terms(asm, L, orbits):
        S_p = o.S_p0 / o.nu
        omega = math.pi * S_p / model.S0
        total += o.weight.real / (S_p * o.nu ** 2) * math.sin(0.5 * o.nu * omega) \
            * math.sin(o.nu * omega * n)
    return base - 2.0 / math.pi * total


def eigenvalue_implicit(model: SpectralModel, n: int, tol: float | None = None,
                        return_info: bool = False):
    """Solve k = (pi(n+mu+gamma0) + x(Phi(k))) / S0 by fixed-point iteration.

    ``x = arccos(Phi)`` when ``n + mu`` is even and ``pi - arccos(Phi)`` when
    odd.  If the iteration stalls the root is bisected inside the frame and
    ``info['fallback']`` is set.
    """
    if model.regularity is not RegularityClass.REGULAR:
        raise ClassRefusal(f"implicit equation needs a regular graph, got "
                           f"{model.regularity.value}")
    _need_mu(model)
    tol = model.tol.implicit if tol is None else tol
    frame = separators(model, n)
    even = (n + model.mu) % 2 == 0
    k = frame.mean
    info = {"iterations": 0, "fallback": False}
    for it in range(1, model.tol.implicit_max_iter + 1):
        x = math.acos(float(np.clip(model.phi(k), -1.0, 1.0)))
        if not even:
            x = math.pi - x
        k_new = min(max((math.pi * (n + model.mu + model.gamma0) + x) / model.S0,
                        frame.lo), frame.hi)
        done = abs(k_new - k) <= tol
        k = k_new
        if done:
            info["iterations"] = it
            break
    else:
        from scipy.optimize import brentq
        k = brentq(model.F, frame.lo, frame.hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        info.update(iterations=model.tol.implicit_max_iter, fallback=True)
    return (k, info) if return_info else k


def moment(model: SpectralModel, asm: ScatteringAssembly, p: int, n: int, L: int) -> float:
    """Orbit expansion of k_n**p (p = 2 gives the energy E_n).

    ``int_frame k^p (S0/pi) dk - int_frame p k^(p-1) Ntilde_L(k) dk``.
    """
    if p < 1:
        raise ValueError("power must be >= 1")
    _check_class(model)
    frame = separators(model, n)
    lo, hi = frame.lo, frame.hi
    smooth = model.S0 / math.pi * (hi ** (p + 1) - lo ** (p + 1)) / (p + 1)
    # absolute tolerance on the unweighted integrand, scaled by the weight's size
    scale = p * max(abs(lo), abs(hi)) ** (p - 1)
    fluct = _fluctuation_integral(asm, lo, hi, L, weight=lambda k: p * k ** (p - 1),
                                  tol=asm.tol.quadrature * max(1.0, scale))
    return smooth - fluct


@dataclass
class LevelRecord:
    n: int
    khat_lo: float
    khat_hi: float
    k_explicit: float | None = None
    k_implicit: float | None = None
    k_oracle: float | None = None
    L: int | None = None
    residual: float | None = None  # |cos(S0 k - pi gamma0) - Phi(k)| at the reported k
    flags: list[str] = field(default_factory=list)

    @property
    def rel_err_explicit(self) -> float | None:
        if self.k_explicit is None or self.k_oracle is None:
            return None
        return abs(self.k_explicit - self.k_oracle) / abs(self.k_oracle)


@dataclass
class SpectrumResult:
    model: SpectralModel
    levels: list[LevelRecord]
    L: int
    nu_policy: str = "nu * l_p <= L"


def compute_spectrum(model: SpectralModel, asm: ScatteringAssembly, n_max: int, L: int = 150,
                     method: str = "all", workers: int = 1) -> SpectrumResult:
    """Per-level table for n = 1..n_max using the requested method(s).

    Levels whose oracle root lies within the separator tolerance of a frame
    end are flagged ``separator-degenerate`` and get no explicit value.
    ``workers > 1`` evaluates levels on a thread pool; output order is fixed.
    """
    if method not in ("all", "explicit", "implicit", "oracle"):
        raise ValueError(f"unknown method {method!r}")
    if model.mu is None:
        model = model.with_mu(determine_mu(model))
    want = {"explicit", "implicit", "oracle"} if method == "all" else {method}
    if "explicit" in want or "implicit" in want:
        _check_class(model)
    if "implicit" in want and method == "implicit" \
            and model.regularity is not RegularityClass.REGULAR:
        raise ClassRefusal(f"implicit equation needs a regular graph, got "
                           f"{model.regularity.value}")
    exact = oracle_levels(model, n_max)
    slack = model.tol.separator_degenerate * math.pi / model.S0

    def level(n: int) -> LevelRecord:
        fr = separators(model, n)
        rec = LevelRecord(n, fr.lo, fr.hi, L=L)
        rec.k_oracle = float(exact[n - 1])
        if not fr.contains(rec.k_oracle):
            rec.flags.append("outside-frame")
        degenerate = min(abs(rec.k_oracle - fr.lo), abs(rec.k_oracle - fr.hi)) <= slack
        if degenerate:
            rec.flags.append("separator-degenerate")
        if "explicit" in want and not degenerate:
            rec.k_explicit = eigenvalue_explicit(model, asm, n, L)
        if "implicit" in want and model.regularity is RegularityClass.REGULAR:
            rec.k_implicit, info = eigenvalue_implicit(model, n, return_info=True)
            if info["fallback"]:
                rec.flags.append("implicit-fallback")
        reported = next(k for k in (rec.k_implicit, rec.k_explicit, rec.k_oracle)
                        if k is not None)
        rec.residual = float(abs(model.F(reported)))
        return rec

    ns = range(1, n_max + 1)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            levels = list(pool.map(level, ns))
    else:
        levels = [level(n) for n in ns]
    return SpectrumResult(model, levels, L)
