import math

import numpy as np
import pytest

from qgraph import catalog
from qgraph.charpoly import SpectralModel, spectral_model
from qgraph.errors import PreconditionError
from qgraph.oracle import average_staircase, convergence_study, find_roots, staircase
from qgraph.scattering import assemble


def test_free_box_roots(free_box):
    _, model = free_box
    scan = find_roots(model, 10 * math.pi + 0.1)
    assert scan.roots == pytest.approx(math.pi * np.arange(1, 11), abs=1e-12)
    ks = np.linspace(0.5, 10 * math.pi, 97)
    assert np.array_equal(staircase(scan, ks), np.floor(ks / math.pi).astype(int))


def test_step_box_roots_solve_sine_form(step_box):
    _, model = step_box
    b, b23 = 0.3, math.sqrt(0.5)
    r = (1 - b23) / (1 + b23)
    S21, S23 = b, (1 - b) * b23
    roots = find_roots(model, 200.0).roots
    assert len(roots) > 40
    residual = np.sin(roots * (S21 + S23)) - r * np.sin(roots * (S21 - S23))
    assert np.max(np.abs(residual)) < 1e-12


def test_residuals_bounded(chain_regular):
    _, model = chain_regular
    scan = find_roots(model, 150.0)
    assert np.max(scan.residuals) <= 1e-12 * (1 + model.alpha)
    assert np.all(np.diff(scan.roots) > 1e-9 * math.pi / model.S0)


def test_bisection_and_scan_agree(chain_regular):
    _, model = chain_regular
    k_max = 100 * math.pi / model.S0
    a = find_roots(model, k_max, method="frame-bisection")
    b = find_roots(model, k_max, method="dense-scan")
    assert len(a) == len(b)
    assert np.max(np.abs(a.roots - b.roots)) < 1e-10


def test_determinant_path_agrees(chain_regular):
    asm, model = chain_regular
    a = find_roots(model, 60.0)
    b = find_roots(asm, 60.0)
    assert b.heuristic and not a.heuristic
    assert len(a) == len(b)
    assert np.max(np.abs(a.roots - b.roots)) < 1e-10


def test_tangential_roots_are_flagged():
    # cos k = 1 touches zero from below at k = 2 pi m
    model = SpectralModel(1.0, 0.0, np.array([1.0]), np.array([0.0]), np.array([0.0]))
    scan = find_roots(model, 20.0, method="dense-scan")
    assert scan.flagged == pytest.approx([2 * math.pi, 4 * math.pi, 6 * math.pi], abs=1e-6)
    assert len(scan) == 6
    assert staircase(scan, 7.0) == 2


def test_frame_bisection_needs_a_model(chain_regular):
    asm, _ = chain_regular
    with pytest.raises(PreconditionError):
        find_roots(asm, 10.0, method="frame-bisection")
    with pytest.raises(ValueError):
        find_roots(asm, -1.0)


def test_staircase_refuses_beyond_range(free_box):
    scan = find_roots(free_box[1], 10.0)
    with pytest.raises(ValueError):
        staircase(scan, 11.0)


def test_average_staircase_slope_and_offset(step_box):
    _, model = step_box
    K = 500 * math.pi / model.S0
    scan = find_roots(model, K)
    n = np.arange(1, len(scan.roots) + 1)
    slope = np.polyfit(scan.roots[:200], n[:200], 1)[0]
    assert slope == pytest.approx(model.S0 / math.pi, rel=0.01)
    assert abs(staircase(scan, K) - average_staircase(model, K)) <= 2
    khat = math.pi / model.S0 * (np.arange(1, 50) + model.mu + model.gamma0 + 1)
    assert average_staircase(model, khat) == pytest.approx(np.arange(1, 50))


def test_average_staircase_needs_mu():
    model = spectral_model(assemble(catalog.step_in_box()))
    with pytest.raises(PreconditionError):
        average_staircase(model, 1.0)


def test_convergence_study_rows(step_box):
    asm, model = step_box
    rows = convergence_study(model, asm, [1, 10], [20, 60])
    assert [(n, L) for n, L, *_ in rows] == [(1, 20), (1, 60), (10, 20), (10, 60)]
    assert all(eps < 1e-2 for *_, eps in rows)
