import numpy as np
import pytest

from matmod.arrays import Array, scalar_square
from matmod.errors import ShapeError
from matmod.least_squares import matrix_ls, matrix_objective, sample_in, trace_ls, trace_objective
from matmod.submodules import Submodule, from_rows, project


def test_mean_submodule_gives_arithmetic_mean():
    sol = matrix_ls(Array.from_columns([(1, 2), (3, 4)]), Submodule.mean(2))
    np.testing.assert_allclose(sol.fitted.data, [[2, 2], [3, 3]], atol=1e-12)
    np.testing.assert_allclose(sol.residual_square, [[2, 2], [2, 2]], atol=1e-12)


def test_data_in_submodule_has_zero_residual(rng):
    l = from_rows(rng.normal(size=(2, 5)))
    x = sample_in(l, 3, rng)
    assert np.max(np.abs(matrix_ls(x, l).residual_square)) <= 1e-12


def test_univariate_matches_normal_equations(rng):
    design = rng.normal(size=(3, 8))
    y = rng.normal(size=8)
    beta = np.linalg.solve(design @ design.T, design @ y)
    sol = matrix_ls(Array(y), from_rows(design))
    np.testing.assert_allclose(sol.fitted.data[0], beta @ design, atol=1e-10)


def test_trace_ls_matches_matrix_ls(rng):
    for _ in range(20):
        l = from_rows(rng.normal(size=(int(rng.integers(1, 6)), 6)))
        x = Array(rng.normal(size=(3, 6)))
        a, b = matrix_ls(x, l), trace_ls(x, l)
        assert a.fitted.allclose(b.fitted, atol=1e-10)
        np.testing.assert_allclose(a.residual_square, b.residual_square, atol=1e-10)


def test_trace_ls_zero_submodule(rng):
    x = Array(rng.normal(size=(2, 4)))
    sol = trace_ls(x, Submodule.zero(4))
    assert sol.fitted == Array.zeros(2, 4)
    np.testing.assert_allclose(sol.residual_square, scalar_square(x))


def test_trace_ls_beats_random_probes(rng):
    l = from_rows(rng.normal(size=(2, 6)))
    x = Array(rng.normal(size=(3, 6)))
    best = trace_objective(x, trace_ls(x, l).fitted)
    for _ in range(100):
        assert best <= trace_objective(x, sample_in(l, 3, rng, 2.0)) + 1e-12


def test_matrix_minimality_probe(rng):
    l = from_rows(rng.normal(size=(3, 7)))
    x = Array(rng.normal(size=(2, 7)))
    sol = matrix_ls(x, l)
    for _ in range(200):
        z = sample_in(l, 2, rng, 2.0)
        assert np.linalg.eigvalsh(matrix_objective(x, z) - sol.residual_square)[0] >= -1e-8


def test_mean_objective_decomposition(rng):
    x = rng.normal(size=(3, 9))
    xbar = x.mean(axis=1)
    for _ in range(20):
        y = rng.normal(size=3)
        lhs = sum(np.outer(c - y, c - y) for c in x.T)
        within = sum(np.outer(c - xbar, c - xbar) for c in x.T)
        np.testing.assert_allclose(lhs, within + 9 * np.outer(xbar - y, xbar - y), atol=1e-10)


def test_roy_reduction_for_fitted(rng):
    rows = rng.normal(size=(2, 6))
    l = from_rows(rows)
    x = Array(rng.normal(size=(3, 6)))
    lam = rng.normal(size=3)
    # univariate fit of the row lambda^T X through its own normal equations
    yrow = lam @ x.data
    beta = np.linalg.solve(rows @ rows.T, rows @ yrow)
    np.testing.assert_allclose(lam @ matrix_ls(x, l).fitted.data, beta @ rows, atol=1e-10)


def test_shape_errors():
    with pytest.raises(ShapeError):
        trace_ls(Array.zeros(2, 3), Submodule.full(4))
    with pytest.raises(ShapeError):
        matrix_ls(Array.zeros(2, 3), Submodule.full(4))
