import numpy as np
import pytest

from matmod.arrays import Array
from matmod.errors import ArgumentError, DefinitenessError, ShapeError
from matmod.matrices import random_orthogonal
from matmod.montecarlo import mean_and_se, se_deviation
from matmod.random_arrays import (
    GaussianSpec,
    covariance_block_se,
    empirical_covariance_array,
    iid_covariance,
    sample,
    sample_many,
    stream,
    transform_covariance,
    transform_mean,
)
from matmod.submodules import coordinates


def test_same_seed_same_array():
    spec = GaussianSpec.standard(2, 5, seed=7)
    assert sample(spec) == sample(spec)
    assert sample(spec, 1) != sample(spec, 0)
    assert sample(GaussianSpec.standard(2, 5, seed=8)) != sample(spec)


def test_streams_are_order_independent():
    a = [stream(3, k).standard_normal(4) for k in (0, 1, 2)]
    b = [stream(3, k).standard_normal(4) for k in (2, 1, 0)][::-1]
    for u, v in zip(a, b):
        np.testing.assert_array_equal(u, v)


def test_sample_many_matches_sample():
    spec = GaussianSpec(Array(np.arange(6.0).reshape(2, 3)), [[2, 0.5], [0.5, 1]], seed=11)
    stack = sample_many(spec, 5, start=3)
    for k in range(5):
        np.testing.assert_allclose(stack[k], sample(spec, 3 + k).data, atol=1e-14)


def test_seed_range():
    with pytest.raises(ArgumentError):
        stream(-1)
    with pytest.raises(ArgumentError):
        stream(2**64)
    stream(2**64 - 1)


def test_spec_validation():
    with pytest.raises(DefinitenessError):
        GaussianSpec(Array.zeros(2, 3), [[1, 2], [2, 1]])
    with pytest.raises(DefinitenessError):
        GaussianSpec(Array.zeros(2, 3), [[1, 0.5], [0.0, 1]])
    with pytest.raises(ShapeError):
        GaussianSpec(Array.zeros(2, 3), np.eye(3))


def test_column_mean_tends_to_zero():
    x = sample(GaussianSpec.standard(2, 20000, seed=5))
    assert np.all(np.abs(x.data.mean(axis=1)) < 5 / np.sqrt(20000))


def test_single_column_covariance():
    sigma = np.array([[1.0, 0.6], [0.6, 2.0]])
    spec = GaussianSpec(Array.zeros(2, 1), sigma, seed=9)
    stack = sample_many(spec, 10000)
    emp = empirical_covariance_array(stack).blocks[0, 0]
    assert se_deviation(emp, sigma, covariance_block_se(stack)[0, 0]) <= 5


def test_empirical_covariance_constant_samples():
    cov = empirical_covariance_array([Array(np.ones((2, 3)))] * 4)
    np.testing.assert_array_equal(cov.blocks, 0)


def test_empirical_covariance_shape_checks():
    with pytest.raises(ShapeError):
        empirical_covariance_array([Array.zeros(2, 3), Array.zeros(2, 4)])
    with pytest.raises(ArgumentError):
        empirical_covariance_array([Array.zeros(2, 3)])


def test_empirical_covariance_matches_loops(rng):
    stack = rng.normal(size=(50, 2, 3))
    cov = empirical_covariance_array(stack)
    centred = stack - stack.mean(axis=0)
    for i in range(3):
        for j in range(3):
            block = sum(np.outer(c[:, i], c[:, j]) for c in centred) / 50
            np.testing.assert_allclose(cov.block(i, j), block, atol=1e-12)
    assert cov.is_consistent()


def test_diagonal_sigma_blocks():
    sigma = np.diag([1.0, 4.0])
    stack = sample_many(GaussianSpec(Array.zeros(2, 3), sigma, seed=21), 10000)
    emp = empirical_covariance_array(stack).blocks
    assert se_deviation(emp, iid_covariance(3, sigma).blocks, covariance_block_se(stack)) <= 5


def test_transform_covariance_identity_and_iid(rng):
    sigma = np.array([[2.0, 0.3], [0.3, 1.0]])
    v = iid_covariance(4, sigma)
    np.testing.assert_allclose(transform_covariance(v, np.eye(4)).blocks, v.blocks)
    q = random_orthogonal(4, rng)
    np.testing.assert_allclose(transform_covariance(v, q).blocks, v.blocks, atol=1e-12)


def test_transform_covariance_congruence(rng):
    # exact identity on any sample: the empirical covariance of T Q is the congruence of T's
    stack = rng.normal(size=(200, 2, 4)) @ np.diag([1, 2, 3, 4.0])
    q = rng.normal(size=(4, 4))
    direct = empirical_covariance_array(stack @ q)
    via = transform_covariance(empirical_covariance_array(stack), q)
    np.testing.assert_allclose(direct.blocks, via.blocks, atol=1e-10)


def test_transform_mean_is_linear(rng):
    m = Array(rng.normal(size=(2, 4)))
    q = rng.normal(size=(4, 4))
    np.testing.assert_array_equal(transform_mean(m, q).data, m.data @ q)


@pytest.mark.slow
def test_rotated_columns_stay_iid(rng):
    sigma = np.array([[1.0, -0.4], [-0.4, 2.0]])
    c = random_orthogonal(4, rng)
    spec = GaussianSpec(Array(rng.normal(size=(2, 4))), sigma, seed=31)
    stack = sample_many(spec, 20000) @ c
    emp = empirical_covariance_array(stack).blocks
    assert se_deviation(emp, iid_covariance(4, sigma).blocks, covariance_block_se(stack)) <= 5
    est, se = mean_and_se(stack)
    assert se_deviation(est, spec.mean.data @ c, se) <= 5


@pytest.mark.slow
def test_orthonormal_coordinates_stay_iid(rng):
    sigma = np.array([[1.5, 0.5], [0.5, 1.0]])
    f = random_orthogonal(5, rng)
    spec = GaussianSpec(Array(rng.normal(size=(2, 5))), sigma, seed=32)
    stack = np.stack([coordinates(sample(spec, k), f).alphas for k in range(20000)])
    emp = empirical_covariance_array(stack).blocks
    assert se_deviation(emp, iid_covariance(5, sigma).blocks, covariance_block_se(stack)) <= 5
