"""Tests for the interaction kernels and the kernel registry."""
import numpy as np
import pytest

from turnpike.exceptions import InputError
from turnpike.kernel import CustomKernel, KernelRegistry, KernelSpec, psi_eval, validate_kernel


def test_prototype_values():
    spec = KernelSpec(c_psi=1.0, gamma=1.0)
    assert psi_eval(spec, [0.0], [1.0]) == 0.5
    assert psi_eval(spec, 2.0, 2.0) == 1.0
    assert psi_eval(KernelSpec(c_psi=2.0, gamma=0.5), [0.0, 0.0], [3.0, 4.0]) == pytest.approx(2.0 / np.sqrt(26.0))
    assert psi_eval(KernelSpec(c_psi=2.0, gamma=2.0), [0.0, 0.0], [1.0, 1.0]) == pytest.approx(2.0 / 9.0)


@pytest.mark.parametrize("gamma", [0.25, 1.0, 3.0])
def test_decreasing_in_distance(gamma):
    spec = KernelSpec(c_psi=1.0, gamma=gamma)
    direction = np.array([0.6, -0.8])
    values = [psi_eval(spec, [0.0, 0.0], r * direction) for r in np.linspace(0.0, 20.0, 81)]
    assert values[0] == 1.0
    assert np.all(np.diff(values) < 0)


def test_constant_kernel():
    spec = KernelSpec(c_psi=0.7, gamma=0.0)
    assert psi_eval(spec, [-100.0], [100.0]) == 0.7


def test_symmetric_and_bounded_on_random_pairs():
    rng = np.random.default_rng(3)
    spec = KernelSpec(c_psi=1.5, gamma=0.75)
    for _ in range(200):
        x, y = rng.normal(scale=4.0, size=(2, 3))
        forward = psi_eval(spec, x, y)
        assert forward == psi_eval(spec, y, x)
        assert 0.0 < forward <= spec.c_psi


def test_matrix_is_exactly_symmetric():
    points = np.random.default_rng(1).normal(size=(57, 2))
    matrix = KernelSpec(gamma=1.3).matrix(points)
    assert matrix.shape == (57, 57)
    assert np.array_equal(matrix, matrix.T)
    assert np.all(np.diag(matrix) == 1.0)


def test_custom_kernel_matrix_is_mirrored():
    # The function itself is not symmetric; the matrix still is.
    kernel = CustomKernel(lambda a, b: 0.5 + 0.25 * np.tanh((a - b).sum(axis=-1)), c_psi=1.0, name="skewed")
    matrix = kernel.matrix(np.linspace(-1, 1, 11))
    assert np.array_equal(matrix, matrix.T)


@pytest.mark.parametrize("c_psi,gamma", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5), (float("nan"), 1.0)])
def test_invalid_parameters(c_psi, gamma):
    with pytest.raises(InputError):
        KernelSpec(c_psi=c_psi, gamma=gamma)


def test_dimension_mismatch():
    with pytest.raises(InputError):
        psi_eval(KernelSpec(), [0.0, 1.0], [0.0])


def test_validate_kernel_rejects_asymmetric():
    kernel = CustomKernel(lambda a, b: 0.5 + 0.25 * np.tanh((a - b).sum(axis=-1)), c_psi=1.0)
    with pytest.raises(InputError):
        validate_kernel(kernel)


def test_validate_kernel_rejects_unbounded():
    kernel = CustomKernel(lambda a, b: 2.0 + 0.0 * (a - b).sum(axis=-1), c_psi=1.0)
    with pytest.raises(InputError):
        validate_kernel(kernel)


def test_registry():
    registry = KernelRegistry()
    assert "prototype" in registry
    assert len(registry) == 1
    gaussian = CustomKernel(lambda a, b: np.exp(-((a - b) ** 2).sum(axis=-1)), c_psi=1.0, name="gaussian")
    registry.register("gaussian", gaussian)
    assert registry["gaussian"] is gaussian
    assert list(registry) == ["prototype", "gaussian"]
    assert registry.resolve("gaussian", 3.0, 2.0) is gaussian
    assert registry.resolve("prototype", 2.0, 0.5) == KernelSpec(c_psi=2.0, gamma=0.5)
    with pytest.raises(KeyError):
        registry.resolve("missing")
    with pytest.raises(InputError):
        registry.register("bad", object())
