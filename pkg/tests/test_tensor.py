"""Tests for dense linear-algebra helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from phasecov.errors import DimensionError, HermiticityError
from phasecov.tensor import (
    DensityMatrix,
    hermiticity_defect,
    is_hermitian,
    kron,
    min_eigenvalue,
    partial_trace,
)


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


class TestKron:
    def test_matches_numpy(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=(2, 2)), rng.normal(size=(3, 3))
        np.testing.assert_allclose(kron(a, b), np.kron(a, b))

    def test_identity_factor(self):
        a = np.arange(9.0).reshape(3, 3)
        np.testing.assert_allclose(kron(np.eye(1), a), a)


class TestPartialTrace:
    @given(seed=st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_traces_to_factors(self, seed):
        rng = np.random.default_rng(seed)
        a = random_density(rng, 2)
        b = random_density(rng, 3)
        ab = np.kron(a, b)
        np.testing.assert_allclose(partial_trace(ab, (2, 3), side="second"), a, atol=1e-12)
        np.testing.assert_allclose(partial_trace(ab, (2, 3), side="first"), b, atol=1e-12)

    def test_trace_consistency(self):
        rng = np.random.default_rng(7)
        m = random_density(rng, 6)
        red = partial_trace(m, (2, 3), side="first")
        assert np.trace(red) == pytest.approx(np.trace(m).real)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            partial_trace(np.eye(5), (2, 3))


class TestHermiticity:
    def test_defect_zero_for_hermitian(self):
        m = np.array([[1.0, 2.0 + 1j], [2.0 - 1j, -1.0]])
        assert hermiticity_defect(m) == 0.0
        assert is_hermitian(m)

    def test_min_eigenvalue_rejects_non_hermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(HermiticityError):
            min_eigenvalue(m)

    def test_min_eigenvalue_value(self):
        m = np.diag([3.0, -2.0, 0.5])
        assert min_eigenvalue(m) == pytest.approx(-2.0)


class TestDensityMatrix:
    @given(seed=st.integers(0, 1000), d=st.integers(2, 5))
    @settings(max_examples=25, deadline=None)
    def test_accepts_random_valid_states(self, seed, d):
        rng = np.random.default_rng(seed)
        rho = DensityMatrix(random_density(rng, d))
        assert rho.dim == d

    def test_rejects_traceless(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([0.7, 0.7]))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_rejects_non_hermitian(self):
        m = np.array([[0.5, 0.3], [0.0, 0.5]])
        with pytest.raises(HermiticityError):
            DensityMatrix(m)
