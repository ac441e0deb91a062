# tests/test_linalg.py

import numpy as np
import numpy.linalg as npl
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postdist.linalg import (
    DIM_CAP,
    CapacityError,
    InvalidInputError,
    hermitian_eig,
    hermitianize,
    hermiticity_defect,
    is_hermitian,
    operator_norm,
    partial_trace,
    tensor,
    trace_norm,
)


def _random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def _haar_unitary(rng, dim):
    q, r = npl.qr(_random_complex(rng, dim, dim))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases.conj()


# ---------------------------------------------------------------------------
# frozen values
# ---------------------------------------------------------------------------


def test_trace_norm_hermitian_diagonal():
    assert trace_norm(np.diag([3.0, -4.0])) == pytest.approx(7.0, abs=1e-12)


def test_trace_norm_projector_difference_padded():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = 1.0
    m[1, 1] = -1.0
    assert trace_norm(m) == pytest.approx(2.0, abs=1e-12)


def test_trace_norm_nilpotent():
    assert trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(1.0, abs=1e-12)


def test_trace_norm_rectangular():
    m = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    assert trace_norm(m) == pytest.approx(3.0, abs=1e-12)


def test_operator_norm_values():
    assert operator_norm(np.diag([1.0, -5.0])) == pytest.approx(5.0, abs=1e-12)
    assert operator_norm(np.array([[0.0, 2.0], [0.0, 0.0]])) == pytest.approx(2.0, abs=1e-12)


def test_hermitian_eig_pauli_x():
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    w, v = hermitian_eig(x)
    assert np.allclose(w, [-1.0, 1.0], atol=1e-12)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, x, atol=1e-12)


def test_tensor_index_convention():
    a = np.diag([1.0, 2.0])
    out = tensor(a, np.eye(2))
    assert np.allclose(out, np.diag([1.0, 1.0, 2.0, 2.0]), atol=0)


def test_partial_trace_entangled_state():
    d = 3
    omega = np.zeros(d * d, dtype=complex)
    for i in range(d):
        omega[i * d + i] = 1.0 / np.sqrt(d)
    rho = np.outer(omega, omega.conj())
    assert np.allclose(partial_trace(rho, (d, d), "first"), np.eye(d) / d, atol=1e-12)
    assert np.allclose(partial_trace(rho, (d, d), "second"), np.eye(d) / d, atol=1e-12)


def test_partial_trace_product_state():
    rng = np.random.default_rng(3)
    a = _random_complex(rng, 2, 2)
    a = a @ a.conj().T
    a /= np.trace(a).real
    b = _random_complex(rng, 3, 3)
    b = b @ b.conj().T
    b /= np.trace(b).real
    rho = tensor(a, b)
    assert np.allclose(partial_trace(rho, (2, 3), "first"), a, atol=1e-12)
    assert np.allclose(partial_trace(rho, (2, 3), "second"), b, atol=1e-12)


def test_hermitianize_and_defect():
    m = np.array([[1.0, 1.0 + 0.2j], [1.0, 2.0]])
    h = hermitianize(m)
    assert hermiticity_defect(h) <= 1e-15
    assert not is_hermitian(m)
    assert is_hermitian(h)


# ---------------------------------------------------------------------------
# invariants on seeded random input
# ---------------------------------------------------------------------------


def test_norm_invariants_random():
    rng = np.random.default_rng(0)
    for _ in range(200):
        d = int(rng.integers(1, 7))
        x = _random_complex(rng, d, d)
        y = _random_complex(rng, d, d)
        tn_x = trace_norm(x)
        assert tn_x >= operator_norm(x) - 1e-10
        assert abs(trace_norm(x.conj().T) - tn_x) <= 1e-9 * max(1.0, tn_x)
        assert trace_norm(x + y) <= trace_norm(x) + trace_norm(y) + 1e-9
        assert tn_x >= abs(np.trace(x)) - 1e-9


def test_trace_norm_unitary_invariance():
    rng = np.random.default_rng(1)
    for _ in range(50):
        d = int(rng.integers(2, 6))
        x = _random_complex(rng, d, d)
        u = _haar_unitary(rng, d)
        v = _haar_unitary(rng, d)
        assert trace_norm(u @ x @ v) == pytest.approx(trace_norm(x), rel=1e-9, abs=1e-9)


def test_hermitian_route_matches_gram_route():
    # The Hermitian fast path must agree with the generic singular-value route.
    rng = np.random.default_rng(2)
    for _ in range(100):
        d = int(rng.integers(1, 7))
        h = hermitianize(_random_complex(rng, d, d))
        s = npl.svd(h, compute_uv=False)
        assert trace_norm(h) == pytest.approx(float(s.sum()), rel=1e-10, abs=1e-10)
        assert operator_norm(h) == pytest.approx(float(s.max()), rel=1e-10, abs=1e-10)


def test_eigendecomposition_reconstructs():
    rng = np.random.default_rng(4)
    for _ in range(50):
        d = int(rng.integers(1, 7))
        h = hermitianize(_random_complex(rng, d, d))
        w, v = hermitian_eig(h)
        assert np.all(np.diff(w) >= -1e-14)
        assert np.allclose(v @ np.diag(w) @ v.conj().T, h, atol=1e-10)
        assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.floats(-4.0, 4.0))
def test_trace_norm_homogeneity(seed, factor):
    rng = np.random.default_rng(seed)
    x = _random_complex(rng, 3, 3)
    assert trace_norm(factor * x) == pytest.approx(
        abs(factor) * trace_norm(x), rel=1e-9, abs=1e-9
    )


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_partial_trace_preserves_trace(seed):
    rng = np.random.default_rng(seed)
    x = _random_complex(rng, 6, 6)
    for dims in ((2, 3), (3, 2), (1, 6), (6, 1)):
        for keep in ("first", "second"):
            reduced = partial_trace(x, dims, keep)
            assert np.trace(reduced) == pytest.approx(np.trace(x), rel=1e-12, abs=1e-12)


# ---------------------------------------------------------------------------
# error handling
# ---------------------------------------------------------------------------


def test_rejects_non_matrices():
    with pytest.raises(InvalidInputError):
        trace_norm(np.array([1.0, 2.0]))
    with pytest.raises(InvalidInputError):
        operator_norm(np.zeros((0, 2)))
    with pytest.raises(InvalidInputError):
        trace_norm(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(InvalidInputError):
        trace_norm(np.array([["a", "b"], ["c", "d"]], dtype=object))


def test_hermitian_eig_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        hermitian_eig(np.zeros((2, 3)))


def test_tensor_capacity():
    with pytest.raises(CapacityError):
        tensor(np.eye(70), np.eye(70))
    assert tensor(np.eye(64), np.eye(64), cap=DIM_CAP).shape == (4096, 4096)


def test_partial_trace_rejects_bad_dims():
    with pytest.raises(InvalidInputError):
        partial_trace(np.eye(6), (2, 2))
    with pytest.raises(InvalidInputError):
        partial_trace(np.eye(6), (0, 6))
    with pytest.raises(InvalidInputError):
        partial_trace(np.eye(6), (2, 3), keep="third")
