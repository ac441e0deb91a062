# src/postdist/linalg.py

from __future__ import annotations

import numpy as np
import numpy.linalg as npl

# Largest row or column count any constructed matrix may have.  Tensor products
# and channel extensions check against this before allocating.
DIM_CAP = 4096

# Hermiticity is decided (and symmetrized away) at this tolerance.
HERMITICITY_ATOL = 1e-10


class InvalidInputError(ValueError):
    """Raised for malformed numeric input: wrong shape, non-finite entries."""


class CapacityError(ValueError):
    """Raised when a requested dimension exceeds the configured cap."""


def _as_matrix(X: np.ndarray, name: str = "matrix") -> np.ndarray:
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise InvalidInputError(f"{name} must be a nonempty 2-d array, got shape {X.shape}")
    if not np.issubdtype(X.dtype, np.number):
        raise InvalidInputError(f"{name} must be numeric, got dtype {X.dtype}")
    X = X.astype(complex, copy=False)
    if not np.all(np.isfinite(X.real)) or not np.all(np.isfinite(X.imag)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return X


def hermitianize(X: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (X + X^H) / 2."""
    return (X + X.conj().T) / 2


def hermiticity_defect(X: np.ndarray) -> float:
    """Largest entry of |X - X^H|, the distance from being Hermitian."""
    return float(np.max(np.abs(X - X.conj().T))) if X.shape[0] == X.shape[1] else np.inf


def is_hermitian(X: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(X)))) if X.size else 1.0
    return hermiticity_defect(X) <= atol * scale


def hermitian_eig(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix.

    The input must be Hermitian within HERMITICITY_ATOL; it is symmetrized to
    (X + X^H)/2 before the decomposition so roundoff asymmetry cannot leak into
    the spectrum.  Returns (eigenvalues ascending, eigenvectors as columns).
    """
    X = _as_matrix(X)
    if X.shape[0] != X.shape[1]:
        raise InvalidInputError(f"hermitian_eig needs a square matrix, got {X.shape}")
    if not is_hermitian(X):
        raise InvalidInputError(
            f"matrix is not Hermitian within {HERMITICITY_ATOL:g} "
            f"(defect {hermiticity_defect(X):.3e})"
        )
    w, V = npl.eigh(hermitianize(X))
    return w, V


def _gram_singular_values(X: np.ndarray) -> np.ndarray:
    # Eigenvalues of the smaller Gram matrix, clamped at zero before the root.
    if X.shape[0] <= X.shape[1]:
        G = X @ X.conj().T
    else:
        G = X.conj().T @ X
    w = npl.eigvalsh(hermitianize(G))
    return np.sqrt(np.clip(w, 0.0, None))


def trace_norm(X: np.ndarray) -> float:
    """
    Trace norm ||X||_1 (sum of singular values).

    Hermitian input takes the exact route sum |eigenvalues|; anything else goes
    through the eigenvalues of the Gram matrix with negative clamping.  Both
    paths use the same Hermitian eigendecomposition primitive.
    """
    X = _as_matrix(X)
    if X.shape[0] == X.shape[1] and is_hermitian(X):
        w = npl.eigvalsh(hermitianize(X))
        return float(np.sum(np.abs(w)))
    return float(np.sum(_gram_singular_values(X)))


def operator_norm(X: np.ndarray) -> float:
    """Operator norm ||X||_op (largest singular value)."""
    X = _as_matrix(X)
    if X.shape[0] == X.shape[1] and is_hermitian(X):
        w = npl.eigvalsh(hermitianize(X))
        return float(np.max(np.abs(w)))
    return float(np.max(_gram_singular_values(X)))


def tensor(A: np.ndarray, B: np.ndarray, cap: int = DIM_CAP) -> np.ndarray:
    """
    Kronecker product with the (i_A, i_B) row-major index convention:
    row (i_A * rows_B + i_B), column (j_A * cols_B + j_B).
    """
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    rows = A.shape[0] * B.shape[0]
    cols = A.shape[1] * B.shape[1]
    if rows > cap or cols > cap:
        raise CapacityError(f"tensor result {rows}x{cols} exceeds dimension cap {cap}")
    return np.kron(A, B)


def partial_trace(X: np.ndarray, dims: tuple[int, int], keep: str = "first") -> np.ndarray:
    """
    Trace out one tensor factor of a square matrix on C^{d1} (x) C^{d2}.

    `keep` selects the surviving factor ("first" or "second"); indices follow
    the same row-major convention as `tensor`.
    """
    X = _as_matrix(X)
    d1, d2 = int(dims[0]), int(dims[1])
    if d1 <= 0 or d2 <= 0:
        raise InvalidInputError(f"factor dimensions must be positive, got {dims}")
    n = d1 * d2
    if X.shape != (n, n):
        raise InvalidInputError(
            f"partial_trace expects shape {(n, n)} for dims {dims}, got {X.shape}"
        )
    T = X.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ajbj->ab", T)
    if keep == "second":
        return np.einsum("jajb->ab", T)
    raise InvalidInputError(f"keep must be 'first' or 'second', got {keep!r}")
