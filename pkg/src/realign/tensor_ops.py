"""Index reshufflings of operators on C^d1 (x) C^d2.

Basis convention: zero-based, row-major.  The product vector ``e_i (x) f_j``
sits at flat position ``i * d2 + j``, so an operator ``A`` is the 4-index
array ``A.reshape(d1, d2, d1, d2)[i, j, k, l] = A_{ij,kl}``.  Realignment
and partial transposition only permute entries of that array, which makes
their involution properties bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TOL_HERM",
    "TOL_TRACE",
    "TOL_PSD",
    "BipartiteShape",
    "DensityMatrix",
    "bipartite_index",
    "realign",
    "realign_inverse",
    "partial_transpose",
    "max_entangled",
    "max_mixed",
    "product_state",
]

TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9

# eigendecomposition on every construction gets expensive past this size
_PSD_CHECK_MAX_DIM = 256
_INDEX_MAX = np.iinfo(np.intp).max


@dataclass(frozen=True)
class BipartiteShape:
    """Local dimensions ``d1``, ``d2`` and the environment dimension ``s``."""

    d1: int
    d2: int
    s: int = 1

    def __post_init__(self):
        for name in ("d1", "d2", "s"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {v!r}")
            if v < 1:
                raise ValueError(f"{name} must be >= 1, got {v}")
            object.__setattr__(self, name, int(v))
        if self.d1 * self.d2 > int(np.sqrt(_INDEX_MAX)):
            raise OverflowError("d1*d2 too large for square matrix indexing")

    @classmethod
    def balanced(cls, d: int, s: int = 1) -> "BipartiteShape":
        return cls(d, d, s)

    @property
    def n(self) -> int:
        return self.d1 * self.d2

    @property
    def is_balanced(self) -> bool:
        return self.d1 == self.d2

    def with_s(self, s: int) -> "BipartiteShape":
        return BipartiteShape(self.d1, self.d2, s)


def bipartite_index(i: int, j: int, shape: BipartiteShape) -> int:
    """Flat position of ``e_i (x) f_j``."""
    if not (0 <= i < shape.d1 and 0 <= j < shape.d2):
        raise ValueError(f"index ({i}, {j}) out of range for {shape}")
    return i * shape.d2 + j


def _as_square(a, shape: BipartiteShape) -> np.ndarray:
    a = np.asarray(a)
    n = shape.n
    if a.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix for {shape}, got {a.shape}")
    return a


def realign(a, shape: BipartiteShape) -> np.ndarray:
    """Swap the ``j`` and ``k`` indices: ``A^R[(i,k), (j,l)] = A[(i,j), (k,l)]``.

    Returns a ``d1^2 x d2^2`` array (a fresh copy).
    """
    a = _as_square(a, shape)
    d1, d2 = shape.d1, shape.d2
    return a.reshape(d1, d2, d1, d2).transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2).copy()


def realign_inverse(b, shape: BipartiteShape) -> np.ndarray:
    """Undo :func:`realign` for the given shape."""
    b = np.asarray(b)
    d1, d2 = shape.d1, shape.d2
    if b.shape != (d1 * d1, d2 * d2):
        raise ValueError(f"expected a {d1 * d1}x{d2 * d2} matrix, got {b.shape}")
    return b.reshape(d1, d1, d2, d2).transpose(0, 2, 1, 3).reshape(shape.n, shape.n).copy()


def partial_transpose(a, shape: BipartiteShape) -> np.ndarray:
    """Transpose the second factor: ``A^G[(i,j), (k,l)] = A[(i,l), (k,j)]``."""
    a = _as_square(a, shape)
    d1, d2 = shape.d1, shape.d2
    return a.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(shape.n, shape.n).copy()


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator on C^d1 (x) C^d2.

    Hermiticity and trace are checked on construction.  Positivity is checked
    with an eigendecomposition only up to dimension 256; larger states are
    trusted (the samplers produce them PSD by construction).
    """

    shape: BipartiteShape
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(_as_square(self.matrix, self.shape), dtype=complex)
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.conj().T)) > TOL_HERM * scale:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1) > TOL_TRACE:
            raise ValueError(f"density matrix has trace {tr}, expected 1")
        if self.shape.n <= _PSD_CHECK_MAX_DIM and self.min_eigenvalue(m) < -TOL_PSD:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @staticmethod
    def min_eigenvalue(m) -> float:
        return float(np.linalg.eigvalsh(m)[0])

    @property
    def dim(self) -> int:
        return self.shape.n

    def realigned(self) -> np.ndarray:
        return realign(self.matrix, self.shape)

    def partial_transposed(self) -> np.ndarray:
        return partial_transpose(self.matrix, self.shape)

    def mix(self, other: "DensityMatrix", weight: float) -> "DensityMatrix":
        """``(1 - weight) * self + weight * other``."""
        if other.shape.d1 != self.shape.d1 or other.shape.d2 != self.shape.d2:
            raise ValueError("cannot mix states of different local dimensions")
        return DensityMatrix(self.shape, (1 - weight) * self.matrix + weight * other.matrix)


def max_entangled(d: int) -> DensityMatrix:
    """Projector onto ``d^-1/2 sum_i e_i (x) e_i``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0
    return DensityMatrix(BipartiteShape(d, d), np.outer(psi, psi) / d)


def max_mixed(d1: int, d2: int | None = None) -> DensityMatrix:
    d2 = d1 if d2 is None else d2
    n = d1 * d2
    return DensityMatrix(BipartiteShape(d1, d2), np.eye(n, dtype=complex) / n)


def product_state(u, v) -> DensityMatrix:
    """Pure product state ``|u (x) v><u (x) v|`` from (unnormalised) local vectors."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    psi = np.kron(u, v)
    return DensityMatrix(BipartiteShape(u.size, v.size), np.outer(psi, psi.conj()))
