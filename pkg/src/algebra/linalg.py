"""
Tolerance-aware dense complex linear algebra.

Subspaces are carried as orthonormal bases; every rank decision goes through
singular values with a cutoff relative to the largest one.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
import scipy.linalg

from config.settings import EQUALITY_EPS, RANK_CUTOFF
from src.utils.errors import (
    AmbientMismatchError,
    ContractViolationError,
    NoSolutionError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerance:
    """Thresholds shared by every numerical decision."""

    rank_cutoff: float = RANK_CUTOFF
    equality_eps: float = EQUALITY_EPS

    def __post_init__(self):
        for name in ("rank_cutoff", "equality_eps"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ContractViolationError(f"{name} must lie in (0, 1), got {value}")

    def close(self, residual: float, scale: float = 1.0) -> bool:
        return residual <= self.equality_eps * scale


DEFAULT_TOL = Tolerance()


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Convert to a 2-d complex array, rejecting NaN and Inf."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ContractViolationError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolationError(f"{name} holds NaN or Inf entries")
    return arr


def _rank_from_singular_values(s: np.ndarray, tol: Tolerance, scale: float) -> int:
    # Cutoff is relative to the largest singular value, floored at `scale`
    # so that round-off noise on an exactly zero map is not mistaken for rank.
    if s.size == 0:
        return 0
    threshold = tol.rank_cutoff * max(float(s[0]), scale)
    return int(np.sum(s > threshold))


def numerical_rank(m: np.ndarray, tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> int:
    if m.size == 0:
        return 0
    return _rank_from_singular_values(scipy.linalg.svdvals(m), tol, scale)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of C^ambient_dim given by orthonormal basis columns."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        if self.basis.shape[0] != self.ambient_dim or self.basis.shape[1] > self.ambient_dim:
            raise ContractViolationError(
                f"basis of shape {self.basis.shape} does not fit ambient dimension {self.ambient_dim}"
            )

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=complex))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=complex))

    @classmethod
    def span(
        cls,
        vectors,
        ambient_dim: Optional[int] = None,
        tol: Tolerance = DEFAULT_TOL,
        scale: float = 1.0,
    ) -> "Subspace":
        """Orthonormal basis of the column span of `vectors`."""
        vecs = np.asarray(vectors, dtype=complex)
        if vecs.ndim == 1:
            vecs = vecs.reshape(-1, 1)
        n = ambient_dim if ambient_dim is not None else vecs.shape[0]
        if vecs.size == 0:
            return cls.zero(n)
        vecs = as_matrix(vecs, "spanning set")
        if vecs.shape[0] != n:
            raise AmbientMismatchError(f"vectors of length {vecs.shape[0]} in ambient dimension {n}")
        u, s, _ = scipy.linalg.svd(vecs, full_matrices=False)
        rank = _rank_from_singular_values(s, tol, scale)
        return cls(n, u[:, :rank])

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement_projector(self) -> np.ndarray:
        return np.eye(self.ambient_dim, dtype=complex) - self.projector()

    def orthogonal_complement(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return kernel(self.basis.conj().T)

    def residual_of(self, vectors) -> float:
        """Largest distance of the given columns from this subspace."""
        vecs = np.asarray(vectors, dtype=complex)
        if vecs.ndim == 1:
            vecs = vecs.reshape(-1, 1)
        if vecs.size == 0:
            return 0.0
        if vecs.shape[0] != self.ambient_dim:
            raise AmbientMismatchError(
                f"vectors of length {vecs.shape[0]} against ambient dimension {self.ambient_dim}"
            )
        rest = vecs - self.basis @ (self.basis.conj().T @ vecs)
        return float(np.max(np.linalg.norm(rest, axis=0)))

    def contains(self, other: "Subspace", tol: Tolerance = DEFAULT_TOL) -> bool:
        _check_ambient(self, other)
        return self.residual_of(other.basis) <= tol.equality_eps

    def distance(self, other: "Subspace") -> float:
        """Spectral-norm distance between the orthogonal projectors."""
        _check_ambient(self, other)
        if self.ambient_dim == 0:
            return 0.0
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def equals(self, other: "Subspace", tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.dim == other.dim and self.distance(other) <= tol.equality_eps

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatchError(
            f"subspaces live in different spaces ({a.ambient_dim} vs {b.ambient_dim})"
        )


def kernel(m, tol: Tolerance = DEFAULT_TOL, scale: float = 1.0) -> Subspace:
    """
    Orthonormal basis of {v : m v = 0}.

    Args:
        m: Matrix (rows x cols). A matrix with no rows has the full kernel.
        tol: Rank cutoff relative to the largest singular value.
        scale: Floor for the largest singular value when setting the cutoff.

    Returns:
        Subspace of C^cols.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    cols = m.shape[1]
    if cols == 0:
        return Subspace.zero(0)
    if m.shape[0] == 0 or not np.any(m):
        return Subspace.full(cols)
    m = as_matrix(m)
    _, s, vh = scipy.linalg.svd(m, full_matrices=True)
    rank = _rank_from_singular_values(s, tol, scale)
    return Subspace(cols, vh[rank:].conj().T)


def intersect(a: Subspace, b: Subspace, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Intersection as the joint kernel of the two complement projectors."""
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    stacked = np.vstack([a.complement_projector(), b.complement_projector()])
    return kernel(stacked, tol)


def intersect_all(spaces: Iterable[Subspace], ambient_dim: int, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    result = Subspace.full(ambient_dim)
    for space in spaces:
        result = intersect(result, space, tol)
    return result


def sum_of(spaces: Iterable[Subspace], ambient_dim: int, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    blocks = [s.basis for s in spaces if s.dim > 0]
    if not blocks:
        return Subspace.zero(ambient_dim)
    return Subspace.span(np.hstack(blocks), ambient_dim, tol)


def eig_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a hermitian matrix, eigenvalues ascending.

    Raises:
        ContractViolationError: m is not hermitian within equality_eps.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ContractViolationError(f"eig_hermitian needs a square matrix, got {m.shape}")
    scale = 1.0 + np.linalg.norm(m)
    asym = np.linalg.norm(m - m.conj().T)
    if asym > tol.equality_eps * scale:
        raise ContractViolationError(f"matrix is not hermitian (residual {asym:.3e})")
    values, vectors = scipy.linalg.eigh((m + m.conj().T) / 2)
    return values, vectors


def solve_linear(a, rhs, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """
    Least-squares solution of a x = rhs, rejected when the system is inconsistent.

    Raises:
        NoSolutionError: residual exceeds equality_eps times the problem scale.
    """
    a = as_matrix(a, "coefficient matrix")
    rhs_arr = np.asarray(rhs, dtype=complex)
    vector_rhs = rhs_arr.ndim == 1
    b = as_matrix(rhs_arr, "right-hand side")
    if a.shape[0] != b.shape[0]:
        raise AmbientMismatchError(f"system has {a.shape[0]} rows but rhs has {b.shape[0]}")
    x, _, _, _ = scipy.linalg.lstsq(a, b, cond=tol.rank_cutoff)
    residual = float(np.linalg.norm(a @ x - b))
    scale = max(1.0, float(np.linalg.norm(b)), float(np.linalg.norm(a) * np.linalg.norm(x)))
    if residual > tol.equality_eps * scale:
        raise NoSolutionError(residual, scale)
    return x[:, 0] if vector_rhs else x


def stack_rows(rows: List[np.ndarray], cols: int) -> np.ndarray:
    """Stack row blocks into one matrix; an empty list gives a 0 x cols matrix."""
    rows = [np.atleast_2d(r) for r in rows if np.size(r) > 0]
    if not rows:
        return np.zeros((0, cols), dtype=complex)
    return np.vstack(rows)
