"""
Splitting a finite-dimensional C*-algebra given by structure constants.

The algebra is cut into simple blocks by the minimal central idempotents, and
each block M_n is given an explicit system of matrix units. Both steps use a
seeded random self-adjoint element: its distinct eigenvalues separate the
pieces, and the spectral projections are Lagrange polynomials in it.
"""

import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np
import scipy.linalg

from config.settings import MAX_SEED_RETRIES, POLISH_STEPS, SPECTRAL_GAP
from src.algebra.linalg import DEFAULT_TOL, Subspace, Tolerance, kernel
from src.utils.errors import DegenerateSpectrumError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """Structure constants structure[i, j, k] (b_i b_j = sum_k ... b_k), unit, antilinear involution."""

    structure: np.ndarray
    unit: np.ndarray
    involution: np.ndarray
    name: str = "A"

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        return self.involution @ np.conj(x)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->kj", x, self.structure)

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("j,ijk->ki", x, self.structure)


@dataclass(frozen=True, eq=False)
class SimpleBlock:
    """One simple summand M_n with matrix units and the coordinate map x -> [x_ij]."""

    n: int
    idempotent: np.ndarray
    units: np.ndarray      # units[i, j] = E_ij as a coefficient vector
    extract: np.ndarray    # extract[i, j] . x = (i, j) entry of x in this block

    def matrix_of(self, x: np.ndarray) -> np.ndarray:
        return np.einsum("ijk,k->ij", self.extract, x)


def center(alg: StarAlgebra, tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """Elements z with b_i z = z b_i for every basis element."""
    d = alg.dim
    comm = alg.structure - alg.structure.transpose(1, 0, 2)
    return kernel(comm.transpose(0, 2, 1).reshape(d * d, d), tol)


def _random_self_adjoint(alg: StarAlgebra, basis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    c = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
    x = basis @ c
    return (x + alg.adjoint(x)) / 2


def _cluster_eigenvalues(values: np.ndarray, groups: int, size: int) -> np.ndarray:
    """
    Split the spectrum into `groups` clusters of `size` equal eigenvalues.

    Raises:
        DegenerateSpectrumError: clusters are not well separated.
    """
    if values.shape[0] != groups * size:
        raise DegenerateSpectrumError(f"expected {groups * size} eigenvalues, got {values.shape[0]}")
    ordered = values[np.argsort(values.real, kind="stable")]
    chunks = ordered.reshape(groups, size)
    centers = chunks.mean(axis=1)
    spread = float(np.max(np.abs(chunks - centers[:, None])))
    scale = 1.0 + float(np.max(np.abs(values)))
    gap = float(np.min(np.abs(np.diff(centers)))) if groups > 1 else scale
    if gap <= SPECTRAL_GAP * scale or spread > 1e-3 * gap:
        raise DegenerateSpectrumError(
            f"eigenvalue clusters not separated (gap {gap:.3e}, spread {spread:.3e})",
            {"gap": gap, "spread": spread},
        )
    return centers


def _spectral_projection(alg: StarAlgebra, x: np.ndarray, unit: np.ndarray, centers: np.ndarray, i: int) -> np.ndarray:
    """Lagrange polynomial in x that is 1 on centers[i] and 0 on the others."""
    p = unit.astype(complex)
    for j, lam in enumerate(centers):
        if j == i:
            continue
        p = alg.product(p, x - lam * unit) / (centers[i] - lam)
    return p


def _polish(alg: StarAlgebra, e: np.ndarray, steps: int = POLISH_STEPS) -> np.ndarray:
    """Newton step e <- 3e^2 - 2e^3 towards the nearest idempotent; clears round-off noise."""
    for _ in range(steps):
        e2 = alg.product(e, e)
        e = 3 * e2 - 2 * alg.product(e2, e)
    return e


def central_idempotents(alg: StarAlgebra, tol: Tolerance = DEFAULT_TOL, seed: int = 0) -> List[np.ndarray]:
    """
    Minimal central idempotents, one per simple block.

    Raises:
        DegenerateSpectrumError: the random central element has colliding eigenvalues.
    """
    z_basis = center(alg, tol).basis
    m = z_basis.shape[1]
    if m == 1:
        return [alg.unit.astype(complex)]
    rng = np.random.default_rng(seed)
    z = _random_self_adjoint(alg, z_basis, rng)
    restricted = z_basis.conj().T @ alg.left_matrix(z) @ z_basis
    centers = _cluster_eigenvalues(scipy.linalg.eigvals(restricted), m, 1)
    idempotents = [_polish(alg, _spectral_projection(alg, z, alg.unit, centers, i)) for i in range(m)]

    scale = 1.0 + float(np.max(np.abs(alg.unit)))
    worst = max(float(np.max(np.abs(alg.product(e, e) - e))) for e in idempotents)
    total = float(np.max(np.abs(sum(idempotents) - alg.unit)))
    if max(worst, total) > tol.equality_eps * scale:
        raise DegenerateSpectrumError(
            "central idempotents lost accuracy",
            {"idempotency": worst, "partition_of_unity": total},
        )
    return idempotents


def _matrix_units(alg: StarAlgebra, e: np.ndarray, tol: Tolerance, rng: np.random.Generator) -> SimpleBlock:
    block_basis = Subspace.span(alg.left_matrix(e), alg.dim, tol).basis
    d_p = block_basis.shape[1]
    n = math.isqrt(d_p)
    if n * n != d_p:
        raise DegenerateSpectrumError(f"simple block of dimension {d_p} is not a full matrix algebra")

    if n == 1:
        units = e.reshape(1, 1, -1).astype(complex)
    else:
        a = _random_self_adjoint(alg, block_basis, rng)
        restricted = block_basis.conj().T @ alg.left_matrix(a) @ block_basis
        centers = _cluster_eigenvalues(scipy.linalg.eigvals(restricted), n, n)
        q = [_polish(alg, _spectral_projection(alg, a, e, centers, i)) for i in range(n)]

        r = block_basis @ (rng.standard_normal(d_p) + 1j * rng.standard_normal(d_p))
        col = [q[0]]
        for i in range(1, n):
            v = alg.product(alg.product(q[i], r), q[0])
            w = alg.product(alg.adjoint(v), v)
            c = np.vdot(q[0], w) / np.vdot(q[0], q[0])
            if c.real <= SPECTRAL_GAP or np.max(np.abs(w - c * q[0])) > 1e-6 * (1.0 + abs(c)):
                raise DegenerateSpectrumError(f"partial isometry {i} degenerate (norm {c.real:.3e})")
            col.append(v / np.sqrt(c.real))
        units = np.empty((n, n, alg.dim), dtype=complex)
        for i in range(n):
            for j in range(n):
                units[i, j] = alg.product(col[i], alg.adjoint(col[j]))

    extract = np.empty_like(units)
    for i in range(n):
        for j in range(n):
            sandwich = alg.left_matrix(units[i, i]) @ alg.right_matrix(units[j, j])
            u = units[i, j]
            extract[i, j] = (u.conj() @ sandwich) / np.vdot(u, u)
    return SimpleBlock(n=n, idempotent=e, units=units, extract=extract)


def _check_block(alg: StarAlgebra, block: SimpleBlock, tol: Tolerance) -> float:
    """Largest deviation of the extracted coordinates of the units from matrix units."""
    n = block.n
    worst = 0.0
    for i in range(n):
        for j in range(n):
            target = np.zeros((n, n))
            target[i, j] = 1.0
            worst = max(worst, float(np.max(np.abs(block.matrix_of(block.units[i, j]) - target))))
            worst = max(worst, float(np.max(np.abs(alg.adjoint(block.units[i, j]) - block.units[j, i]))))
    return worst


def _decompose_once(alg: StarAlgebra, tol: Tolerance, seed: int) -> List[SimpleBlock]:
    idempotents = central_idempotents(alg, tol, seed)
    rng = np.random.default_rng(seed + 1)
    blocks = [_matrix_units(alg, e, tol, rng) for e in idempotents]
    total = sum(b.n ** 2 for b in blocks)
    if total != alg.dim:
        raise DegenerateSpectrumError(f"block dimensions add up to {total}, algebra has dimension {alg.dim}")
    worst = max(_check_block(alg, b, tol) for b in blocks)
    if worst > tol.equality_eps * (1.0 + float(np.max(np.abs(alg.unit)))):
        raise DegenerateSpectrumError("matrix units lost accuracy", {"matrix_units": worst})
    return blocks


def decompose(alg: StarAlgebra, tol: Tolerance = DEFAULT_TOL, seed: int = 0) -> List[SimpleBlock]:
    """
    Wedderburn decomposition into simple blocks with matrix units.

    Args:
        alg: A finite-dimensional C*-algebra.
        tol: Tolerances.
        seed: Seed for the random elements; retried with seed + k on degenerate draws.

    Returns:
        Simple blocks in the order the central idempotents were found.
    """
    last = None
    for attempt in range(MAX_SEED_RETRIES):
        try:
            blocks = _decompose_once(alg, tol, seed + attempt)
            logger.debug("%s: %d blocks (seed %d)", alg.name, len(blocks), seed + attempt)
            return blocks
        except DegenerateSpectrumError as err:
            logger.warning("%s: seed %d degenerate (%s), retrying", alg.name, seed + attempt, err)
            last = err
    raise DegenerateSpectrumError(
        f"{alg.name}: no usable random element after {MAX_SEED_RETRIES} seeds", getattr(last, "residuals", {})
    )
