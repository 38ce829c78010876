"""
Left ideals of L^1(G), their hulls, the ideals I(E) and synthesis.

Ideals are stored as subspaces of the covector space. In finite dimension
every Fourier transform is finitely supported, so j(E) = I(E) and synthesis
reduces to the round trip I = I(hull(I)).
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.algebra.dual import Functional, IrrTable, coefficient_space, hat_matrix
from src.algebra.hopf import FiniteQuantumGroup
from src.algebra.linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerance,
    intersect,
    kernel,
    stack_rows,
)
from src.data.formats import format_hull, parse_hull
from src.utils.errors import (
    AmbientMismatchError,
    ContractViolationError,
    DefinitionParseError,
    NotTwoSidedError,
    OwnerMismatchError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IdealSubspace:
    """A subspace of L^1(G) closed under left convolution."""

    owner: FiniteQuantumGroup
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def left_closure_residual(self) -> float:
        """max over basis functionals phi_i and basis v of dist(phi_i * v, space)."""
        if self.dim == 0:
            return 0.0
        # (phi_i * v)_k = sum_j cop[k, i, j] v_j
        moved = np.einsum("kij,jc->kic", self.owner.coproduct, self.space.basis)
        return self.space.residual_of(moved.reshape(self.owner.dim, -1))

    def right_closure_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        moved = np.einsum("kji,jc->kic", self.owner.coproduct, self.space.basis)
        return self.space.residual_of(moved.reshape(self.owner.dim, -1))

    def is_left_ideal(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.left_closure_residual() <= tol.equality_eps * self.owner.scale()

    def is_two_sided(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        scale = tol.equality_eps * self.owner.scale()
        return self.left_closure_residual() <= scale and self.right_closure_residual() <= scale

    def contains(self, f: Functional, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.space.residual_of(f.covec) <= tol.equality_eps * (1.0 + np.linalg.norm(f.covec))


@dataclass(frozen=True, eq=False)
class Hull:
    """E = (E_pi), one subspace of C^{n_pi} per irreducible block."""

    table: IrrTable
    parts: List[Subspace]

    def __post_init__(self):
        if len(self.parts) != len(self.table.blocks):
            raise AmbientMismatchError(f"hull has {len(self.parts)} parts for {len(self.table.blocks)} blocks")
        for part, block in zip(self.parts, self.table.blocks):
            if part.ambient_dim != block.n:
                raise AmbientMismatchError(f"{block.index}: part lives in C^{part.ambient_dim}, block has n={block.n}")

    @property
    def dims(self) -> List[int]:
        return [p.dim for p in self.parts]

    @classmethod
    def full(cls, table: IrrTable) -> "Hull":
        return cls(table, [Subspace.full(b.n) for b in table.blocks])

    @classmethod
    def zero(cls, table: IrrTable) -> "Hull":
        return cls(table, [Subspace.zero(b.n) for b in table.blocks])

    @classmethod
    def random(cls, table: IrrTable, rng: np.random.Generator) -> "Hull":
        parts = []
        for b in table.blocks:
            k = int(rng.integers(0, b.n + 1))
            vecs = rng.standard_normal((b.n, k)) + 1j * rng.standard_normal((b.n, k))
            parts.append(Subspace.span(vecs, b.n))
        return cls(table, parts)

    def dimension_vector(self) -> Dict[tuple, int]:
        """dim E_pi keyed by block fingerprint, comparable across seeds."""
        return {b.fingerprint: p.dim for b, p in zip(self.table.blocks, self.parts)}

    def contains(self, other: "Hull", tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(a.contains(b, tol) for a, b in zip(self.parts, other.parts))

    def equals(self, other: "Hull", tol: Tolerance = DEFAULT_TOL) -> bool:
        return all(a.equals(b, tol) for a, b in zip(self.parts, other.parts))


def _check_owner(table: IrrTable, I: IdealSubspace) -> None:
    if I.owner is not table.owner:
        raise OwnerMismatchError("ideal and table belong to different quantum groups")


def left_ideal_from_generators(
    G: FiniteQuantumGroup, table: IrrTable, gens: Sequence[Functional], tol: Tolerance = DEFAULT_TOL
) -> IdealSubspace:
    """
    Smallest left ideal containing the generators.

    Args:
        G: Quantum group.
        table: Its irreducible table (only checked for ownership).
        gens: Non-empty list of functionals.

    Returns:
        IdealSubspace spanned by the gens and every phi_i * gen, iterated to closure.
    """
    if not gens:
        raise ContractViolationError("left_ideal_from_generators needs at least one generator")
    if table.owner is not G or any(g.owner is not G for g in gens):
        raise OwnerMismatchError("generators must belong to the table's quantum group")
    d = G.dim
    space = Subspace.span(np.stack([g.covec for g in gens], axis=1), d, tol)
    while True:
        if space.dim == 0:
            break
        moved = np.einsum("kij,jc->kic", G.coproduct, space.basis).reshape(d, -1)
        grown = Subspace.span(np.hstack([space.basis, moved]), d, tol)
        if grown.dim == space.dim:
            break
        space = grown
    ideal = IdealSubspace(G, space)
    logger.debug("%s: left ideal of dimension %d from %d generators", G.name, ideal.dim, len(gens))
    return ideal


def hull_of(table: IrrTable, I: IdealSubspace, tol: Tolerance = DEFAULT_TOL) -> Hull:
    """E_pi = intersection over a basis f of I of ker pi(f)."""
    _check_owner(table, I)
    parts = []
    for b in table.blocks:
        rows = [b.apply(I.space.basis[:, c]) for c in range(I.dim)]
        parts.append(kernel(stack_rows(rows, b.n), tol))
    return Hull(table, parts)


def ideal_I(table: IrrTable, E: Hull, tol: Tolerance = DEFAULT_TOL) -> IdealSubspace:
    """I(E) = {f : pi(f) E_pi = 0 for every pi}."""
    G = table.owner
    rows = []
    for b, part in zip(table.blocks, E.parts):
        if part.dim == 0:
            continue
        # row (i, c): f -> sum_j pi(f)_ij eta_c[j]
        constraint = np.einsum("ijk,jc->ick", b.extract, part.basis)
        rows.append(constraint.reshape(-1, G.dim))
    return IdealSubspace(G, kernel(stack_rows(rows, G.dim), tol))


@dataclass(frozen=True)
class SynthesisReport:
    dim_ideal: int
    dim_reconstructed: int
    hull_dims: List[int]
    forward_residual: float
    backward_residual: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "dim_ideal": self.dim_ideal,
            "dim_reconstructed": self.dim_reconstructed,
            "hull_dims": self.hull_dims,
            "forward_residual": self.forward_residual,
            "backward_residual": self.backward_residual,
            "passed": self.passed,
        }


def verify_synthesis(table: IrrTable, I: IdealSubspace, tol: Tolerance = DEFAULT_TOL) -> SynthesisReport:
    """Check I = I(hull(I)) as subspaces."""
    E = hull_of(table, I, tol)
    J = ideal_I(table, E, tol)
    forward = J.space.residual_of(I.space.basis)
    backward = I.space.residual_of(J.space.basis)
    passed = I.dim == J.dim and max(forward, backward) <= tol.equality_eps
    return SynthesisReport(I.dim, J.dim, E.dims, forward, backward, passed)


@dataclass(frozen=True, eq=False)
class DualityReport:
    """Four descriptions of I(E)^perp inside L^inf and how far apart they are."""

    annihilator: Subspace
    coefficient_span: Subspace
    convolution_kernel: Subspace
    fourier_kernel: Subspace
    expected_dim: int
    distances: Dict[str, float]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "dims": {
                "annihilator": self.annihilator.dim,
                "coefficient_span": self.coefficient_span.dim,
                "convolution_kernel": self.convolution_kernel.dim,
                "fourier_kernel": self.fourier_kernel.dim,
            },
            "expected_dim": self.expected_dim,
            "distances": self.distances,
            "passed": self.passed,
        }


def annihilator_dualities(
    G: FiniteQuantumGroup, table: IrrTable, E: Hull, tol: Tolerance = DEFAULT_TOL
) -> DualityReport:
    """
    Compare I(E)^perp computed four ways:

        (a) {x : f(x) = 0 for f in I(E)}
        (b) L^inf(G, E) = span{ sum_j eta_j u_ij : eta in E_pi }
        (c) intersection over f in I(E) of ker (x -> (id (x) f) Delta x)
        (d) {x : pi(hat x) pi(f o S) = 0 for f in I(E), all pi}
    """
    I = ideal_I(table, E, tol)
    d = G.dim
    basis = I.space.basis

    a = kernel(basis.T, tol) if I.dim else Subspace.full(d)
    b = coefficient_space(table, E.parts, tol)

    conv_rows = [np.einsum("kij,j->ik", G.coproduct, basis[:, c]) for c in range(I.dim)]
    c = kernel(stack_rows(conv_rows, d), tol)

    H = hat_matrix(G)
    fourier_rows = []
    for blk in table.blocks:
        hat_coords = np.einsum("abl,lk->abk", blk.extract, H)       # pi(hat x)_ab = hat_coords[a, b] . x
        for col in range(I.dim):
            P = blk.antipode_matrix(G, Functional(G, basis[:, col]))
            fourier_rows.append(np.einsum("abk,bc->ack", hat_coords, P).reshape(-1, d))
    dd = kernel(stack_rows(fourier_rows, d), tol)

    spaces = {"a": a, "b": b, "c": c, "d": dd}
    distances = {}
    names = sorted(spaces)
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            sx, sy = spaces[x], spaces[y]
            distances[f"{x}{y}"] = sx.distance(sy) if sx.dim == sy.dim else float("inf")
    expected = sum(blk.n * part.dim for blk, part in zip(table.blocks, E.parts))
    passed = all(v <= tol.equality_eps for v in distances.values()) and a.dim == expected
    return DualityReport(a, b, c, dd, expected, distances, passed)


def two_sided_hull_check(table: IrrTable, I: IdealSubspace, tol: Tolerance = DEFAULT_TOL) -> bool:
    """
    For a two-sided ideal every E_pi is 0 or all of H_pi.

    Raises:
        NotTwoSidedError: I is not closed under right convolution.
    """
    _check_owner(table, I)
    residual = I.right_closure_residual()
    if residual > tol.equality_eps * I.owner.scale():
        raise NotTwoSidedError(f"ideal is not closed under right convolution (residual {residual:.3e})")
    E = hull_of(table, I, tol)
    return all(p.dim in (0, blk.n) for p, blk in zip(E.parts, table.blocks))


def principal_ideal_check(
    G: FiniteQuantumGroup, table: IrrTable, f: Functional, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """The hull of L^1 * f is (ker pi(f))_pi."""
    I = left_ideal_from_generators(G, table, [f], tol)
    E = hull_of(table, I, tol)
    direct = Hull(table, [kernel(b.apply(f), tol) for b in table.blocks])
    return E.equals(direct, tol)


def galois_check(table: IrrTable, E: Hull, tol: Tolerance = DEFAULT_TOL) -> bool:
    """hull(I(E)) contains E componentwise."""
    return hull_of(table, ideal_I(table, E, tol), tol).contains(E, tol)


def hull_frame(E: Hull) -> pd.DataFrame:
    return pd.DataFrame(
        [{"block": b.index, "n": b.n, "dim_E": p.dim} for b, p in zip(E.table.blocks, E.parts)]
    )


def dump_hull(E: Hull) -> str:
    return format_hull([(b.index, b.n, p.basis) for b, p in zip(E.table.blocks, E.parts)])


def load_hull(table: IrrTable, doc: str, tol: Tolerance = DEFAULT_TOL) -> Hull:
    parts = parse_hull(doc)
    if [p[1] for p in parts] != table.dims:
        raise DefinitionParseError(f"hull block sizes {[p[1] for p in parts]} do not match table {table.dims}")
    return Hull(table, [Subspace.span(basis, n, tol) for _, n, basis in parts])
