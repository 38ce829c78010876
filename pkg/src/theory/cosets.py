"""
The intrinsic group, quantum cosets xN and translated ideals.

Group-likes are unitary, so x^-1 = x* throughout. With the right action
(f . x)(y) = f(x y) on L^1, translating a left ideal X_perp by x gives the
preannihilator of x* X.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.algebra.dual import FormulaReport, IrrTable, one_dimensional_characters
from src.algebra.hopf import Element, FiniteQuantumGroup
from src.algebra.linalg import DEFAULT_TOL, Subspace, Tolerance, intersect, kernel, numerical_rank
from src.theory.ideals import IdealSubspace
from src.theory.quasigroup import J1, Coideal
from src.utils.errors import (
    InternalConsistencyError,
    NotAGroupError,
    NotALeftIdealError,
    OwnerMismatchError,
    PreconditionError,
    TheoremViolationError,
)
from src.utils.groups import FiniteGroup, table_from_products

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupLike:
    element: Element

    @property
    def coeffs(self) -> np.ndarray:
        return self.element.coeffs

    def residuals(self) -> Dict[str, float]:
        """Delta x = x (x) x, epsilon(x) = 1, x* x = 1 = x x*."""
        G = self.element.owner
        x = self.coeffs
        xs = G.adjoint(x)
        return {
            "group_like": float(np.max(np.abs(G.delta(x) - np.outer(x, x)))),
            "counit": abs(G.counit @ x - 1.0),
            "unitary_left": float(np.max(np.abs(G.product(xs, x) - G.unit))),
            "unitary_right": float(np.max(np.abs(G.product(x, xs) - G.unit))),
        }


@dataclass(frozen=True, eq=False)
class IntrinsicGroup:
    """Gr(G) with the multiplication table of its elements."""

    elements: List[GroupLike]
    group: FiniteGroup

    @property
    def order(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "table": self.group.table.tolist(),
            "order_sequence": self.group.order_sequence(),
            "abelian": self.group.is_abelian(),
        }


def intrinsic_group(G: FiniteQuantumGroup, table: IrrTable, tol: Tolerance = DEFAULT_TOL) -> IntrinsicGroup:
    """
    The one-dimensional corepresentations as group-like unitaries.

    Raises:
        InternalConsistencyError: an element is not group-like or the set is not
            closed under multiplication.
    """
    if table.owner is not G:
        raise OwnerMismatchError("table does not belong to this quantum group")
    limit = tol.equality_eps * G.scale()
    elements = [GroupLike(x) for x in one_dimensional_characters(table)]
    for k, x in enumerate(elements):
        bad = {name: v for name, v in x.residuals().items() if v > limit}
        if bad:
            raise InternalConsistencyError(f"one-dimensional block {k} is not group-like", bad)
    labels = [b.index for b in table.blocks if b.n == 1]
    try:
        group = table_from_products([x.coeffs for x in elements], G.product, 10 * limit, name=f"Gr({G.name})", labels=labels)
    except NotAGroupError as err:
        raise InternalConsistencyError(f"intrinsic group does not close up: {err}")
    logger.debug("%s: intrinsic group of order %d", G.name, group.order)
    return IntrinsicGroup(elements, group)


# -- cosets -----------------------------------------------------------------


class CosetOutcome(enum.Enum):
    EQUALS_N = "EqualsN"
    ZERO = "Zero"


@dataclass(frozen=True, eq=False)
class CosetSpace:
    base: Coideal
    rep: GroupLike
    space: Subspace
    residuals: Dict[str, float]


def coset_projection(G: FiniteQuantumGroup, x: GroupLike, N: Coideal) -> np.ndarray:
    """Matrix of y -> (id (x) omega.x*) Delta(y), where (omega.x*)(y) = omega(x* y)."""
    c = np.einsum("i,ikj,j->k", G.adjoint(x.coeffs), G.mult, N.omega.omega.covec)
    return np.einsum("kij,j->ik", G.coproduct, c)


def _tro_residual(G: FiniteQuantumGroup, space: Subspace) -> float:
    B = space.basis
    Bs = G.star @ np.conj(B)
    yz = np.einsum("ia,jb,ijk->kab", B, Bs, G.mult)
    yzw = np.einsum("kab,lc,klm->mabc", yz, B, G.mult)
    return space.residual_of(yzw.reshape(G.dim, -1))


def coset(G: FiniteQuantumGroup, x: GroupLike, N: Coideal, tol: Tolerance = DEFAULT_TOL) -> CosetSpace:
    """
    xN with its invariants: right invariance, the ternary ring property and
    the projection M_{omega.x*} being idempotent with image xN.

    Raises:
        InternalConsistencyError: one of the invariants fails.
    """
    if x.element.owner is not G or N.owner is not G:
        raise OwnerMismatchError("group-like and coideal must belong to the same quantum group")
    L = G.left_mult_matrix(x.coeffs)
    space = Subspace.span(L @ N.space.basis, G.dim, tol) if N.dim else Subspace.zero(G.dim)
    # (phi_i (x) id) Delta(y) for every basis functional phi_i
    moved = np.einsum("kij,kc->jic", G.coproduct, space.basis).reshape(G.dim, -1)
    M = coset_projection(G, x, N)
    image = Subspace.span(M, G.dim, tol)
    residuals = {
        "right_invariance": space.residual_of(moved),
        "tro": _tro_residual(G, space),
        "projection_idempotent": float(np.max(np.abs(M @ M - M))),
        "projection_image": space.distance(image) if image.dim == space.dim else float("inf"),
    }
    bad = {k: v for k, v in residuals.items() if v > tol.equality_eps * G.scale()}
    if bad:
        raise InternalConsistencyError("quantum coset fails its invariants", bad)
    return CosetSpace(N, x, space, residuals)


def disjointness_check(
    G: FiniteQuantumGroup, x: GroupLike, N: Coideal, tol: Tolerance = DEFAULT_TOL, xN: Optional[CosetSpace] = None
) -> CosetOutcome:
    """
    xN meets N either in N (omega(x) = 1) or in {0} (omega(x) = 0).

    Pass `xN` when the coset has already been built.

    Raises:
        TheoremViolationError: any other outcome.
    """
    value = N.omega.omega(x.element)
    if xN is None:
        xN = coset(G, x, N, tol)
    meet = intersect(xN.space, N.space, tol)
    limit = tol.equality_eps * G.scale()
    if abs(value - 1.0) <= limit and meet.equals(N.space, tol):
        return CosetOutcome.EQUALS_N
    if abs(value) <= limit and meet.dim == 0:
        return CosetOutcome.ZERO
    raise TheoremViolationError(
        f"coset dichotomy fails: omega(x) = {value:.6g}, dim(xN meet N) = {meet.dim}, dim N = {N.dim}"
    )


def coset_table(
    G: FiniteQuantumGroup, group: IntrinsicGroup, N: Coideal, tol: Tolerance = DEFAULT_TOL
) -> pd.DataFrame:
    """One row per group-like: omega(x), dim xN and the dichotomy outcome."""
    rows = []
    for label, x in zip(group.group.labels, group.elements):
        xN = coset(G, x, N, tol)
        rows.append({
            "element": label,
            "omega(x)": round(float(N.omega.omega(x.element).real), 10) + 0.0,
            "dim_xN": xN.space.dim,
            "outcome": disjointness_check(G, x, N, tol, xN).value,
        })
    return pd.DataFrame(rows)


# -- translated ideals ------------------------------------------------------


def translate_ideal(
    G: FiniteQuantumGroup, I: IdealSubspace, x: GroupLike, tol: Tolerance = DEFAULT_TOL
) -> IdealSubspace:
    """
    I . x = {f . x : f in I} with (f . x)(y) = f(x y).

    Checked against the preannihilator of x* X for X = I^perp, and for left
    (and, when I is two-sided, right) closure.

    Raises:
        NotALeftIdealError: I is not a left ideal.
        TheoremViolationError: the translate disagrees with (x* X)_perp or loses closure.
    """
    if I.owner is not G or x.element.owner is not G:
        raise OwnerMismatchError("ideal and group-like must belong to the same quantum group")
    if not I.is_left_ideal(tol):
        raise NotALeftIdealError(f"input is not a left ideal (residual {I.left_closure_residual():.3e})")
    L = G.left_mult_matrix(x.coeffs)
    moved = L.T @ I.space.basis
    translated = IdealSubspace(G, Subspace.span(moved, G.dim, tol) if I.dim else Subspace.zero(G.dim))

    X = kernel(I.space.basis.T, tol) if I.dim else Subspace.full(G.dim)
    shifted = G.left_mult_matrix(G.adjoint(x.coeffs)) @ X.basis
    expected = kernel(shifted.T, tol) if X.dim else Subspace.full(G.dim)
    limit = tol.equality_eps * G.scale()
    gap = translated.space.distance(expected) if expected.dim == translated.dim else float("inf")
    if gap > limit:
        raise TheoremViolationError(f"translated ideal differs from the preannihilator of x* X (distance {gap:.3e})")
    if translated.left_closure_residual() > limit:
        raise TheoremViolationError("translated ideal is not a left ideal")
    if I.right_closure_residual() <= limit and translated.right_closure_residual() > limit:
        raise TheoremViolationError("translate of a two-sided ideal is not two-sided")
    return translated


def functoriality_check(
    G: FiniteQuantumGroup, I: IdealSubspace, group: IntrinsicGroup, tol: Tolerance = DEFAULT_TOL
) -> FormulaReport:
    """(I . x) . y = I . (x y) over the whole table, and (I . x) . x* = I."""
    residuals = {}
    single = [translate_ideal(G, I, x, tol) for x in group.elements]
    for a, x in enumerate(group.elements):
        for b, y in enumerate(group.elements):
            twice = translate_ideal(G, single[a], y, tol)
            target = single[group.group.mul(a, b)]
            residuals[f"{a}.{b}"] = twice.space.distance(target.space) if twice.dim == target.dim else float("inf")
        back = translate_ideal(G, single[a], group.elements[group.group.inv(a)], tol)
        residuals[f"{a}.inv"] = back.space.distance(I.space) if back.dim == I.dim else float("inf")
    return FormulaReport("functoriality", residuals, tol.equality_eps * G.scale())


def surjectivity_check(G: FiniteQuantumGroup, N: Coideal, x: GroupLike, tol: Tolerance = DEFAULT_TOL) -> bool:
    """
    Restricting J^1(N) . x to N gives all of N_* when x is not in N.

    Raises:
        PreconditionError: omega_N(x) is not 0.
    """
    value = N.omega.omega(x.element)
    if abs(value) > tol.equality_eps * G.scale():
        raise PreconditionError(f"group-like lies in the coset's base (omega(x) = {value:.6g})")
    translated = translate_ideal(G, J1(G, N, tol), x, tol)
    if N.dim == 0:
        return True
    restricted = N.space.basis.T @ translated.space.basis
    return numerical_rank(restricted, tol) == N.dim
