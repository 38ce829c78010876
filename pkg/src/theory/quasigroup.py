"""
Idempotent states and the compact quasi-subgroups they cut out.

An idempotent state omega gives the conditional expectation
E(x) = (id (x) omega) Delta(x); its image N is a right-invariant
*-subalgebra (a coideal). Its hull is read off the Fourier transform of
omega, whose blocks are orthogonal projections.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from config.settings import N_JOBS, RANDOM_STATE, SEARCH_SEEDS, SEARCH_SUPPORT, STATE_DEDUP_EPS
from src.algebra.dual import (
    Functional,
    IrrTable,
    coefficient_space,
    counit_functional,
    haar_functional,
    inverse_fourier,
    one_dimensional_characters,
)
from src.algebra.hopf import FiniteQuantumGroup
from src.algebra.linalg import DEFAULT_TOL, Subspace, Tolerance, eig_hermitian, kernel, numerical_rank, solve_linear
from src.algebra.semisimple import SimpleBlock, StarAlgebra, decompose
from src.theory.ideals import Hull, IdealSubspace
from src.utils.errors import (
    InternalConsistencyError,
    InvalidIdempotentError,
    NoSolutionError,
    NotAGroupError,
    OwnerMismatchError,
    TheoremViolationError,
)
from src.utils.groups import table_from_products

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IdempotentState:
    omega: Functional
    label: str = ""

    @property
    def owner(self) -> FiniteQuantumGroup:
        return self.omega.owner


@dataclass(frozen=True)
class StateCheck:
    """Residuals of omega(1) = 1, positivity and omega * omega = omega."""

    unital: float
    positivity: float       # max(0, -smallest Gram eigenvalue)
    idempotency: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.unital, self.positivity, self.idempotency) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "unital": self.unital,
            "positivity": self.positivity,
            "idempotency": self.idempotency,
            "passed": self.passed,
        }


def check_idempotent_state(G: FiniteQuantumGroup, omega: Functional, tol: Tolerance = DEFAULT_TOL) -> StateCheck:
    if omega.owner is not G:
        raise OwnerMismatchError("functional does not belong to this quantum group")
    unital = abs(omega(G.unit) - 1.0)
    gram = G.gram(omega.covec)
    asym = float(np.max(np.abs(gram - gram.conj().T)))
    smallest = float(np.min(np.linalg.eigvalsh((gram + gram.conj().T) / 2)))
    positivity = max(asym, -smallest, 0.0)
    idempotency = float(np.max(np.abs((omega * omega).covec - omega.covec)))
    return StateCheck(unital, positivity, idempotency, tol.equality_eps * G.scale())


def as_state(G: FiniteQuantumGroup, omega: Functional, label: str = "", tol: Tolerance = DEFAULT_TOL) -> IdempotentState:
    """
    Wrap a functional after checking it.

    Raises:
        InvalidIdempotentError: omega is not an idempotent state.
    """
    check = check_idempotent_state(G, omega, tol)
    if not check.passed:
        raise InvalidIdempotentError(f"not an idempotent state: {check.to_dict()}")
    return IdempotentState(omega, label)


# -- conditional expectations and coideals ---------------------------------


@dataclass(frozen=True, eq=False)
class ConditionalExpectation:
    """E = (id (x) omega) Delta as a matrix on coefficient vectors."""

    state: IdempotentState
    matrix: np.ndarray
    residuals: Dict[str, float]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x


def expectation_matrix(G: FiniteQuantumGroup, omega: Functional) -> np.ndarray:
    # E[i, k] = sum_j cop[k, i, j] omega_j
    return np.einsum("kij,j->ik", G.coproduct, omega.covec)


def conditional_expectation(
    G: FiniteQuantumGroup, state: IdempotentState, tol: Tolerance = DEFAULT_TOL
) -> ConditionalExpectation:
    """
    Build E and check it is idempotent, unital, positive and a right-module map.

    Positivity is checked on the Haar inner product: with H = [h(b_i* b_j)],
    H E must be hermitian positive semidefinite.

    Raises:
        InvalidIdempotentError: omega fails check_idempotent_state.
        InternalConsistencyError: E fails one of its identities.
    """
    check = check_idempotent_state(G, state.omega, tol)
    if not check.passed:
        raise InvalidIdempotentError(f"{state.label or 'omega'} is not an idempotent state: {check.to_dict()}")
    E = expectation_matrix(G, state.omega)
    H = G.gram(G.haar)
    HE = H @ E
    module = 0.0
    for i in range(G.dim):
        # x * phi_i = (phi_i (x) id) Delta(x), R[j, k] = cop[k, i, j]
        R = G.coproduct[:, i, :].T
        module = max(module, float(np.max(np.abs(E @ R - R @ E))))
    residuals = {
        "idempotent": float(np.max(np.abs(E @ E - E))),
        "unital": float(np.max(np.abs(E @ G.unit - G.unit))),
        "self_adjoint": float(np.max(np.abs(HE - HE.conj().T))),
        "positive": max(0.0, -float(np.min(np.linalg.eigvalsh((HE + HE.conj().T) / 2)))),
        "module_map": module,
    }
    bad = {k: v for k, v in residuals.items() if v > tol.equality_eps * G.scale()}
    if bad:
        raise InternalConsistencyError("conditional expectation fails its identities", bad)
    return ConditionalExpectation(state, E, residuals)


@dataclass(frozen=True, eq=False)
class Coideal:
    """A right-invariant *-subalgebra N of L^inf, the image of E for its state."""

    owner: FiniteQuantumGroup
    space: Subspace
    omega: IdempotentState

    @property
    def dim(self) -> int:
        return self.space.dim

    def right_invariance_residual(self) -> float:
        """Delta(N) in L^inf (x) N."""
        P = self.space.projector()
        Y = np.einsum("kij,kc->cij", self.owner.coproduct, self.space.basis)
        return float(np.max(np.abs(Y - Y @ P.T))) if self.dim else 0.0

    def left_invariance_residual(self) -> float:
        """Delta(N) in N (x) L^inf."""
        P = self.space.projector()
        Y = np.einsum("kij,kc->cij", self.owner.coproduct, self.space.basis)
        return float(np.max(np.abs(Y - P @ Y))) if self.dim else 0.0

    def is_invariant(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        """Two-sided invariance, the quotient-by-a-normal-subgroup case."""
        limit = tol.equality_eps * self.owner.scale()
        return self.right_invariance_residual() <= limit and self.left_invariance_residual() <= limit

    def algebra_residuals(self) -> Dict[str, float]:
        G = self.owner
        B = self.space.basis
        products = np.einsum("ia,jb,ijk->kab", B, B, G.mult).reshape(G.dim, -1)
        adjoints = G.star @ np.conj(B)
        return {
            "unit": self.space.residual_of(G.unit),
            "products": self.space.residual_of(products),
            "star": self.space.residual_of(adjoints),
        }


def coideal_of(G: FiniteQuantumGroup, state: IdempotentState, tol: Tolerance = DEFAULT_TOL) -> Coideal:
    """
    N = image of the conditional expectation of omega.

    Raises:
        InternalConsistencyError: N is not a unital *-subalgebra or not right invariant.
    """
    E = conditional_expectation(G, state, tol)
    N = Coideal(G, Subspace.span(E.matrix, G.dim, tol), state)
    residuals = N.algebra_residuals()
    residuals["right_invariance"] = N.right_invariance_residual()
    bad = {k: v for k, v in residuals.items() if v > tol.equality_eps * G.scale()}
    if bad:
        raise InternalConsistencyError("image of the conditional expectation is not a coideal", bad)
    logger.debug("%s: coideal of %s has dimension %d", G.name, state.label or "omega", N.dim)
    return N


def hull_of_quasi_subgroup(table: IrrTable, state: IdempotentState, tol: Tolerance = DEFAULT_TOL) -> Hull:
    """
    E_pi = range of pi(omega), an orthogonal projection on every block.

    Also checks that the coefficients spanned by the hull rebuild the coideal.

    Raises:
        InvalidIdempotentError: some pi(omega) is not an orthogonal projection.
        TheoremViolationError: L^inf(G, E) differs from the coideal.
    """
    G = table.owner
    if state.owner is not G:
        raise OwnerMismatchError("state and table belong to different quantum groups")
    limit = tol.equality_eps * G.scale()
    parts = []
    for b in table.blocks:
        P = b.apply(state.omega)
        gap = max(float(np.max(np.abs(P @ P - P))), float(np.max(np.abs(P - P.conj().T))))
        if gap > limit:
            raise InvalidIdempotentError(f"{b.index}: pi(omega) is not an orthogonal projection (residual {gap:.3e})")
        values, vectors = eig_hermitian(P, tol)
        off = float(np.max(np.minimum(np.abs(values), np.abs(values - 1.0))))
        if off > limit:
            raise InvalidIdempotentError(f"{b.index}: pi(omega) has eigenvalues away from 0 and 1 ({off:.3e})")
        parts.append(Subspace(b.n, vectors[:, values > 0.5]))
    hull = Hull(table, parts)

    residual = coideal_reconstruction_residual(table, state, hull, tol)
    if residual > limit:
        raise TheoremViolationError(f"coideal differs from its coefficient span (distance {residual:.3e})")
    return hull


def coideal_reconstruction_residual(
    table: IrrTable, state: IdempotentState, hull: Optional[Hull] = None, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Distance between N and L^inf(G, E_N); inf when the dimensions differ."""
    G = table.owner
    if hull is None:
        hull = hull_of_quasi_subgroup(table, state, tol)
    N = coideal_of(G, state, tol)
    rebuilt = coefficient_space(table, hull.parts, tol)
    if rebuilt.dim != N.dim:
        return float("inf")
    return N.space.distance(rebuilt)


def J1(G: FiniteQuantumGroup, N: Coideal, tol: Tolerance = DEFAULT_TOL) -> IdealSubspace:
    """
    J^1(N) = N_perp, the functionals vanishing on N.

    Raises:
        InternalConsistencyError: the preannihilator is not a left ideal.
    """
    space = kernel(N.space.basis.T, tol) if N.dim else Subspace.full(G.dim)
    ideal = IdealSubspace(G, space)
    if not ideal.is_left_ideal(tol):
        raise InternalConsistencyError(
            "preannihilator of a coideal is not a left ideal", {"left_closure": ideal.left_closure_residual()}
        )
    return ideal


# -- right unit and quotient -----------------------------------------------


@dataclass(frozen=True)
class RightUnitReport:
    dim_J: int
    membership: float
    right_unit: float
    invariant: bool
    left_unit: Optional[float]
    tolerance: float

    @property
    def passed(self) -> bool:
        values = [self.membership, self.right_unit]
        if self.left_unit is not None:
            values.append(self.left_unit)
        return max(values) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "dim_J": self.dim_J,
            "membership": self.membership,
            "right_unit": self.right_unit,
            "invariant": self.invariant,
            "left_unit": self.left_unit,
            "passed": self.passed,
        }


def right_unit_check(G: FiniteQuantumGroup, state: IdempotentState, tol: Tolerance = DEFAULT_TOL) -> RightUnitReport:
    """e = epsilon - omega lies in J^1(N) and mu * e = mu there; e * mu = mu too when N is invariant."""
    N = coideal_of(G, state, tol)
    J = J1(G, N, tol)
    e = counit_functional(G) - state.omega
    membership = float(np.max(np.abs(N.space.basis.T @ e.covec))) if N.dim else 0.0
    right = left = 0.0
    for c in range(J.dim):
        mu = Functional(G, J.space.basis[:, c])
        right = max(right, float(np.max(np.abs((mu * e).covec - mu.covec))))
        left = max(left, float(np.max(np.abs((e * mu).covec - mu.covec))))
    invariant = N.is_invariant(tol)
    return RightUnitReport(J.dim, membership, right, invariant, left if invariant else None, tol.equality_eps * G.scale())


@dataclass(frozen=True)
class QuotientReport:
    invariant: bool
    two_sided: float
    restriction_rank: int
    dim_N: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "two_sided": self.two_sided,
            "restriction_rank": self.restriction_rank,
            "dim_N": self.dim_N,
            "passed": self.passed,
        }


def quotient_homomorphism_check(G: FiniteQuantumGroup, N: Coideal, tol: Tolerance = DEFAULT_TOL) -> QuotientReport:
    """
    For invariant N, J^1(N) is two-sided and restriction to N maps L^1 onto N_*,
    so convolution descends to the quotient L^1 / J^1(N) = N_*.
    """
    J = J1(G, N, tol)
    invariant = N.is_invariant(tol)
    two_sided = J.right_closure_residual()
    rank = numerical_rank(N.space.basis.T, tol) if N.dim else 0
    passed = rank == N.dim and (not invariant or two_sided <= tol.equality_eps * G.scale())
    return QuotientReport(invariant, two_sided, rank, N.dim, passed)


# -- searching for idempotent states ---------------------------------------


@dataclass(frozen=True, eq=False)
class StateSearch:
    """
    Idempotent states found by the search, with the family that produced each.

    `exhaustive` is true only when a family is known to list every idempotent
    state (subgroup indicators on C[Gamma], subgroup Haar measures on C(Gamma)).
    """

    owner: FiniteQuantumGroup
    states: List[IdempotentState]
    sources: List[str]
    exhaustive: bool
    families: Dict[str, int] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for state, source in zip(self.states, self.sources):
            rows.append({"label": state.label, "source": source, "omega(1)": state.omega(self.owner.unit).real})
        return pd.DataFrame(rows)


def _point_table(G: FiniteQuantumGroup, points: List[Functional], tol: Tolerance):
    """Group table of a set of functionals closed under convolution."""
    def product(a, b):
        return np.einsum("kij,i,j->k", G.coproduct, a, b)

    return table_from_products(
        [p.covec for p in points], product, tol.equality_eps * G.scale() * 10, name=f"points({G.name})"
    )


def group_like_indicators(G: FiniteQuantumGroup, table: IrrTable, tol: Tolerance = DEFAULT_TOL) -> List[IdempotentState]:
    """For C[Gamma]: omega(lambda_s) = 1 on a subgroup, 0 elsewhere, one state per subgroup."""
    likes = [x.coeffs for x in one_dimensional_characters(table)]
    group = table_from_products(likes, G.product, tol.equality_eps * G.scale() * 10, name="Gr")
    X = np.stack(likes, axis=1)
    states = []
    for sub in group.subgroups():
        values = np.array([1.0 if s in sub else 0.0 for s in range(group.order)])
        covec = solve_linear(X.T, values, tol)
        states.append(IdempotentState(Functional(G, covec), f"1_{{{','.join(group.labels[s] for s in sorted(sub))}}}"))
    return states


def points_of(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL, seed: int = RANDOM_STATE) -> List[Functional]:
    """The characters of a commutative L^inf, one per minimal projection."""
    alg = StarAlgebra(G.mult, G.unit, G.star, name=G.name)
    return [Functional(G, b.extract[0, 0]) for b in decompose(alg, tol, seed)]


def subgroup_haar_states(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL, seed: int = RANDOM_STATE) -> List[IdempotentState]:
    """For C(Gamma): the Haar measure of every subgroup, averaged over its points."""
    points = points_of(G, tol, seed)
    group = _point_table(G, points, tol)
    states = []
    for sub in group.subgroups():
        covec = np.mean([points[s].covec for s in sorted(sub)], axis=0)
        states.append(IdempotentState(Functional(G, covec), f"h_{{{','.join(str(s) for s in sorted(sub))}}}"))
    return states


def uniform_measure(points: Sequence[Functional], subset: Sequence[int]) -> Functional:
    """Average of the given point evaluations."""
    return Functional(points[0].owner, np.mean([points[s].covec for s in subset], axis=0))


def _vector_state(block: SimpleBlock, xi: np.ndarray) -> np.ndarray:
    """x -> <xi, [x] xi> on one simple block of L^inf."""
    xi = xi / np.linalg.norm(xi)
    return np.einsum("i,j,ijk->k", np.conj(xi), xi, block.extract)


def _refine_seed(
    G: FiniteQuantumGroup, table: IrrTable, blocks: List[SimpleBlock], seed: int, tol: Tolerance
) -> Optional[np.ndarray]:
    """
    One random start: an average of vector states, replaced by the limit of the
    Cesaro means of its convolution powers. Blockwise that limit is the
    orthogonal projection onto the fixed space of pi(omega_0).
    """
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(blocks), size=min(SEARCH_SUPPORT, len(blocks)), replace=True)
    start = np.zeros(G.dim, dtype=complex)
    for k in picks:
        n = blocks[k].n
        start += _vector_state(blocks[k], rng.standard_normal(n) + 1j * rng.standard_normal(n))
    start /= len(picks)

    projections = []
    for b in table.blocks:
        M = b.apply(start)
        fixed = kernel(M - np.eye(b.n), tol)
        projections.append(fixed.projector())
    try:
        omega = inverse_fourier(table, projections, tol)
    except NoSolutionError:
        return None
    if not check_idempotent_state(G, omega, tol).passed:
        return None
    return omega.covec


def _dedup(candidates: List[tuple]) -> List[tuple]:
    kept: List[tuple] = []
    for covec, label, source in candidates:
        if any(np.linalg.norm(covec - k[0]) <= STATE_DEDUP_EPS * (1.0 + np.linalg.norm(covec)) for k in kept):
            continue
        kept.append((covec, label, source))
    return kept


def search_idempotent_states(
    G: FiniteQuantumGroup,
    table: IrrTable,
    seeds: Optional[Sequence[int]] = None,
    tol: Tolerance = DEFAULT_TOL,
    n_jobs: int = N_JOBS,
) -> StateSearch:
    """
    Collect idempotent states from four families:

        (a) epsilon and h
        (b) subgroup indicators, when G is cocommutative
        (c) subgroup Haar measures, when G is commutative
        (d) refined random starts, one per seed

    Every candidate is verified; duplicates are merged in that order.

    Args:
        G: Quantum group.
        table: Its irreducible table.
        seeds: Seeds for family (d); defaults to RANDOM_STATE + k for k < SEARCH_SEEDS.
        n_jobs: joblib workers for family (d).

    Returns:
        StateSearch, exhaustive only when family (b) or (c) applied.
    """
    if seeds is None:
        seeds = [RANDOM_STATE + k for k in range(SEARCH_SEEDS)]
    candidates = [
        (counit_functional(G).covec, "epsilon", "trivial"),
        (haar_functional(G).covec, "h", "trivial"),
    ]
    exhaustive = False
    if G.is_cocommutative(tol):
        try:
            candidates += [(s.omega.covec, s.label, "subgroup_indicator") for s in group_like_indicators(G, table, tol)]
            exhaustive = True
        except NotAGroupError as err:
            logger.warning("%s: group-likes do not close up (%s)", G.name, err)
    if G.is_commutative(tol):
        try:
            candidates += [(s.omega.covec, s.label, "subgroup_haar") for s in subgroup_haar_states(G, tol, table.seed)]
            exhaustive = True
        except NotAGroupError as err:
            logger.warning("%s: points do not close up (%s)", G.name, err)

    blocks = decompose(StarAlgebra(G.mult, G.unit, G.star, name=G.name), tol, table.seed)
    refined = Parallel(n_jobs=n_jobs)(delayed(_refine_seed)(G, table, blocks, s, tol) for s in seeds)
    for s, covec in zip(seeds, refined):
        if covec is not None:
            candidates.append((covec, f"seed{s}", "random_refined"))

    states, sources, families = [], [], {}
    for covec, label, source in _dedup(candidates):
        omega = Functional(G, covec)
        if not check_idempotent_state(G, omega, tol).passed:
            logger.debug("%s: candidate %s rejected", G.name, label)
            continue
        states.append(IdempotentState(omega, label))
        sources.append(source)
        families[source] = families.get(source, 0) + 1
    logger.info("%s: %d idempotent states (%s)", G.name, len(states), "exhaustive" if exhaustive else "NON-EXHAUSTIVE")
    return StateSearch(G, states, sources, exhaustive, families)
