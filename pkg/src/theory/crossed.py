"""
Crossed products G x| Gamma^ of a finite quantum group by a finite group
acting through Hopf *-automorphisms.

The product lives on the basis b_i (.) s, stored at index s * dim(G) + i.
Two multiplication rules are available:

    standard    (a (.) s)(b (.) t) = a alpha_s(b) (.) s t
    printed     (a (.) s)(b (.) t) = a alpha_s(b) (.) s^-1 t

build_crossed_product tries the standard rule first and lets verify_axioms
decide; the outcome for both rules is recorded in the product's meta.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.dual import Functional, IrrTable, wedderburn
from src.algebra.hopf import AxiomReport, FiniteQuantumGroup, verify_axioms
from src.algebra.linalg import DEFAULT_TOL, Subspace, Tolerance
from src.theory.quasigroup import IdempotentState, as_state, coideal_of
from src.utils.errors import (
    ActionInvariantError,
    AxiomFailureError,
    ContractViolationError,
    TheoremViolationError,
)
from src.utils.groups import FiniteGroup

logger = logging.getLogger(__name__)

RULES = ("standard", "printed")


@dataclass(frozen=True, eq=False)
class HopfAction:
    """alpha: Gamma -> Aut(L^inf(G)); maps[s][i, j] = coefficient of b_i in alpha_s(b_j)."""

    group: FiniteGroup
    maps: np.ndarray
    description: str = "custom"

    def __post_init__(self):
        maps = np.array(self.maps, dtype=complex)
        if maps.ndim != 3 or maps.shape[0] != self.group.order or maps.shape[1] != maps.shape[2]:
            raise ContractViolationError(
                f"action needs {self.group.order} square matrices, got shape {maps.shape}"
            )
        maps.setflags(write=False)
        object.__setattr__(self, "maps", maps)

    @property
    def dim(self) -> int:
        return self.maps.shape[1]


def _worst(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def check_action(G: FiniteQuantumGroup, action: HopfAction, tol: Tolerance = DEFAULT_TOL) -> Dict[str, float]:
    """
    Check every alpha_s is a unital *-automorphism commuting with Delta and
    preserving h, and that s -> alpha_s is a homomorphism.

    Returns:
        Residual per invariant.

    Raises:
        ActionInvariantError: naming the first invariant that fails.
    """
    if action.dim != G.dim:
        raise ContractViolationError(f"action acts on dimension {action.dim}, quantum group has {G.dim}")
    group = action.group
    residuals = dict.fromkeys(
        ["multiplicative", "unital", "star", "identity", "group_law", "coproduct", "haar"], 0.0
    )
    for s in range(group.order):
        A = action.maps[s]
        lhs = np.einsum("km,ijm->ijk", A, G.mult)
        rhs = np.einsum("pi,qj,pqk->ijk", A, A, G.mult)
        residuals["multiplicative"] = max(residuals["multiplicative"], _worst(lhs, rhs))
        residuals["unital"] = max(residuals["unital"], _worst(A @ G.unit, G.unit))
        residuals["star"] = max(residuals["star"], _worst(A @ G.star, G.star @ np.conj(A)))
        cop_lhs = np.einsum("pi,kij,qj->kpq", A, G.coproduct, A)
        cop_rhs = np.einsum("mk,mpq->kpq", A, G.coproduct)
        residuals["coproduct"] = max(residuals["coproduct"], _worst(cop_lhs, cop_rhs))
        residuals["haar"] = max(residuals["haar"], _worst(G.haar @ A, G.haar))
        for t in range(group.order):
            residuals["group_law"] = max(
                residuals["group_law"], _worst(action.maps[group.mul(s, t)], A @ action.maps[t])
            )
    residuals["identity"] = _worst(action.maps[group.identity], np.eye(G.dim))
    limit = tol.equality_eps * G.scale()
    for name, value in residuals.items():
        if value > limit:
            raise ActionInvariantError(name, value)
    return residuals


def trivial_action(G: FiniteQuantumGroup, group: FiniteGroup) -> HopfAction:
    maps = np.stack([np.eye(G.dim) for _ in range(group.order)])
    return HopfAction(group, maps, "trivial")


def _permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    d = len(perm)
    if sorted(perm) != list(range(d)):
        raise ActionInvariantError("permutation", 1.0)
    P = np.zeros((d, d))
    P[list(perm), list(range(d))] = 1.0
    return P


def permutation_action(G: FiniteQuantumGroup, group: FiniteGroup, perms: Dict[int, Sequence[int]]) -> HopfAction:
    """
    alpha_s(b_i) = b_{perms[s][i]}; every non-identity element needs a permutation.
    """
    maps = []
    for s in range(group.order):
        if s == group.identity and s not in perms:
            maps.append(np.eye(G.dim))
            continue
        if s not in perms:
            raise ContractViolationError(f"no permutation given for group element {s}")
        perm = list(perms[s])
        if len(perm) != G.dim:
            raise ContractViolationError(f"permutation for element {s} has length {len(perm)}, expected {G.dim}")
        maps.append(_permutation_matrix(perm))
    desc = "perm " + ";".join(f"{s}:" + ",".join(str(p) for p in perms[s]) for s in sorted(perms))
    return HopfAction(group, np.stack(maps), desc)


def automorphism_action(
    G: FiniteQuantumGroup, base: FiniteGroup, group: FiniteGroup, homs: Dict[int, Sequence[int]]
) -> HopfAction:
    """
    Gamma acting on C[base] or C(base) through group automorphisms phi_s,
    alpha_s(b_g) = b_{phi_s(g)}. G's basis must be indexed by base's elements.

    Raises:
        ActionInvariantError: some phi_s is not an automorphism of base.
    """
    if base.order != G.dim:
        raise ContractViolationError(f"base group of order {base.order} does not index a basis of size {G.dim}")
    for s, perm in homs.items():
        if not base.is_automorphism(perm):
            raise ActionInvariantError(f"automorphism (element {s})", 1.0)
    return permutation_action(G, group, homs)


# -- the product ------------------------------------------------------------


def _fiber(group: FiniteGroup, rule: str, s: int, t: int) -> int:
    if rule == "standard":
        return group.mul(s, t)
    return group.mul(group.inv(s), t)


def _crossed_tensors(G: FiniteQuantumGroup, action: HopfAction, rule: str) -> Dict[str, np.ndarray]:
    group = action.group
    d, m = G.dim, group.order
    D = d * m
    mult = np.zeros((D, D, D), dtype=complex)
    star = np.zeros((D, D), dtype=complex)
    cop = np.zeros((D, D, D), dtype=complex)
    antipode = np.zeros((D, D), dtype=complex)
    unit = np.zeros(D, dtype=complex)
    counit = np.zeros(D, dtype=complex)
    haar = np.zeros(D, dtype=complex)

    def block(s):
        return slice(s * d, (s + 1) * d)

    for s in range(m):
        # b_i alpha_s(b_j), coefficient tensor [i, j, k]
        twisted = np.einsum("mj,imk->ijk", action.maps[s], G.mult)
        for t in range(m):
            u = _fiber(group, rule, s, t)
            mult[block(s), block(t), block(u)] = twisted
        s_inv = group.inv(s)
        star[block(s_inv), block(s)] = action.maps[s_inv] @ G.star
        antipode[block(_fiber(group, rule, s_inv, group.identity)), block(s)] = action.maps[s_inv] @ G.antipode
        cop[block(s), block(s), block(s)] = G.coproduct
        counit[block(s)] = G.counit
    unit[block(group.identity)] = G.unit
    haar[block(group.identity)] = G.haar
    return {
        "mult": mult,
        "unit": unit,
        "star": star,
        "coproduct": cop,
        "counit": counit,
        "antipode": antipode,
        "haar": haar,
    }


def _assemble(G: FiniteQuantumGroup, action: HopfAction, rule: str, meta: Dict[str, str]) -> FiniteQuantumGroup:
    labels = [f"{b}@{g}" for g in action.group.labels for b in G.basis_labels]
    return FiniteQuantumGroup(
        name=f"{G.name}x|{action.group.name}",
        basis_labels=labels,
        meta=meta,
        **_crossed_tensors(G, action, rule),
    )


def build_crossed_product(
    G: FiniteQuantumGroup, action: HopfAction, tol: Tolerance = DEFAULT_TOL, rule: Optional[str] = None
) -> FiniteQuantumGroup:
    """
    The crossed product as a FiniteQuantumGroup of dimension dim(G) * |Gamma|.

    Args:
        G: Quantum group being acted on.
        action: A Hopf *-action; checked first.
        rule: Force "standard" or "printed"; by default the first rule whose
            product passes verify_axioms is used.

    Raises:
        ActionInvariantError: the action fails check_action.
        AxiomFailureError: no candidate rule gives a quantum group.
    """
    check_action(G, action, tol)
    rules = [rule] if rule is not None else list(RULES)
    if any(r not in RULES for r in rules):
        raise ContractViolationError(f"unknown multiplication rule {rule!r}")

    reports: Dict[str, AxiomReport] = {}
    for r in RULES:
        if r in rules:
            candidate = _assemble(G, action, r, {})
            reports[r] = verify_axioms(candidate, tol)
    chosen = next((r for r in rules if reports[r].passed), None)
    if chosen is None:
        raise AxiomFailureError(reports[rules[0]])

    meta = {
        "factors": f"{G.name};{action.group.name}",
        "action": action.description,
        "rule": chosen,
    }
    for r, report in reports.items():
        meta[f"{r}_rule_passes"] = str(report.passed).lower()
    product = _assemble(G, action, chosen, meta)
    logger.info(
        "%s: crossed product of dimension %d (rule %s; %s)",
        product.name, product.dim, chosen,
        ", ".join(f"{r} {'passes' if rep.passed else 'fails ' + ','.join(rep.failures)}" for r, rep in reports.items()),
    )
    return product


def embed(G: FiniteQuantumGroup, action: HopfAction, x: np.ndarray, s: int) -> np.ndarray:
    """Coefficients of x (.) s in the product."""
    d = G.dim
    out = np.zeros(d * action.group.order, dtype=complex)
    out[s * d:(s + 1) * d] = x
    return out


# -- irreducibles of the product -------------------------------------------


@dataclass(frozen=True)
class CrossedIrrReport:
    dims: List[int]
    expected_dims: List[int]
    matches: List[Tuple[str, str, str]]   # (product block, factor block, group element)
    passed: bool

    def to_dict(self) -> dict:
        return {
            "dims": self.dims,
            "expected_dims": self.expected_dims,
            "matches": [list(m) for m in self.matches],
            "passed": self.passed,
        }


def verify_crossed_irr(
    table_G: IrrTable,
    product: FiniteQuantumGroup,
    action: HopfAction,
    tol: Tolerance = DEFAULT_TOL,
    product_table: Optional[IrrTable] = None,
) -> CrossedIrrReport:
    """
    Every irreducible of the product is some u^pi (.) s: block dimensions are
    those of G repeated |Gamma| times and each product block's coefficient
    span equals span{u^pi_ij (.) s} for exactly one pair (pi, s).

    Raises:
        TheoremViolationError: dimensions or coefficient spans do not match.
    """
    G = table_G.owner
    if product_table is None:
        product_table = wedderburn(product, tol, table_G.seed)
    group = action.group
    dims = sorted(product_table.dims)
    expected = sorted(table_G.dims * group.order)
    if dims != expected:
        raise TheoremViolationError(f"crossed product blocks {dims}, expected {expected}")

    candidates = {}
    for b in table_G.blocks:
        for s in range(group.order):
            vecs = np.stack([embed(G, action, b.coeffs[i, j], s) for i in range(b.n) for j in range(b.n)], axis=1)
            candidates[(b.index, group.labels[s])] = (b.n, Subspace.span(vecs, product.dim, tol))

    matches = []
    used = set()
    for pb in product_table.blocks:
        span = Subspace.span(pb.coeffs.reshape(pb.n * pb.n, -1).T, product.dim, tol)
        hit = None
        for key, (n, target) in candidates.items():
            if key in used or n != pb.n:
                continue
            if span.equals(target, tol):
                hit = key
                break
        if hit is None:
            raise TheoremViolationError(f"{pb.index}: coefficient span is not an embedded u^pi (.) s")
        used.add(hit)
        matches.append((pb.index, hit[0], hit[1]))
    return CrossedIrrReport(product_table.dims, expected, matches, True)


def embedded_states(
    G: FiniteQuantumGroup, action: HopfAction, product: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL
) -> Dict[str, IdempotentState]:
    """
    Idempotent states of the product whose coideals are the embedded copies:

        "group":   omega(a (.) s) = h(a)              -> N = span{1 (.) s}
        "algebra": omega(a (.) s) = epsilon(a) [s = e] -> N = L^inf(G) (.) e
    """
    m = action.group.order
    group_state = np.concatenate([G.haar for _ in range(m)])
    algebra_state = embed(G, action, G.counit, action.group.identity)
    return {
        "group": as_state(product, Functional(product, group_state), "C[Gamma]", tol),
        "algebra": as_state(product, Functional(product, algebra_state), "L^inf(G)", tol),
    }


@dataclass(frozen=True)
class CrossedReport:
    name: str
    dim: int
    rule: str
    printed_rule_passes: Optional[bool]
    axioms_max_residual: float
    haar_fiber_residual: float
    irr: CrossedIrrReport
    embedded_dims: Dict[str, int]
    embedded_invariance: Dict[str, float]

    @property
    def passed(self) -> bool:
        return self.irr.passed and self.haar_fiber_residual == 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "rule": self.rule,
            "printed_rule_passes": self.printed_rule_passes,
            "axioms_max_residual": self.axioms_max_residual,
            "haar_fiber_residual": self.haar_fiber_residual,
            "irr": self.irr.to_dict(),
            "embedded_dims": self.embedded_dims,
            "embedded_invariance": self.embedded_invariance,
            "passed": self.passed,
        }


def crossed_product_report(
    G: FiniteQuantumGroup, action: HopfAction, tol: Tolerance = DEFAULT_TOL, table_G: Optional[IrrTable] = None,
    product: Optional[FiniteQuantumGroup] = None,
) -> CrossedReport:
    """Build (or take) the product and run every check on it."""
    if product is None:
        product = build_crossed_product(G, action, tol)
    if table_G is None:
        table_G = wedderburn(G, tol)
    axioms = verify_axioms(product, tol)
    d = G.dim
    e = action.group.identity
    fiber = product.haar.reshape(action.group.order, d)
    expected = np.zeros_like(fiber)
    expected[e] = G.haar
    haar_residual = float(np.max(np.abs(fiber - expected)))

    irr = verify_crossed_irr(table_G, product, action, tol)
    dims, invariance = {}, {}
    for key, state in embedded_states(G, action, product, tol).items():
        N = coideal_of(product, state, tol)
        dims[key] = N.dim
        invariance[key] = N.right_invariance_residual()
    printed = product.meta.get("printed_rule_passes")
    return CrossedReport(
        name=product.name,
        dim=product.dim,
        rule=product.meta.get("rule", "standard"),
        printed_rule_passes=None if printed is None else printed == "true",
        axioms_max_residual=axioms.max_residual,
        haar_fiber_residual=haar_residual,
        irr=irr,
        embedded_dims=dims,
        embedded_invariance=invariance,
    )
