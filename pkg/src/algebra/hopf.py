"""
Finite quantum groups as finite-dimensional Hopf *-algebras with Haar state.

Structure tensors are dense over an explicit ordered basis b_0..b_{d-1}:

    mult[i, j, k]       coefficient of b_k in b_i b_j
    unit[i]             coefficient of b_i in 1
    star[:, i]          coefficients of b_i*  (x* = star @ conj(x))
    coproduct[k, i, j]  coefficient of b_i (x) b_j in Delta(b_k)
    counit[i]           epsilon(b_i)
    antipode[:, i]      coefficients of S(b_i)
    haar[i]             h(b_i)

Functionals pair bilinearly with elements: f(x) = sum_k f_k x_k.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.algebra.linalg import DEFAULT_TOL, Tolerance, eig_hermitian, solve_linear
from src.utils.errors import (
    AxiomFailureError,
    MalformedDefinitionError,
    OwnerMismatchError,
)
from src.utils.groups import FiniteGroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteQuantumGroup:
    """A finite quantum group: L^inf(G) with Delta, epsilon, S and h."""

    name: str
    basis_labels: List[str]
    mult: np.ndarray
    unit: np.ndarray
    star: np.ndarray
    coproduct: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    haar: np.ndarray
    haar_derived: bool = False
    meta: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        d = len(self.basis_labels)
        shapes = {
            "mult": (d, d, d),
            "unit": (d,),
            "star": (d, d),
            "coproduct": (d, d, d),
            "counit": (d,),
            "antipode": (d, d),
            "haar": (d,),
        }
        for tensor, shape in shapes.items():
            arr = np.array(getattr(self, tensor), dtype=complex)
            if arr.shape != shape:
                raise MalformedDefinitionError(tensor, f"expected shape {shape}, got {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise MalformedDefinitionError(tensor, "holds NaN or Inf entries")
            arr.setflags(write=False)
            object.__setattr__(self, tensor, arr)

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    # -- elementwise operations on coefficient vectors ---------------------

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.mult)

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        return self.star @ np.conj(x)

    def delta(self, x: np.ndarray) -> np.ndarray:
        """Delta(x) as a d x d matrix of coefficients on b_i (x) b_j."""
        return np.einsum("k,kij->ij", x, self.coproduct)

    def left_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> x y."""
        return np.einsum("i,ijk->kj", x, self.mult)

    def right_mult_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of y -> y x."""
        return np.einsum("j,ijk->ki", x, self.mult)

    def left_action(self, f: np.ndarray, x: np.ndarray) -> np.ndarray:
        """f * x = (id (x) f) Delta(x)."""
        return np.einsum("k,kij,j->i", x, self.coproduct, f)

    def right_action(self, x: np.ndarray, f: np.ndarray) -> np.ndarray:
        """x * f = (f (x) id) Delta(x)."""
        return np.einsum("k,kij,i->j", x, self.coproduct, f)

    def gram(self, f: np.ndarray) -> np.ndarray:
        """The sesquilinear form matrix [f(b_i* b_j)]."""
        return np.einsum("pi,pjk,k->ij", self.star, self.mult, f)

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return v

    def element(self, coeffs: Sequence[complex]) -> "Element":
        return Element(self, np.asarray(coeffs, dtype=complex))

    def one(self) -> "Element":
        return Element(self, self.unit.copy())

    def is_commutative(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return bool(np.max(np.abs(self.mult - self.mult.transpose(1, 0, 2))) <= tol.equality_eps)

    def is_cocommutative(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return bool(np.max(np.abs(self.coproduct - self.coproduct.transpose(0, 2, 1))) <= tol.equality_eps)

    def scale(self) -> float:
        """1 + the largest structure constant, the yardstick for residuals."""
        tensors = (self.mult, self.unit, self.star, self.coproduct, self.counit, self.antipode, self.haar)
        return 1.0 + max(float(np.max(np.abs(t))) for t in tensors)

    def __repr__(self):
        return f"FiniteQuantumGroup({self.name}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Element:
    """An element of L^inf(G), held as coefficients over the owner's basis."""

    owner: FiniteQuantumGroup
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.owner.dim,):
            raise MalformedDefinitionError("element", f"expected {self.owner.dim} coefficients, got {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    def _same_owner(self, other: "Element") -> None:
        if other.owner is not self.owner:
            raise OwnerMismatchError(f"elements of {self.owner.name} and {other.owner.name} do not mix")

    def __add__(self, other: "Element") -> "Element":
        self._same_owner(other)
        return Element(self.owner, self.coeffs + other.coeffs)

    def __sub__(self, other: "Element") -> "Element":
        self._same_owner(other)
        return Element(self.owner, self.coeffs - other.coeffs)

    def __mul__(self, other: Union["Element", complex]) -> "Element":
        if isinstance(other, Element):
            self._same_owner(other)
            return Element(self.owner, self.owner.product(self.coeffs, other.coeffs))
        return Element(self.owner, self.coeffs * other)

    def __rmul__(self, scalar: complex) -> "Element":
        return Element(self.owner, self.coeffs * scalar)

    def star(self) -> "Element":
        return Element(self.owner, self.owner.adjoint(self.coeffs))

    def coproduct(self) -> np.ndarray:
        return self.owner.delta(self.coeffs)

    def counit(self) -> complex:
        return complex(self.owner.counit @ self.coeffs)

    def antipode(self) -> "Element":
        return Element(self.owner, self.owner.antipode @ self.coeffs)

    def haar(self) -> complex:
        return complex(self.owner.haar @ self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


# -- axiom verification ----------------------------------------------------


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    residual: float
    scale: float
    passed: bool


@dataclass(frozen=True)
class AxiomReport:
    """Per-invariant residuals of a Hopf *-algebra with Haar state."""

    name: str
    checks: List[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"invariant": c.name, "residual": c.residual, "scale": c.scale, "passed": c.passed} for c in self.checks]
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "checks": {c.name: {"residual": c.residual, "passed": c.passed} for c in self.checks},
        }


def _residual(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b))) if np.size(a) else 0.0


def verify_axioms(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL) -> AxiomReport:
    """
    Check every Hopf *-algebra and Haar-state axiom on the basis.

    Args:
        G: Quantum group to check.
        tol: Each residual must be at most equality_eps * (1 + max |structure constant|).

    Returns:
        AxiomReport with one row per invariant.
    """
    d = G.dim
    eye = np.eye(d)
    m, cop, star, S = G.mult, G.coproduct, G.star, G.antipode
    unit, eps, h = G.unit, G.counit, G.haar
    scale = G.scale()
    rows = []

    def add(name, lhs, rhs):
        r = _residual(lhs, rhs)
        rows.append(AxiomCheck(name, r, scale, r <= tol.equality_eps * scale))

    # algebra
    add("associativity", np.einsum("ijk,klm->ijlm", m, m), np.einsum("jlk,ikm->ijlm", m, m))
    add("unit_left", np.einsum("i,ijk->jk", unit, m), eye)
    add("unit_right", np.einsum("j,ijk->ik", unit, m), eye)

    # involution
    add("star_involutive", star @ np.conj(star), eye)
    add("star_antimultiplicative", np.einsum("pk,ijk->ijp", star, np.conj(m)), np.einsum("pj,qi,pqr->ijr", star, star, m))

    # coalgebra
    add("delta_multiplicative",
        np.einsum("ijk,krs->ijrs", m, cop),
        np.einsum("ipq,juv,pur,qvs->ijrs", cop, cop, m, m, optimize=True))
    add("delta_unital", np.einsum("k,krs->rs", unit, cop), np.outer(unit, unit))
    add("delta_star", np.einsum("pk,prs->krs", star, cop), np.einsum("kpq,rp,sq->krs", np.conj(cop), star, star))
    add("coassociativity", np.einsum("kpc,pab->kabc", cop, cop), np.einsum("kap,pbc->kabc", cop, cop))
    add("counit_right", np.einsum("kij,j->ki", cop, eps), eye)
    add("counit_left", np.einsum("kij,i->kj", cop, eps), eye)
    add("counit_multiplicative", np.einsum("ijk,k->ij", m, eps), np.outer(eps, eps))
    add("counit_star", star.T @ eps, np.conj(eps))

    # antipode
    target = np.outer(eps, unit)
    add("antipode_left", np.einsum("kij,ai,ajc->kc", cop, S, m, optimize=True), target)
    add("antipode_right", np.einsum("kij,aj,iac->kc", cop, S, m, optimize=True), target)

    # Haar state
    add("haar_unital", np.array([h @ unit]), np.array([1.0]))
    add("haar_right_invariant", np.einsum("kij,j->ki", cop, h), np.outer(h, unit))
    add("haar_left_invariant", np.einsum("kij,i->kj", cop, h), np.outer(h, unit))
    gram = G.gram(h)
    add("haar_gram_hermitian", gram, gram.conj().T)
    values = np.linalg.eigvalsh((gram + gram.conj().T) / 2)
    floor = tol.rank_cutoff * max(float(values[-1]), 0.0)
    rows.append(AxiomCheck("haar_faithful", max(0.0, floor - float(values[0])), scale, bool(values[0] > floor)))

    report = AxiomReport(G.name, rows)
    logger.debug("%s: axioms %s (max residual %.3e)", G.name, "pass" if report.passed else "FAIL", report.max_residual)
    return report


def require_axioms(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL) -> FiniteQuantumGroup:
    report = verify_axioms(G, tol)
    if not report.passed:
        raise AxiomFailureError(report)
    return G


# -- constructors ----------------------------------------------------------


def _as_group(group: Union[FiniteGroup, Sequence[Sequence[int]], np.ndarray]) -> FiniteGroup:
    if isinstance(group, FiniteGroup):
        return group
    return FiniteGroup(np.asarray(group))


def from_finite_group(group) -> FiniteQuantumGroup:
    """
    The function algebra C(G) on the delta basis.

    Args:
        group: FiniteGroup or a raw multiplication table (validated).

    Returns:
        Commutative FiniteQuantumGroup with h the normalized counting measure.
    """
    g = _as_group(group)
    n = g.order
    mult = np.zeros((n, n, n), dtype=complex)
    cop = np.zeros((n, n, n), dtype=complex)
    antipode = np.zeros((n, n), dtype=complex)
    for s in range(n):
        mult[s, s, s] = 1.0
        antipode[g.inv(s), s] = 1.0
    for u in range(n):
        for v in range(n):
            cop[g.mul(u, v), u, v] = 1.0
    counit = np.zeros(n, dtype=complex)
    counit[g.identity] = 1.0
    return FiniteQuantumGroup(
        name=f"C({g.name})",
        basis_labels=[f"d{label}" for label in g.labels],
        mult=mult,
        unit=np.ones(n, dtype=complex),
        star=np.eye(n, dtype=complex),
        coproduct=cop,
        counit=counit,
        antipode=antipode,
        haar=np.full(n, 1.0 / n, dtype=complex),
    )


def from_group_algebra(group) -> FiniteQuantumGroup:
    """
    The group algebra C[G] on the basis lambda_s (cocommutative).

    Args:
        group: FiniteGroup or a raw multiplication table (validated).

    Returns:
        FiniteQuantumGroup with Delta(lambda_s) = lambda_s (x) lambda_s and h(lambda_s) = [s = e].
    """
    g = _as_group(group)
    n = g.order
    mult = np.zeros((n, n, n), dtype=complex)
    cop = np.zeros((n, n, n), dtype=complex)
    flip = np.zeros((n, n), dtype=complex)
    for s in range(n):
        cop[s, s, s] = 1.0
        flip[g.inv(s), s] = 1.0
        for t in range(n):
            mult[s, t, g.mul(s, t)] = 1.0
    identity = np.zeros(n, dtype=complex)
    identity[g.identity] = 1.0
    return FiniteQuantumGroup(
        name=f"C[{g.name}]",
        basis_labels=[f"l{label}" for label in g.labels],
        mult=mult,
        unit=identity.copy(),
        star=flip.copy(),
        coproduct=cop,
        counit=np.ones(n, dtype=complex),
        antipode=flip,
        haar=identity,
    )


def tensor_product(G1: FiniteQuantumGroup, G2: FiniteQuantumGroup) -> FiniteQuantumGroup:
    """G1 (x) G2 on the basis b_i (x) c_j stored at index i * dim(G2) + j."""
    d = G1.dim * G2.dim
    mult = np.einsum("ijk,abc->iajbkc", G1.mult, G2.mult).reshape(d, d, d)
    cop = np.einsum("ipq,auv->iapuqv", G1.coproduct, G2.coproduct).reshape(d, d, d)
    return FiniteQuantumGroup(
        name=f"{G1.name}(x){G2.name}",
        basis_labels=[f"{a}(x){b}" for a in G1.basis_labels for b in G2.basis_labels],
        mult=mult,
        unit=np.kron(G1.unit, G2.unit),
        star=np.kron(G1.star, G2.star),
        coproduct=cop,
        counit=np.kron(G1.counit, G2.counit),
        antipode=np.kron(G1.antipode, G2.antipode),
        haar=np.kron(G1.haar, G2.haar),
        haar_derived=G1.haar_derived or G2.haar_derived,
        meta={"factors": f"{G1.name};{G2.name}"},
    )


def derive_haar(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """
    Solve (id (x) h) Delta = h(.) 1 = (h (x) id) Delta together with h(1) = 1.

    Raises:
        NoSolutionError: no bi-invariant unital functional exists.
    """
    d = G.dim
    eye = np.eye(d)
    cop = G.coproduct
    right = cop.reshape(d * d, d) - np.einsum("kj,i->kij", eye, G.unit).reshape(d * d, d)
    left = cop.transpose(0, 2, 1).reshape(d * d, d) - np.einsum("ki,j->kji", eye, G.unit).reshape(d * d, d)
    a = np.vstack([right, left, G.unit.reshape(1, d)])
    rhs = np.zeros(a.shape[0], dtype=complex)
    rhs[-1] = 1.0
    return solve_linear(a, rhs, tol)


def haar_gram_spectrum(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    values, _ = eig_hermitian(G.gram(G.haar), tol)
    return values


# -- definition documents --------------------------------------------------


def load_definition(doc: str, tol: Tolerance = DEFAULT_TOL, check: bool = True) -> FiniteQuantumGroup:
    """
    Build a quantum group from a definition document and gate it on verify_axioms.
    With check=False the axioms are left to the caller.

    A document without a HAAR section gets its Haar state solved for and is
    marked haar_derived.

    Raises:
        DefinitionParseError: the text does not follow the grammar.
        AxiomFailureError: the structure constants violate an axiom.
    """
    from src.data.definitions import parse_definition

    parsed = parse_definition(doc)
    d = len(parsed["basis"])
    haar = parsed["tensors"].get("HAAR")
    G = FiniteQuantumGroup(
        name=parsed["name"],
        basis_labels=parsed["basis"],
        mult=parsed["tensors"]["MULT"],
        unit=parsed["tensors"]["UNIT"],
        star=parsed["tensors"]["STAR"],
        coproduct=parsed["tensors"]["COPRODUCT"],
        counit=parsed["tensors"]["COUNIT"],
        antipode=parsed["tensors"]["ANTIPODE"],
        haar=haar if haar is not None else np.zeros(d, dtype=complex),
        haar_derived=haar is None,
        meta=parsed["meta"],
    )
    if haar is None:
        logger.info("%s: no HAAR section, solving for the Haar state", G.name)
        G = replace_haar(G, derive_haar(G, tol))
    return require_axioms(G, tol) if check else G


def replace_haar(G: FiniteQuantumGroup, haar: np.ndarray) -> FiniteQuantumGroup:
    return FiniteQuantumGroup(
        name=G.name,
        basis_labels=list(G.basis_labels),
        mult=G.mult,
        unit=G.unit,
        star=G.star,
        coproduct=G.coproduct,
        counit=G.counit,
        antipode=G.antipode,
        haar=haar,
        haar_derived=True,
        meta=dict(G.meta),
    )


def dump_definition(G: FiniteQuantumGroup) -> str:
    """Serialize to the definition grammar; floats use repr so loading is bit-exact."""
    from src.data.definitions import format_definition

    tensors = {
        "MULT": G.mult,
        "UNIT": G.unit,
        "STAR": G.star,
        "COPRODUCT": G.coproduct,
        "COUNIT": G.counit,
        "ANTIPODE": G.antipode,
    }
    if not G.haar_derived:
        tensors["HAAR"] = G.haar
    return format_definition(G.name, G.basis_labels, tensors, G.meta)


def load_definition_file(path: str, tol: Tolerance = DEFAULT_TOL, check: bool = True) -> FiniteQuantumGroup:
    with open(path) as fh:
        return load_definition(fh.read(), tol, check)


def write_definition_file(G: FiniteQuantumGroup, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dump_definition(G))


def structurally_equal(G1: FiniteQuantumGroup, G2: FiniteQuantumGroup, tol: Optional[Tolerance] = None) -> bool:
    """Same basis size and structure tensors (exactly, or within tol)."""
    if G1.dim != G2.dim:
        return False
    for tensor in ("mult", "unit", "star", "coproduct", "counit", "antipode", "haar"):
        a, b = getattr(G1, tensor), getattr(G2, tensor)
        if tol is None:
            if not np.array_equal(a, b):
                return False
        elif _residual(a, b) > tol.equality_eps:
            return False
    return True
