"""
The dual L^1(G): convolution, the # involution, its block decomposition
(the irreducible corepresentations), the Fourier transform and the hat map.

Contraction convention for the F matrices (diagonal, positive):

    h((u_kj)* u_ab) = delta_ka delta_jb (F^-1)_kk / tr(F)
    e_ij            = tr(F) sum_k F_ik hat((u_kj)*)

where e_ij is the matrix unit of the block and hat(x)(y) = h(x y).
The fit reads w_k = (F^-1)_kk / tr(F) off the Fourier transform of
hat((u_kj)*) and rescales so that tr(F) = tr(F^-1).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import F_FIT_EPS, FINGERPRINT_DECIMALS, RANDOM_STATE
from src.algebra.hopf import Element, FiniteQuantumGroup
from src.algebra.linalg import DEFAULT_TOL, Subspace, Tolerance, numerical_rank, solve_linear
from src.algebra.semisimple import StarAlgebra, decompose
from src.utils.errors import InternalConsistencyError, OwnerMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Functional:
    """An element of L^1(G): a covector over the owner's basis."""

    owner: FiniteQuantumGroup
    covec: np.ndarray

    def __post_init__(self):
        covec = np.asarray(self.covec, dtype=complex)
        if covec.shape != (self.owner.dim,):
            raise OwnerMismatchError(f"functional needs {self.owner.dim} entries, got {covec.shape}")
        object.__setattr__(self, "covec", covec)

    def __call__(self, x: Union[Element, np.ndarray]) -> complex:
        if isinstance(x, Element):
            if x.owner is not self.owner:
                raise OwnerMismatchError("functional and element belong to different quantum groups")
            x = x.coeffs
        return complex(self.covec @ x)

    def __mul__(self, other: Union["Functional", complex]) -> "Functional":
        if isinstance(other, Functional):
            return convolve(self, other)
        return Functional(self.owner, self.covec * other)

    def __rmul__(self, scalar: complex) -> "Functional":
        return Functional(self.owner, self.covec * scalar)

    def __add__(self, other: "Functional") -> "Functional":
        _same_owner(self, other)
        return Functional(self.owner, self.covec + other.covec)

    def __sub__(self, other: "Functional") -> "Functional":
        _same_owner(self, other)
        return Functional(self.owner, self.covec - other.covec)

    def sharp(self) -> "Functional":
        return sharp(self)


def _same_owner(f: Functional, g: Functional) -> None:
    if f.owner is not g.owner:
        raise OwnerMismatchError(f"functionals on {f.owner.name} and {g.owner.name} do not mix")


def counit_functional(G: FiniteQuantumGroup) -> Functional:
    return Functional(G, G.counit.copy())


def haar_functional(G: FiniteQuantumGroup) -> Functional:
    return Functional(G, G.haar.copy())


def convolution_structure(G: FiniteQuantumGroup) -> np.ndarray:
    """conv[i, j, k] = (phi_i * phi_j)(b_k) for the dual basis phi."""
    return G.coproduct.transpose(1, 2, 0)


def sharp_matrix(G: FiniteQuantumGroup) -> np.ndarray:
    """J with f# = J conj(f), from f#(x) = conj(f(S(x)*))."""
    return (np.conj(G.star) @ G.antipode).T


def convolution_algebra(G: FiniteQuantumGroup) -> StarAlgebra:
    return StarAlgebra(
        structure=convolution_structure(G),
        unit=G.counit.astype(complex),
        involution=sharp_matrix(G),
        name=f"L1({G.name})",
    )


def convolve(f: Functional, g: Functional) -> Functional:
    """(f * g)(x) = (f (x) g) Delta(x)."""
    _same_owner(f, g)
    return Functional(f.owner, np.einsum("kij,i,j->k", f.owner.coproduct, f.covec, g.covec))


def sharp(f: Functional) -> Functional:
    return Functional(f.owner, sharp_matrix(f.owner) @ np.conj(f.covec))


def hat_matrix(G: FiniteQuantumGroup) -> np.ndarray:
    """Column k is hat(b_k), i.e. H[l, k] = h(b_k b_l)."""
    return np.einsum("klm,m->lk", G.mult, G.haar)


def hat(x: Element) -> Functional:
    """hat(x)(y) = h(x y)."""
    G = x.owner
    return Functional(G, np.einsum("i,ilm,m->l", x.coeffs, G.mult, G.haar))


# -- irreducible blocks ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class IrrBlock:
    """One irreducible corepresentation pi with its coordinates on L^1."""

    index: str
    n: int
    extract: np.ndarray          # extract[i, j] . f = pi(f)_ij
    coeffs: np.ndarray           # coeffs[i, j] = coefficients of u_ij in L^inf
    F: np.ndarray
    fingerprint: Tuple[complex, ...]
    fit_residual: float = 0.0

    def apply(self, f: Union[Functional, np.ndarray]) -> np.ndarray:
        covec = f.covec if isinstance(f, Functional) else np.asarray(f)
        return np.einsum("ijk,k->ij", self.extract, covec)

    def coefficient(self, owner: FiniteQuantumGroup, i: int, j: int) -> Element:
        return Element(owner, self.coeffs[i, j])

    def antipode_matrix(self, G: FiniteQuantumGroup, f: Functional) -> np.ndarray:
        """pi(f o S)_ij = f(S(u_ij))."""
        return np.einsum("k,kl,ijl->ij", f.covec, G.antipode, self.coeffs)


@dataclass(frozen=True, eq=False)
class IrrTable:
    owner: FiniteQuantumGroup
    blocks: List[IrrBlock]
    seed: int = RANDOM_STATE

    @property
    def dims(self) -> List[int]:
        return [b.n for b in self.blocks]

    def fourier_matrix(self) -> np.ndarray:
        """Rows are the coordinates of all blocks; shape (sum n^2, dim)."""
        return np.vstack([b.extract.reshape(b.n * b.n, -1) for b in self.blocks])

    def block_by_fingerprint(self) -> Dict[Tuple[complex, ...], IrrBlock]:
        return {b.fingerprint: b for b in self.blocks}


def _fingerprint(extract: np.ndarray) -> Tuple[complex, ...]:
    character = np.einsum("iik->k", extract)
    rounded = np.round(character, FINGERPRINT_DECIMALS) + 0.0
    return tuple(complex(v.real + 0.0, v.imag + 0.0) for v in rounded)


def _fingerprint_key(block: IrrBlock) -> tuple:
    # n ascending, then fingerprint descending so the trivial block leads
    flat = []
    for v in block.fingerprint:
        flat.extend([-v.real, -v.imag])
    return (block.n, tuple(flat))


def _fit_F(G: FiniteQuantumGroup, coeffs: np.ndarray, extract: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Fit the diagonal F of one block from pi(hat((u_kj)*)) = w_k e_kj.

    Returns:
        (F, residual) where residual measures how far pi(hat((u_kj)*)) is from a
        multiple of e_kj.
    """
    n = coeffs.shape[0]
    samples = np.zeros((n, n), dtype=complex)
    residual = 0.0
    for k in range(n):
        for j in range(n):
            transformed = np.einsum("abl,l->ab", extract, hat(Element(G, G.adjoint(coeffs[k, j]))).covec)
            samples[k, j] = transformed[k, j]
            off = transformed.copy()
            off[k, j] = 0.0
            residual = max(residual, float(np.max(np.abs(off))))
    # least squares over j for each k
    w = samples.mean(axis=1)
    residual = max(residual, float(np.max(np.abs(samples - w[:, None]))), float(np.max(np.abs(w.imag))))
    w = w.real
    if np.any(w <= F_FIT_EPS):
        raise InternalConsistencyError("orthogonality weights are not positive", {"weights": w.tolist()})
    c = 1.0 / np.sqrt(np.sum(1.0 / w))
    return np.diag(c / w), residual


def wedderburn(G: FiniteQuantumGroup, tol: Tolerance = DEFAULT_TOL, seed: int = RANDOM_STATE) -> IrrTable:
    """
    Block decomposition of the convolution algebra L^1(G).

    Args:
        G: A quantum group that passed verify_axioms.
        tol: Tolerances.
        seed: Seed for the random splitting elements.

    Returns:
        IrrTable in canonical order (n ascending, then character fingerprint descending).
    """
    alg = convolution_algebra(G)
    simple = decompose(alg, tol, seed)
    eye = np.eye(G.dim)

    raw = []
    for s in simple:
        n = s.n
        # pairing <f, u_ij> = pi(f)_ij against the dual basis
        rows = s.extract.reshape(n * n, G.dim)
        coeffs = solve_linear(eye, rows.T, tol).T.reshape(n, n, G.dim)
        F, fit_residual = _fit_F(G, coeffs, s.extract)
        raw.append(
            IrrBlock(
                index="",
                n=n,
                extract=s.extract,
                coeffs=coeffs,
                F=F,
                fingerprint=_fingerprint(s.extract),
                fit_residual=fit_residual,
            )
        )

    ordered = sorted(raw, key=_fingerprint_key)
    blocks = [
        IrrBlock(f"pi{k}", b.n, b.extract, b.coeffs, b.F, b.fingerprint, b.fit_residual)
        for k, b in enumerate(ordered)
    ]
    table = IrrTable(owner=G, blocks=blocks, seed=seed)
    _check_table(table, tol)
    logger.info("%s: blocks %s", G.name, ",".join(str(n) for n in table.dims))
    return table


def _check_table(table: IrrTable, tol: Tolerance) -> None:
    G = table.owner
    scale = G.scale()
    residuals = {}
    if sum(n * n for n in table.dims) != G.dim:
        raise InternalConsistencyError("block dimensions do not exhaust L^1", {"dims": table.dims})
    if numerical_rank(table.fourier_matrix(), tol) != G.dim:
        raise InternalConsistencyError("joint Fourier map is not a bijection")
    for b in table.blocks:
        u = b.coeffs
        # Delta(u_ij) = sum_t u_it (x) u_tj
        lhs = np.einsum("ijk,kpq->ijpq", u, G.coproduct)
        rhs = np.einsum("itp,tjq->ijpq", u, u)
        residuals[f"{b.index}:corepresentation"] = float(np.max(np.abs(lhs - rhs)))
        # sum_t u_ti* u_tj = delta_ij 1
        adj = np.einsum("pq,tiq->tip", G.star, np.conj(u))
        prod = np.einsum("tip,tjq,pqr->ijr", adj, u, G.mult)
        target = np.einsum("ij,r->ijr", np.eye(b.n), G.unit)
        residuals[f"{b.index}:unitarity"] = float(np.max(np.abs(prod - target)))
        residuals[f"{b.index}:F_fit"] = b.fit_residual
        trace_gap = abs(np.trace(b.F) - np.trace(np.linalg.inv(b.F)))
        residuals[f"{b.index}:F_trace"] = float(trace_gap)
    bad = {k: v for k, v in residuals.items() if v > tol.equality_eps * scale}
    if bad:
        raise InternalConsistencyError(f"{G.name}: irreducible table fails invariants", bad)


def fourier(table: IrrTable, f: Functional) -> List[np.ndarray]:
    """lambda(f) = (pi(f))_pi, one matrix per block."""
    if f.owner is not table.owner:
        raise OwnerMismatchError("functional does not belong to the table's quantum group")
    return [b.apply(f) for b in table.blocks]


def inverse_fourier(table: IrrTable, matrices: List[np.ndarray], tol: Tolerance = DEFAULT_TOL) -> Functional:
    """The functional whose Fourier transform is the given block family."""
    rhs = np.concatenate([np.asarray(m, dtype=complex).reshape(-1) for m in matrices])
    covec = solve_linear(table.fourier_matrix(), rhs, tol)
    return Functional(table.owner, covec)


def one_dimensional_characters(table: IrrTable) -> List[Element]:
    """The coefficients u^pi of the one-dimensional blocks."""
    return [Element(table.owner, b.coeffs[0, 0]) for b in table.blocks if b.n == 1]


def coefficient_space(table: IrrTable, parts: List[Subspace], tol: Tolerance = DEFAULT_TOL) -> Subspace:
    """span{ sum_j eta_j u_ij : eta in parts[pi], all i, all pi } inside L^inf."""
    vectors = []
    for b, part in zip(table.blocks, parts):
        if part.dim == 0:
            continue
        # vec[i, c, :] = sum_j eta_c[j] u_ij
        vec = np.einsum("ijk,jc->ick", b.coeffs, part.basis)
        vectors.append(vec.reshape(-1, table.owner.dim).T)
    if not vectors:
        return Subspace.zero(table.owner.dim)
    return Subspace.span(np.hstack(vectors), table.owner.dim, tol)


# -- formula checks --------------------------------------------------------


@dataclass(frozen=True)
class FormulaReport:
    name: str
    residuals: Dict[str, float]
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "max_residual": self.max_residual, "residuals": self.residuals}


def matrix_unit_check(
    block: IrrBlock, G: FiniteQuantumGroup, table: IrrTable, tol: Tolerance = DEFAULT_TOL
) -> FormulaReport:
    """
    e_ij = tr(F) sum_k F_ik hat((u_kj)*) must transform to the (i, j) matrix
    unit of this block and to zero in every other block.
    """
    n = block.n
    trF = float(np.trace(block.F).real)
    residuals = {}
    for i in range(n):
        for j in range(n):
            covec = np.zeros(G.dim, dtype=complex)
            for k in range(n):
                if block.F[i, k] != 0:
                    covec += trF * block.F[i, k] * hat(Element(G, G.adjoint(block.coeffs[k, j]))).covec
            e = Functional(G, covec)
            worst = 0.0
            for other in table.blocks:
                target = np.zeros((other.n, other.n))
                if other is block:
                    target[i, j] = 1.0
                worst = max(worst, float(np.max(np.abs(other.apply(e) - target))))
            residuals[f"e_{i}{j}"] = worst
    return FormulaReport(f"matrix_units:{block.index}", residuals, tol.equality_eps * G.scale())


def convolution_formula_check(
    G: FiniteQuantumGroup, table: IrrTable, f: Functional, x: Element, tol: Tolerance = DEFAULT_TOL
) -> FormulaReport:
    """pi(hat(f * x)) = pi(hat(x)) pi(f o S) on every block, with f * x = (id (x) f) Delta(x)."""
    fx = Element(G, G.left_action(f.covec, x.coeffs))
    hat_fx = hat(fx)
    hat_x = hat(x)
    residuals = {}
    for b in table.blocks:
        lhs = b.apply(hat_fx)
        rhs = b.apply(hat_x) @ b.antipode_matrix(G, f)
        residuals[b.index] = float(np.max(np.abs(lhs - rhs)))
    scale = G.scale() * (1.0 + np.linalg.norm(f.covec)) * (1.0 + np.linalg.norm(x.coeffs))
    return FormulaReport("convolution_formula", residuals, tol.equality_eps * scale)


def format_irr_table(table: IrrTable) -> str:
    """Text report: dims, F, fingerprint and the coordinate matrices on the basis."""
    G = table.owner
    lines = [f"\nIrreducible corepresentations of {G.name}", "=" * 40]
    lines.append("blocks: " + ",".join(str(n) for n in table.dims))
    lines.append("convention: h(u_kj* u_ab) = d_ka d_jb (F^-1)_kk / tr F ; e_ij = tr F sum_k F_ik hat(u_kj*)")
    for b in table.blocks:
        lines.append(f"  {b.index}: n={b.n}  F=diag({', '.join(f'{v:.6f}' for v in np.diag(b.F).real)})")
        lines.append("    fingerprint: " + " ".join(_format_complex(v) for v in b.fingerprint))
        frame = pd.DataFrame(
            {label: [_format_complex(v) for v in b.extract[:, :, k].reshape(-1)] for k, label in enumerate(G.basis_labels)},
            index=[f"({i},{j})" for i in range(b.n) for j in range(b.n)],
        )
        lines.extend("    " + row for row in frame.to_string().splitlines())
    return "\n".join(lines)


def _format_complex(v: complex) -> str:
    v = complex(round(v.real, 6) + 0.0, round(v.imag, 6) + 0.0)
    if v.imag == 0:
        return f"{v.real:g}"
    return f"{v.real:g}{v.imag:+g}i"
