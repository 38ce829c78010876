import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.algebra import semisimple
from src.algebra.semisimple import StarAlgebra, center, central_idempotents, decompose
from src.utils.errors import DegenerateSpectrumError, InternalConsistencyError


def matrix_algebra(n: int) -> StarAlgebra:
    """M_n on the matrix units E_ab stored at a * n + b."""
    d = n * n
    structure = np.zeros((d, d, d), dtype=complex)
    involution = np.zeros((d, d), dtype=complex)
    for a in range(n):
        for b in range(n):
            involution[b * n + a, a * n + b] = 1.0
            for c in range(n):
                structure[a * n + b, b * n + c, a * n + c] = 1.0
    return StarAlgebra(structure, np.eye(n).reshape(-1).astype(complex), involution, name=f"M{n}")


def direct_sum(*algebras: StarAlgebra) -> StarAlgebra:
    d = sum(a.dim for a in algebras)
    structure = np.zeros((d, d, d), dtype=complex)
    involution = np.zeros((d, d), dtype=complex)
    unit = np.zeros(d, dtype=complex)
    k = 0
    for a in algebras:
        s = slice(k, k + a.dim)
        structure[s, s, s] = a.structure
        involution[s, s] = a.involution
        unit[s] = a.unit
        k += a.dim
    return StarAlgebra(structure, unit, involution, name="+".join(a.name for a in algebras))


def test_center_of_matrix_algebra_is_scalars():
    assert center(matrix_algebra(3)).dim == 1


def test_center_of_direct_sum():
    assert center(direct_sum(matrix_algebra(2), matrix_algebra(1), matrix_algebra(1))).dim == 3


def test_central_idempotents_partition_unity():
    alg = direct_sum(matrix_algebra(2), matrix_algebra(1))
    idempotents = central_idempotents(alg, seed=3)
    assert len(idempotents) == 2
    assert np.allclose(sum(idempotents), alg.unit)
    for e in idempotents:
        assert np.allclose(alg.product(e, e), e)


@pytest.mark.parametrize('sizes', [[1], [2], [3], [1, 1, 2], [2, 2], [1, 3]])
def test_decompose_block_sizes(sizes):
    alg = direct_sum(*(matrix_algebra(n) for n in sizes))
    blocks = decompose(alg, seed=7)
    assert sorted(b.n for b in blocks) == sorted(sizes)


@given(st.integers(0, 10_000))
@settings(max_examples=20, deadline=None)
def test_extract_is_multiplicative(seed):
    alg = direct_sum(matrix_algebra(2), matrix_algebra(1))
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
    y = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
    for block in decompose(alg, seed=seed):
        lhs = block.matrix_of(alg.product(x, y))
        assert np.allclose(lhs, block.matrix_of(x) @ block.matrix_of(y))
        assert np.allclose(block.matrix_of(alg.adjoint(x)), block.matrix_of(x).conj().T)


def test_matrix_units_are_adjoint_pairs():
    alg = matrix_algebra(2)
    (block,) = decompose(alg)
    assert np.allclose(alg.adjoint(block.units[0, 1]), block.units[1, 0])
    assert np.allclose(block.units[0, 0] + block.units[1, 1], alg.unit)


def test_non_matrix_block_is_rejected():
    # C[x]/(x^2) is commutative but not semisimple
    structure = np.zeros((2, 2, 2), dtype=complex)
    structure[0, 0, 0] = structure[0, 1, 1] = structure[1, 0, 1] = 1.0
    alg = StarAlgebra(structure, np.array([1.0, 0.0], dtype=complex), np.eye(2, dtype=complex))
    with pytest.raises(InternalConsistencyError):
        decompose(alg)


@pytest.mark.parametrize('seed', [0, 7, 42, 1234])
def test_many_blocks_keep_clean_idempotents(seed):
    alg = direct_sum(*([matrix_algebra(1)] * 8 + [matrix_algebra(2)] * 2))
    for e in central_idempotents(alg, seed=seed):
        assert np.max(np.abs(alg.product(e, e) - e)) < 1e-12
    blocks = decompose(alg, seed=seed)
    assert sorted(b.n for b in blocks) == [1] * 8 + [2, 2]


def test_block_shape_failures_are_retried(monkeypatch):
    alg = direct_sum(matrix_algebra(2), matrix_algebra(1))
    real = semisimple._decompose_once
    seeds = []

    def flaky(alg, tol, seed):
        seeds.append(seed)
        if len(seeds) == 1:
            raise DegenerateSpectrumError("simple block of dimension 3 is not a full matrix algebra")
        return real(alg, tol, seed)

    monkeypatch.setattr(semisimple, '_decompose_once', flaky)
    assert sorted(b.n for b in decompose(alg, seed=5)) == [1, 2]
    assert seeds == [5, 6]
