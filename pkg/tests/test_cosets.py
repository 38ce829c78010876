import numpy as np
import pytest

from config.catalog import EXAMPLES, EXPECTED_INTRINSIC_ORDER
from src.algebra.linalg import Subspace
from src.theory import cosets
from src.theory.cosets import (
    CosetOutcome,
    coset,
    coset_table,
    disjointness_check,
    functoriality_check,
    intrinsic_group,
    surjectivity_check,
    translate_ideal,
)
from src.theory.ideals import Hull, IdealSubspace, ideal_I
from src.theory.quasigroup import J1, as_state, coideal_of, search_idempotent_states
from src.utils.errors import NotALeftIdealError, OwnerMismatchError, PreconditionError

from conftest import indicator

A3 = [0, 3, 4]


@pytest.fixture(scope='module')
def s3_group(group_s3, tables):
    return intrinsic_group(group_s3, tables['group_s3'])


@pytest.fixture(scope='module')
def a3_coideal(group_s3):
    return coideal_of(group_s3, as_state(group_s3, indicator(group_s3, A3), 'A3'))


def element_at(group, s):
    """The group-like lambda_s of C[S3]."""
    for x in group.elements:
        if int(np.argmax(np.abs(x.coeffs))) == s:
            return x
    raise LookupError(s)


@pytest.mark.parametrize('name', sorted(EXAMPLES))
def test_intrinsic_group_order(examples, tables, name):
    assert intrinsic_group(examples[name], tables[name]).order == EXPECTED_INTRINSIC_ORDER[name]


def test_intrinsic_group_of_group_algebra_is_the_group(s3_group):
    summary = s3_group.to_dict()
    assert summary['order'] == 6
    assert not summary['abelian']
    assert sorted(summary['order_sequence']) == [1, 2, 2, 2, 3, 3]


def test_intrinsic_group_of_kac_paljutkin(kp, tables):
    group = intrinsic_group(kp, tables['kac_paljutkin'])
    assert group.to_dict()['abelian']
    assert sorted(group.group.order_sequence()) == [1, 2, 2, 2]
    for x in group.elements:
        assert max(x.residuals().values()) < 1e-8


def test_intrinsic_group_owner_checked(group_z2, tables):
    with pytest.raises(OwnerMismatchError):
        intrinsic_group(group_z2, tables['kac_paljutkin'])


# -- cosets -----------------------------------------------------------------


def test_coset_of_identity_is_N(group_s3, s3_group, a3_coideal):
    xN = coset(group_s3, element_at(s3_group, 0), a3_coideal)
    assert xN.space.equals(a3_coideal.space)


def test_coset_dichotomy_on_alternating_subgroup(group_s3, s3_group, a3_coideal):
    for s in range(6):
        outcome = disjointness_check(group_s3, element_at(s3_group, s), a3_coideal)
        assert outcome is (CosetOutcome.EQUALS_N if s in A3 else CosetOutcome.ZERO)


def test_translated_coset_by_transposition(group_s3, s3_group, a3_coideal):
    xN = coset(group_s3, element_at(s3_group, 1), a3_coideal)
    assert xN.space.equals(Subspace.span(np.eye(6)[:, [1, 2, 5]]))
    assert max(xN.residuals.values()) < 1e-8


def test_coset_table(group_s3, s3_group, a3_coideal):
    frame = coset_table(group_s3, s3_group, a3_coideal)
    assert list(frame.columns) == ['element', 'omega(x)', 'dim_xN', 'outcome']
    assert (frame['dim_xN'] == 3).all()
    assert sorted(frame['outcome']) == ['EqualsN'] * 3 + ['Zero'] * 3
    assert set(frame['omega(x)']) == {0.0, 1.0}


@pytest.mark.parametrize('name', sorted(EXAMPLES))
def test_every_found_state(examples, tables, name):
    G = examples[name]
    group = intrinsic_group(G, tables[name])
    search = search_idempotent_states(G, tables[name], seeds=range(3))
    for state in search.states:
        N = coideal_of(G, state)
        J = J1(G, N)
        assert functoriality_check(G, J, group).passed
        for x in group.elements:
            outcome = disjointness_check(G, x, N)
            assert outcome in (CosetOutcome.EQUALS_N, CosetOutcome.ZERO)
            if outcome is CosetOutcome.ZERO:
                assert surjectivity_check(G, N, x)


# -- translated ideals ------------------------------------------------------


def test_translate_preannihilator(group_s3, s3_group, a3_coideal):
    J = J1(group_s3, a3_coideal)
    moved = translate_ideal(group_s3, J, element_at(s3_group, 1))
    assert moved.dim == 3
    # J vanishes on A3; its translate by a transposition vanishes on the other coset
    assert moved.space.equals(Subspace.span(np.eye(6)[:, A3]))


def test_functoriality_on_preannihilator(group_s3, s3_group, a3_coideal):
    report = functoriality_check(group_s3, J1(group_s3, a3_coideal), s3_group)
    assert report.passed, report.residuals
    assert len(report.residuals) == 6 * 6 + 6


def test_functoriality_on_random_ideals(kp, tables):
    table = tables['kac_paljutkin']
    group = intrinsic_group(kp, table)
    rng = np.random.default_rng(8)
    for _ in range(3):
        I = ideal_I(table, Hull.random(table, rng))
        assert functoriality_check(kp, I, group).passed


def test_translate_rejects_non_ideals(kp, tables):
    group = intrinsic_group(kp, tables['kac_paljutkin'])
    rng = np.random.default_rng(4)
    line = IdealSubspace(kp, Subspace.span(rng.standard_normal(kp.dim)))
    with pytest.raises(NotALeftIdealError):
        translate_ideal(kp, line, group.elements[1])


def test_surjectivity(group_s3, s3_group, a3_coideal):
    assert surjectivity_check(group_s3, a3_coideal, element_at(s3_group, 1))
    with pytest.raises(PreconditionError):
        surjectivity_check(group_s3, a3_coideal, element_at(s3_group, 3))


def test_coset_table_builds_each_coset_once(group_s3, s3_group, a3_coideal, monkeypatch):
    calls = []
    real = cosets.coset

    def counted(*args, **kwargs):
        calls.append(args[1])
        return real(*args, **kwargs)

    monkeypatch.setattr(cosets, 'coset', counted)
    frame = cosets.coset_table(group_s3, s3_group, a3_coideal)
    assert len(calls) == len(frame) == 6


def test_dichotomy_accepts_a_built_coset(group_s3, s3_group, a3_coideal):
    x = element_at(s3_group, 1)
    xN = coset(group_s3, x, a3_coideal)
    assert disjointness_check(group_s3, x, a3_coideal, xN=xN) is CosetOutcome.ZERO
