import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from config.catalog import EXAMPLES
from src.algebra.dual import Functional, counit_functional, inverse_fourier, wedderburn
from src.algebra.linalg import Subspace, kernel
from src.theory.ideals import (
    Hull,
    IdealSubspace,
    annihilator_dualities,
    dump_hull,
    galois_check,
    hull_frame,
    hull_of,
    ideal_I,
    left_ideal_from_generators,
    load_hull,
    principal_ideal_check,
    two_sided_hull_check,
    verify_synthesis,
)
from src.utils.errors import (
    AmbientMismatchError,
    ContractViolationError,
    DefinitionParseError,
    NotTwoSidedError,
    OwnerMismatchError,
)

from conftest import indicator, random_functional

NAMES = sorted(EXAMPLES)
seeds = st.integers(0, 2**32 - 1)


def test_counit_generates_everything(examples, tables):
    G = examples['c_s3']
    I = left_ideal_from_generators(G, tables['c_s3'], [counit_functional(G)])
    assert I.dim == G.dim


def test_zero_generates_zero(group_z2, tables):
    I = left_ideal_from_generators(group_z2, tables['group_z2'], [Functional(group_z2, np.zeros(2))])
    assert I.dim == 0
    assert I.is_left_ideal()


def test_no_generators_rejected(group_z2, tables):
    with pytest.raises(ContractViolationError):
        left_ideal_from_generators(group_z2, tables['group_z2'], [])


def test_generators_owner_checked(group_z2, kp, tables):
    with pytest.raises(OwnerMismatchError):
        left_ideal_from_generators(group_z2, tables['group_z2'], [counit_functional(kp)])


def test_running_example_on_group_algebra(group_z2, tables):
    table = tables['group_z2']
    I = left_ideal_from_generators(group_z2, table, [indicator(group_z2, [0])])
    assert I.dim == 1
    assert I.contains(Functional(group_z2, np.array([5.0, 0.0])))
    assert not I.contains(Functional(group_z2, np.array([0.0, 1.0])))

    E = hull_of(table, I)
    assert E.dims == [0, 1]

    J = ideal_I(table, E)
    assert J.dim == 1
    assert J.space.equals(I.space)
    assert verify_synthesis(table, I).passed


@pytest.mark.parametrize('name', NAMES)
def test_trivial_hulls(examples, tables, name):
    G, table = examples[name], tables[name]
    everything = IdealSubspace(G, Subspace.full(G.dim))
    nothing = IdealSubspace(G, Subspace.zero(G.dim))
    assert hull_of(table, everything).dims == [0] * len(table.blocks)
    assert hull_of(table, nothing).dims == table.dims
    assert ideal_I(table, Hull.zero(table)).dim == G.dim
    assert ideal_I(table, Hull.full(table)).dim == 0
    assert verify_synthesis(table, everything).passed
    assert verify_synthesis(table, nothing).passed


@pytest.mark.parametrize('name', NAMES)
def test_synthesis_round_trip(examples, tables, name):
    G, table = examples[name], tables[name]
    for seed in range(100):
        rng = np.random.default_rng(seed)
        # generators drawn from some I(E) so the ideal is usually proper
        J = ideal_I(table, Hull.random(table, rng))
        if J.dim == 0:
            continue
        weights = rng.standard_normal((J.dim, 2)) + 1j * rng.standard_normal((J.dim, 2))
        gens = [Functional(G, J.space.basis @ w) for w in weights[:, :int(rng.integers(1, 3))].T]
        I = left_ideal_from_generators(G, table, gens)
        assert J.space.contains(I.space)
        assert I.is_left_ideal()
        report = verify_synthesis(table, I)
        assert report.passed, (seed, report.to_dict())


@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_principal_ideals_in_c_s3(examples, tables, seed):
    G, table = examples['c_s3'], tables['c_s3']
    rng = np.random.default_rng(seed)
    block = table.blocks[2]
    # f with a rank-one Fourier block on the two-dimensional representation
    matrices = [rng.standard_normal((b.n, b.n)) * rng.integers(0, 2) for b in table.blocks]
    matrices[2] = np.outer(rng.standard_normal(2), rng.standard_normal(2))
    f = inverse_fourier(table, matrices)
    assert principal_ideal_check(G, table, f)
    assert verify_synthesis(table, left_ideal_from_generators(G, table, [f])).passed
    assert hull_of(table, left_ideal_from_generators(G, table, [f])).parts[2].dim == 1
    assert block.n == 2


@pytest.mark.parametrize('name', NAMES)
def test_annihilator_dualities_on_random_hulls(examples, tables, name):
    G, table = examples[name], tables[name]
    for seed in range(50):
        E = Hull.random(table, np.random.default_rng(seed))
        report = annihilator_dualities(G, table, E)
        assert report.passed, (seed, report.to_dict())
        assert report.annihilator.dim == sum(b.n * p.dim for b, p in zip(table.blocks, E.parts))
        assert ideal_I(table, E).dim == sum(b.n * (b.n - p.dim) for b, p in zip(table.blocks, E.parts))
        assert galois_check(table, E)


@pytest.mark.parametrize('full', [True, False])
def test_extreme_dualities(kp, tables, full):
    table = tables['kac_paljutkin']
    E = Hull.full(table) if full else Hull.zero(table)
    report = annihilator_dualities(kp, table, E)
    assert report.passed
    assert report.annihilator.dim == (kp.dim if full else 0)


def test_dualities_on_alternating_subgroup(group_s3, tables):
    table = tables['group_s3']
    # blocks of C[S3]'s dual are evaluations at group elements
    positions = [int(np.argmax(np.abs(b.extract[0, 0]))) for b in table.blocks]
    parts = [Subspace.full(1) if s in (0, 3, 4) else Subspace.zero(1) for s in positions]
    E = Hull(table, parts)
    report = annihilator_dualities(group_s3, table, E)
    assert report.passed
    target = Subspace.span(np.eye(6)[:, [0, 3, 4]])
    assert report.annihilator.equals(target)
    assert report.coefficient_span.equals(target)
    assert report.convolution_kernel.equals(target)


def test_two_sided_hulls(examples, tables):
    G, table = examples['c_s3'], tables['c_s3']
    everything = IdealSubspace(G, Subspace.full(G.dim))
    assert two_sided_hull_check(table, everything)

    # {f : f(1) = 0} is the kernel of the trivial block
    augmentation = IdealSubspace(G, kernel(G.unit.reshape(1, -1)))
    assert two_sided_hull_check(table, augmentation)
    assert hull_of(table, augmentation).dims == [1, 0, 0]


def test_left_only_ideal_is_not_two_sided(examples, tables):
    G, table = examples['c_s3'], tables['c_s3']
    # kill one column of the two-dimensional block
    E = Hull(table, [Subspace.zero(1), Subspace.zero(1), Subspace.span(np.array([1.0, 0.0]))])
    I = ideal_I(table, E)
    assert I.is_left_ideal()
    assert not I.is_two_sided()
    with pytest.raises(NotTwoSidedError):
        two_sided_hull_check(table, I)


def test_hull_parts_must_fit_blocks(tables):
    table = tables['c_s3']
    with pytest.raises(AmbientMismatchError):
        Hull(table, [Subspace.full(1), Subspace.full(1), Subspace.full(3)])
    with pytest.raises(AmbientMismatchError):
        Hull(table, [Subspace.full(1)])


def test_hull_file_round_trip(tables):
    table = tables['kac_paljutkin']
    E = Hull.random(table, np.random.default_rng(3))
    again = load_hull(table, dump_hull(E))
    assert again.equals(E)
    assert again.dimension_vector() == E.dimension_vector()


def test_hull_file_must_match_table(tables):
    doc = dump_hull(Hull.full(tables['c_s3']))
    with pytest.raises(DefinitionParseError):
        load_hull(tables['kac_paljutkin'], doc)


def test_hull_frame(tables):
    frame = hull_frame(Hull.full(tables['c_s3']))
    assert frame['dim_E'].tolist() == [1, 1, 2]
    assert frame['block'].tolist() == ['pi0', 'pi1', 'pi2']


@pytest.mark.parametrize('name', NAMES)
def test_hull_dimensions_do_not_depend_on_the_seed(examples, name):
    G = examples[name]
    first, second = wedderburn(G, seed=42), wedderburn(G, seed=1234)
    rng = np.random.default_rng(11)
    ideals = [ideal_I(first, Hull.random(first, rng)) for _ in range(5)]
    ideals.append(left_ideal_from_generators(G, first, [random_functional(G, rng)]))
    for I in ideals:
        assert hull_of(first, I).dimension_vector() == hull_of(second, I).dimension_vector()
