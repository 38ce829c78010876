import numpy as np
import pytest

from src.utils.errors import NotAGroupError
from src.utils.groups import (
    FiniteGroup,
    cyclic_group,
    direct_product,
    inversion_automorphism,
    named_group,
    symmetric_group,
    table_from_products,
    trivial_group,
)

S3_TABLE = [
    [0, 1, 2, 3, 4, 5],
    [1, 0, 4, 5, 2, 3],
    [2, 3, 0, 1, 5, 4],
    [3, 2, 5, 4, 0, 1],
    [4, 5, 1, 0, 3, 2],
    [5, 4, 3, 2, 1, 0],
]


def test_symmetric_group_table():
    g = symmetric_group(3)
    assert g.table.tolist() == S3_TABLE
    assert [g.inv(a) for a in range(6)] == [0, 1, 2, 4, 3, 5]
    assert not g.is_abelian()


def test_s3_subgroup_lattice():
    subgroups = symmetric_group(3).subgroups()
    assert len(subgroups) == 6
    assert frozenset({0, 3, 4}) in subgroups
    assert [len(h) for h in subgroups] == [1, 2, 2, 2, 3, 6]


@pytest.mark.parametrize('n, count', [(1, 1), (2, 2), (4, 3), (6, 4)])
def test_cyclic_subgroup_counts(n, count):
    assert len(cyclic_group(n).subgroups()) == count


def test_normality():
    g = symmetric_group(3)
    assert g.is_normal(frozenset({0, 3, 4}))
    assert not g.is_normal(frozenset({0, 2}))


def test_order_sequence():
    assert symmetric_group(3).order_sequence() == [1, 2, 2, 2, 3, 3]
    assert cyclic_group(4).order_sequence() == [1, 2, 4, 4]


def test_direct_product_indexing():
    g = direct_product(cyclic_group(2), cyclic_group(3))
    assert g.order == 6
    assert g.is_abelian()
    # (1, 1) * (1, 2) = (0, 0)
    assert g.mul(1 * 3 + 1, 1 * 3 + 2) == 0


def test_inversion_automorphism():
    assert cyclic_group(3).is_automorphism(inversion_automorphism(cyclic_group(3)))
    assert not symmetric_group(3).is_automorphism(inversion_automorphism(symmetric_group(3)))


def test_trivial_group():
    g = trivial_group()
    assert g.order == 1 and g.identity == 0


@pytest.mark.parametrize('table', [
    [[0, 1], [1, 1]],            # 1 has no inverse
    [[0, 0], [0, 1]],            # 0 has no inverse
    [[0, 1, 2], [1, 0, 0], [2, 0, 1]],
    [[0, 2], [1, 0]],            # entry out of range
])
def test_invalid_tables_rejected(table):
    with pytest.raises(NotAGroupError):
        FiniteGroup(np.array(table))


def test_associativity_failure_names_a_triple():
    # Latin square with identity 0 that is not associative
    table = np.array([
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ])
    with pytest.raises(NotAGroupError) as err:
        FiniteGroup(table)
    assert err.value.triple is not None


def test_named_group_unknown_family():
    with pytest.raises(NotAGroupError):
        named_group('dihedral', 4)


def test_table_from_products_roots_of_unity():
    roots = [np.array([np.exp(2j * np.pi * k / 3)]) for k in range(3)]
    g = table_from_products(roots, lambda a, b: a * b, 1e-9, name='mu3')
    assert g.order == 3
    assert g.identity == 0
    assert g.mul(1, 2) == 0


def test_table_from_products_not_closed():
    with pytest.raises(NotAGroupError):
        table_from_products([np.array([1.0]), np.array([2.0])], lambda a, b: a * b, 1e-9)
