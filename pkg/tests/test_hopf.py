import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from config.catalog import EXAMPLES
from src.algebra.hopf import (
    Element,
    FiniteQuantumGroup,
    derive_haar,
    from_finite_group,
    from_group_algebra,
    load_definition,
    dump_definition,
    replace_haar,
    require_axioms,
    structurally_equal,
    tensor_product,
    verify_axioms,
)
from src.utils.errors import AxiomFailureError, MalformedDefinitionError, OwnerMismatchError
from src.utils.groups import cyclic_group, symmetric_group, trivial_group

from conftest import random_element


@pytest.mark.parametrize('name', sorted(EXAMPLES))
def test_examples_pass_axioms(examples, name):
    report = verify_axioms(examples[name])
    assert report.passed, report.failures
    assert report.max_residual <= 1e-8


@pytest.mark.parametrize('left, right', [('c_z2', 'group_z2'), ('group_z2', 'kac_paljutkin')])
def test_tensor_products_pass_axioms(examples, left, right):
    G = tensor_product(examples[left], examples[right])
    assert G.dim == examples[left].dim * examples[right].dim
    assert verify_axioms(G).passed


def test_antipode_corruption_is_caught(kp):
    broken = dataclasses.replace(kp, antipode=np.eye(kp.dim))
    report = verify_axioms(broken)
    assert not report.passed
    assert report.check('antipode_left').residual > 1e-8
    assert 'antipode_right' in report.failures
    with pytest.raises(AxiomFailureError):
        require_axioms(broken)


def test_haar_corruption_is_caught(group_s3):
    broken = replace_haar(group_s3, np.full(6, 1 / 6))
    assert not verify_axioms(broken).check('haar_left_invariant').passed


def test_function_algebra_of_z2():
    G = from_finite_group(cyclic_group(2))
    assert G.name == 'C(Z2)'
    assert G.basis_labels == ['dg0', 'dg1']
    assert np.allclose(G.haar, [0.5, 0.5])
    assert G.is_commutative() and G.is_cocommutative()


def test_trivial_group_haar_is_counit():
    G = from_finite_group(trivial_group())
    assert G.dim == 1
    assert np.allclose(G.haar, G.counit)
    assert verify_axioms(G).passed


def test_group_algebra_of_s3():
    G = from_group_algebra(symmetric_group(3))
    assert verify_axioms(G).passed
    assert G.is_cocommutative() and not G.is_commutative()
    assert np.allclose(G.haar, [1, 0, 0, 0, 0, 0])


def test_kac_paljutkin_is_genuinely_quantum(kp):
    assert kp.dim == 8
    assert not kp.is_commutative()
    assert not kp.is_cocommutative()


@pytest.mark.parametrize('name', sorted(EXAMPLES))
def test_derived_haar_matches_given(examples, name):
    G = examples[name]
    assert np.allclose(derive_haar(G), G.haar, atol=1e-10)


def test_malformed_tensor_shape(group_z2):
    with pytest.raises(MalformedDefinitionError) as err:
        dataclasses.replace(group_z2, counit=np.ones(3))
    assert err.value.tensor == 'counit'


def test_malformed_tensor_nan(group_z2):
    with pytest.raises(MalformedDefinitionError):
        dataclasses.replace(group_z2, haar=np.array([np.nan, 0.0]))


def test_elements_do_not_mix(group_z2, kp):
    with pytest.raises(OwnerMismatchError):
        group_z2.one() + kp.one()


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_star_is_antimultiplicative(kp, seed):
    rng = np.random.default_rng(seed)
    x, y = random_element(kp, rng), random_element(kp, rng)
    assert np.allclose((x * y).star().coeffs, (y.star() * x.star()).coeffs)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_counit_is_a_character(kp, seed):
    rng = np.random.default_rng(seed)
    x, y = random_element(kp, rng), random_element(kp, rng)
    assert (x * y).counit() == pytest.approx(x.counit() * y.counit())


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_haar_is_positive(kp, seed):
    rng = np.random.default_rng(seed)
    x = random_element(kp, rng)
    value = (x.star() * x).haar()
    assert value.real > 0
    assert abs(value.imag) < 1e-10


def test_one_is_unit(kp):
    x = Element(kp, np.arange(8, dtype=complex))
    assert np.allclose((kp.one() * x).coeffs, x.coeffs)
    assert np.allclose((x * kp.one()).coeffs, x.coeffs)


def test_definition_round_trip_is_exact(examples):
    for G in examples.values():
        assert structurally_equal(load_definition(dump_definition(G)), G)


def test_load_without_haar_derives_it(group_s3):
    doc = dump_definition(group_s3)
    head, _ = doc.split('HAAR')
    G = load_definition(head + 'END\n')
    assert G.haar_derived
    assert np.allclose(G.haar, group_s3.haar)
    assert 'HAAR' not in dump_definition(G)


def test_load_gates_on_axioms(kp):
    broken = dataclasses.replace(kp, antipode=np.eye(kp.dim))
    doc = dump_definition(broken)
    with pytest.raises(AxiomFailureError):
        load_definition(doc)
    assert not verify_axioms(load_definition(doc, check=False)).passed


def test_report_frame_and_dict(group_z2):
    report = verify_axioms(group_z2)
    frame = report.to_frame()
    assert list(frame.columns) == ['invariant', 'residual', 'scale', 'passed']
    assert frame['passed'].all()
    assert report.to_dict()['passed'] is True


def test_structurally_equal_detects_difference(examples):
    assert not structurally_equal(examples['c_z2'], examples['group_z2'])
    assert not structurally_equal(examples['c_z2'], examples['c_z4'])
    assert isinstance(examples['c_z2'], FiniteQuantumGroup)
