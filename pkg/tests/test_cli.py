import importlib.util
import json
import os

import pytest

from src.algebra.hopf import load_definition_file, verify_axioms

from conftest import ROOT, definition_path

module_spec = importlib.util.spec_from_file_location('qg', os.path.join(ROOT, 'scripts', 'qg.py'))
qg = importlib.util.module_from_spec(module_spec)
module_spec.loader.exec_module(qg)


def run(capsys, *argv):
    code = qg.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify(capsys):
    code, out, _ = run(capsys, 'verify', definition_path('kac_paljutkin.qg'))
    assert code == 0
    assert 'verdict: OK' in out


def test_irr(capsys):
    code, out, _ = run(capsys, 'irr', definition_path('c_s3.qg'))
    assert code == 0
    assert 'blocks: 1,1,2' in out
    assert 'matrix units: OK' in out


def test_hull(capsys, tmp_path):
    target = tmp_path / 'z2.hull'
    code, out, _ = run(
        capsys, 'hull', definition_path('group_z2.qg'),
        '--gens', definition_path('group_z2_gen.cov'), '--hull-out', str(target),
    )
    assert code == 0
    assert 'E: [0,1]' in out
    assert 'dim I=1; dim I(E)=1' in out
    assert 'synthesis: OK' in out
    assert target.read_text().startswith('HULL 2')


@pytest.mark.parametrize('gens, hull', [('group_z2_counit.cov', 'E: [0,0]'), ('group_z2_zero.cov', 'E: [1,1]')])
def test_trivial_hulls(capsys, gens, hull):
    code, out, _ = run(capsys, 'hull', definition_path('group_z2.qg'), '--gens', definition_path(gens))
    assert code == 0
    assert hull in out
    assert 'synthesis: OK' in out


def test_quasi_with_haar_state(capsys):
    code, out, _ = run(capsys, 'quasi', definition_path('group_z2.qg'), '--omega', definition_path('group_z2_haar.cov'))
    assert code == 0
    assert 'omega0: N = C1' in out


def test_quasi_with_given_state(capsys):
    code, out, _ = run(capsys, 'quasi', definition_path('group_s3.qg'), '--omega', definition_path('group_s3_a3.cov'))
    assert code == 0
    assert 'omega0: N dim 3' in out
    assert 'right-unit OK' in out
    assert 'cosets: 3xEqualsN, 3xZero' in out


def test_quasi_search(capsys):
    code, out, _ = run(capsys, '--format', 'structured', 'quasi', definition_path('c_z4.qg'), '--search')
    assert code == 0
    payload = json.loads(out)
    assert payload['exhaustive'] is True
    assert len(payload['states']) == 3


def test_coset(capsys):
    code, out, _ = run(
        capsys, '--format', 'structured', 'coset', definition_path('group_s3.qg'),
        '--omega', definition_path('group_s3_transposition.cov'),
    )
    assert code == 0
    payload = json.loads(out)
    assert payload['intrinsic_group']['order'] == 6
    (entry,) = payload['states']
    assert entry['coideal_dim'] == 2
    assert entry['functoriality']['passed'] is True
    assert all(entry['surjectivity'].values())
    assert len(entry['surjectivity']) == 4


def test_structured_output_is_reproducible(capsys):
    argv = ['--format', 'structured', 'irr', definition_path('kac_paljutkin.qg')]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)['blocks'] == [1, 1, 1, 1, 2]


def test_crossed_writes_product(capsys, tmp_path):
    target = tmp_path / 'z2xz2.qg'
    code, out, _ = run(
        capsys, 'crossed', definition_path('group_z2.qg'),
        '--action', definition_path('z2_trivial.act'), '-o', str(target),
    )
    assert code == 0
    assert 'irr: 1,1,1,1 OK' in out
    product = load_definition_file(str(target))
    assert product.dim == 4
    assert product.meta['rule'] == 'standard'
    assert verify_axioms(product).passed


def test_crossed_inversion(capsys):
    code, out, _ = run(
        capsys, '--format', 'structured', 'crossed', definition_path('group_z3.qg'),
        '--action', definition_path('z3_inversion.act'),
    )
    assert code == 0
    assert json.loads(out)['dim'] == 6


@pytest.mark.parametrize('argv, expected', [
    (['verify', 'no/such/file.qg'], 1),
    (['quasi', definition_path('group_z2.qg'), '--omega', definition_path('group_z2_zero.cov')], 2),
    (['hull', definition_path('group_z2.qg'), '--gens', definition_path('group_s3_a3.cov')], 1),
    (['crossed', definition_path('c_z2.qg'), '--action', definition_path('z3_inversion.act')], 2),
])
def test_exit_codes(capsys, argv, expected):
    code, _, err = run(capsys, *argv)
    assert code == expected
    assert err.startswith('error: ')
