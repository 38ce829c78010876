import numpy as np
import pytest

from src.data.definitions import format_definition, parse_definition
from src.data.formats import format_covectors, format_hull, parse_action, parse_covectors, parse_hull
from src.utils.errors import DefinitionParseError

Z2_DOC = """\
# C[Z2]
name C[Z2]
dim 2
basis lg0 lg1
meta source hand
MULT
0 0 0 1.0 0.0
0 1 1 1.0 0.0
1 0 1 1.0 0.0
1 1 0 1.0 0.0
UNIT
0 1.0 0.0
STAR
0 0 1.0 0.0
1 1 1.0 0.0
COPRODUCT
0 0 0 1.0 0.0
1 1 1 1.0 0.0
COUNIT
0 1.0 0.0
1 1.0 0.0
ANTIPODE
0 0 1.0 0.0
1 1 1.0 0.0
HAAR
0 1.0 0.0
END
"""


def test_parse_reference_document():
    parsed = parse_definition(Z2_DOC)
    assert parsed['name'] == 'C[Z2]'
    assert parsed['basis'] == ['lg0', 'lg1']
    assert parsed['meta'] == {'source': 'hand'}
    assert parsed['tensors']['MULT'][1, 1, 0] == 1.0
    assert parsed['tensors']['HAAR'].tolist() == [1.0, 0.0]


def test_format_then_parse_preserves_tensors():
    parsed = parse_definition(Z2_DOC)
    again = parse_definition(format_definition(parsed['name'], parsed['basis'], parsed['tensors'], parsed['meta']))
    for section, tensor in parsed['tensors'].items():
        assert np.array_equal(again['tensors'][section], tensor)


def test_haar_section_is_optional():
    doc = Z2_DOC.replace('HAAR\n0 1.0 0.0\n', '')
    assert parse_definition(doc)['tensors']['HAAR'] is None


@pytest.mark.parametrize('old, new, fragment', [
    ('MULT\n', 'MULTIPLY\n', 'unknown section'),
    ('dim 2', 'dim two', 'dim must be an integer'),
    ('dim 2', 'dim 0', 'dim must be positive'),
    ('basis lg0 lg1', 'basis lg0', 'basis has 1 labels'),
    ('0 1 1 1.0 0.0\n', '0 1 1 1.0\n', 'need 3 indices'),
    ('0 1 1 1.0 0.0\n', '0 1 2 1.0 0.0\n', 'outside 0..1'),
    ('0 1 1 1.0 0.0\n', '0 1 1 abc 0.0\n', 'not a number'),
    ('0 1 1 1.0 0.0\n', '0 1 1 inf 0.0\n', 'not finite'),
    ('0 1 1 1.0 0.0\n', '0 0 0 2.0 0.0\n', 'given twice'),
    ('name C[Z2]', 'title C[Z2]', 'unknown header key'),
    ('END\n', 'END\nMULT\n', 'content after END'),
    ('COUNIT\n0 1.0 0.0\n1 1.0 0.0\n', '', 'missing sections: COUNIT'),
])
def test_grammar_errors(old, new, fragment):
    with pytest.raises(DefinitionParseError) as err:
        parse_definition(Z2_DOC.replace(old, new, 1))
    assert fragment in str(err.value)


def test_repeated_section_rejected():
    doc = Z2_DOC.replace('HAAR\n', 'UNIT\n0 1.0 0.0\nHAAR\n')
    with pytest.raises(DefinitionParseError, match='appears twice'):
        parse_definition(doc)


def test_parse_error_carries_line_number():
    with pytest.raises(DefinitionParseError) as err:
        parse_definition(Z2_DOC.replace('MULT\n', 'MULTIPLY\n'))
    assert err.value.line == 6
    assert err.value.exit_code == 1


# -- covectors, hulls, actions ----------------------------------------------


def test_covectors_round_trip():
    covecs = [np.array([1.0, 0.0, 0.5j]), np.zeros(3)]
    parsed = parse_covectors(format_covectors(covecs))
    assert len(parsed) == 2
    assert np.array_equal(parsed[0], covecs[0])
    assert not parsed[1].any()


@pytest.mark.parametrize('doc', [
    '0 1.0 0.0\n',
    'COVECTOR x\n',
    'COVECTOR 2\n5 1.0 0.0\n',
    'COVECTOR 2\n0 1.0\n',
    '',
])
def test_bad_covectors(doc):
    with pytest.raises(DefinitionParseError):
        parse_covectors(doc)


def test_hull_with_empty_part_round_trips():
    parts = [('pi0', 1, np.zeros((1, 0), dtype=complex)), ('pi1', 2, np.array([[1.0], [1j]]) / np.sqrt(2))]
    parsed = parse_hull(format_hull(parts))
    assert [p[:2] for p in parsed] == [('pi0', 1), ('pi1', 2)]
    assert parsed[0][2].shape == (1, 0)
    assert np.allclose(parsed[1][2], parts[1][2])


def test_hull_block_count_checked():
    with pytest.raises(DefinitionParseError, match='announces 2 blocks'):
        parse_hull('HULL 2\nBLOCK pi0 n 1 dim 1\n1.0 0.0\n')


def test_written_numbers_are_plain_floats():
    doc = format_covectors([np.array([1.0, 0.5, 2.25j])])
    assert doc == 'COVECTOR 3\n0 1.0 0.0\n1 0.5 0.0\n2 0.0 2.25\n'
    hull = format_hull([('pi0', 1, np.array([[np.float64(0.5)]]).astype(complex))])
    assert hull == 'HULL 1\nBLOCK pi0 n 1 dim 1\n0.5 0.0\n'
    assert 'np.' not in doc + hull


@pytest.mark.parametrize('doc, line', [
    ('HULL two\n', 1),
    ('HULL 1\nBLOCK pi0 n x dim 1\n1.0 0.0\n', 2),
    ('HULL 1\nBLOCK pi0 n 1 dim -1\n', 2),
    ('HULL 1\nBLOCK pi0 n 1 dim 1\n1.0 zero\n', 3),
])
def test_bad_hull_numbers_report_their_line(doc, line):
    with pytest.raises(DefinitionParseError) as err:
        parse_hull(doc)
    assert err.value.line == line


def test_parse_actions():
    assert parse_action('group cyclic 2\ntrivial\n') == {'group': ('cyclic', 2), 'perms': {}}
    parsed = parse_action('group cyclic 2\nperm 1 0 2 1\n')
    assert parsed['perms'] == {1: [0, 2, 1]}


@pytest.mark.parametrize('doc', [
    'trivial\n',
    'group cyclic two\n',
    'group cyclic 2\ntrivial\nperm 1 1 0\n',
    'group cyclic 2\nperm 1 0 x\n',
    'group cyclic 2\nperm 1 0 1\nperm 1 1 0\n',
    'group cyclic 2\nrotate 1\n',
])
def test_bad_actions(doc):
    with pytest.raises(DefinitionParseError):
        parse_action(doc)
