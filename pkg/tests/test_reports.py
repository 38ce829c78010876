import enum
import json

import numpy as np
import pandas as pd

from src.utils.reports import format_residual, render_human, render_json, to_jsonable, verdict


class Colour(enum.Enum):
    RED = 'red'


def test_to_jsonable_handles_numpy_and_complex():
    payload = {
        'array': np.arange(3),
        'flag': np.bool_(True),
        'z': 1 + 2j,
        'inf': float('inf'),
        'colour': Colour.RED,
        3: np.float64(0.5),
    }
    assert to_jsonable(payload) == {
        'array': [0, 1, 2],
        'flag': True,
        'z': [1.0, 2.0],
        'inf': 'inf',
        'colour': 'red',
        '3': 0.5,
    }


def test_render_json_sorts_keys():
    text = render_json({'b': 1, 'a': pd.DataFrame({'x': [1, 2]})})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text)['a'] == [{'x': 1}, {'x': 2}]


def test_render_human_layout():
    text = render_human('Title', [('dim', 8), 'free line', ('table', pd.DataFrame({'n': [1]}))], width=5)
    lines = text.splitlines()
    assert lines[:4] == ['Title', '=====', '  dim: 8', '  free line']
    assert lines[4] == '  table:'
    assert lines[5].startswith('    ')


def test_small_formatters():
    assert format_residual(float('inf')) == 'inf'
    assert format_residual(1.5e-12) == '1.50e-12'
    assert verdict(True) == 'OK' and verdict(False) == 'FAIL'
