import os
import sys

import numpy as np
import pytest

ROOT = os.path.join(os.path.dirname(__file__), '..')
sys.path.insert(0, ROOT)

from config.catalog import EXAMPLES
from src.algebra.dual import Functional, wedderburn
from src.algebra.hopf import Element
from src.data.catalog import load_example

DEFINITIONS = os.path.join(ROOT, 'data', 'definitions')


def definition_path(name: str) -> str:
    return os.path.join(DEFINITIONS, name)


@pytest.fixture(scope='session')
def examples():
    return {name: load_example(name, directory=DEFINITIONS) for name in EXAMPLES}


@pytest.fixture(scope='session')
def tables(examples):
    return {name: wedderburn(G) for name, G in examples.items()}


@pytest.fixture(scope='session')
def group_s3(examples):
    return examples['group_s3']


@pytest.fixture(scope='session')
def group_z2(examples):
    return examples['group_z2']


@pytest.fixture(scope='session')
def kp(examples):
    return examples['kac_paljutkin']


def random_functional(G, rng: np.random.Generator) -> Functional:
    return Functional(G, rng.standard_normal(G.dim) + 1j * rng.standard_normal(G.dim))


def random_element(G, rng: np.random.Generator) -> Element:
    return Element(G, rng.standard_normal(G.dim) + 1j * rng.standard_normal(G.dim))


def indicator(G, indices) -> Functional:
    covec = np.zeros(G.dim, dtype=complex)
    covec[list(indices)] = 1.0
    return Functional(G, covec)
