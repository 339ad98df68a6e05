"""Shared fixtures."""
import numpy as np
import pytest

from src.quantum.cob import builtin_basis
from src.quantum.states import noisy_family


@pytest.fixture
def qubit_basis():
    return builtin_basis("construction1-d2")


@pytest.fixture
def qubit_bases3(qubit_basis):
    return [qubit_basis] * 3


@pytest.fixture
def qubit_bases4(qubit_basis):
    return [qubit_basis] * 4


@pytest.fixture
def example2_bases():
    qutrit = builtin_basis("construction2-d3")
    return [qutrit, qutrit, builtin_basis("construction2-d2")]


@pytest.fixture
def ghz3_family():
    return noisy_family("ghz3")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
