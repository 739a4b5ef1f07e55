"""Shared fixtures: species load once, radial solutions cache in-process."""

import pytest

from rydtherm import load_species
from rydtherm.radial import default_solver


@pytest.fixture(scope="session")
def sr():
    return load_species("sr")


@pytest.fixture(scope="session")
def yb():
    return load_species("yb")


@pytest.fixture(scope="session")
def hydrogen():
    return load_species("hydrogen")


@pytest.fixture(scope="session")
def solver():
    return default_solver()
