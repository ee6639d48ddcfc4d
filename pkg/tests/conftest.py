import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wsa.algebra import build_algebra
from wsa.presentation import WeightedPresentation, generic_parameters, opposite
from wsa.quiver import catalog
from wsa.verify import verify_all

CATALOG = ("T", "S", "LOOP-PAIR", "GLUED(1)", "GLUED(2)", "GLUED(3)")
SMALL = ("T", "S", "LOOP-PAIR", "GLUED(1)")


@functools.lru_cache(maxsize=None)
def presentation(name: str, seed: int = 0) -> WeightedPresentation:
    tq, m = catalog(name)
    return WeightedPresentation(tq, m, generic_parameters(tq, m, seed=seed))


@functools.lru_cache(maxsize=None)
def algebra(name: str, seed: int = 0):
    return build_algebra(presentation(name, seed))


@functools.lru_cache(maxsize=None)
def opposite_algebra(name: str, seed: int = 0):
    return build_algebra(opposite(presentation(name, seed)), check_stable=False)


@functools.lru_cache(maxsize=None)
def report(name: str, seed: int = 0):
    return verify_all(presentation(name, seed), name, algebra=algebra(name, seed))


def triangle(c_abar, c_alpha, c_eps):
    tq, m = catalog("T")
    return WeightedPresentation(tq, m, {"abar": c_abar, "alpha": c_alpha, "eps": c_eps})


@pytest.fixture(scope="session")
def T():
    return presentation("T")


@pytest.fixture(scope="session")
def AT():
    return algebra("T")


@pytest.fixture(scope="session")
def S():
    return presentation("S")


@pytest.fixture(scope="session")
def AS():
    return algebra("S")
