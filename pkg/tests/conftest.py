import pytest

from dstau.algebra import build_algebra
from dstau.stringeq import levels_for_cap, solve_reduced_string_equation
from dstau.tau import log_tau

# expansions shared across test modules; caps are the largest any test needs
_EXPANSION_CAPS = {
    "A1": 30,
    "A2": 40,
    "A3": 40,
    "B3": 56,
    "C2": 40,
    "D4": 56,
    "G2": 42,
}

_algebras = {}
_gammas = {}
_expansions = {}


def algebra(name):
    if name not in _algebras:
        _algebras[name] = build_algebra(name)
    return _algebras[name]


def gamma_solution(name, levels):
    alg = algebra(name)
    have = _gammas.get(name)
    if have is None or have.levels < levels:
        _gammas[name] = solve_reduced_string_equation(alg, levels)
    return _gammas[name]


def expansion(name, cap=None):
    """Session-cached tau expansion at the standard (or given) cap."""
    cap = cap if cap is not None else _EXPANSION_CAPS[name]
    key = (name, cap)
    if key not in _expansions:
        alg = algebra(name)
        gsol = gamma_solution(name, levels_for_cap(alg, cap))
        _expansions[key] = log_tau(alg, gsol, cap)
    return _expansions[key]


@pytest.fixture
def alg_a1():
    return algebra("A1")


@pytest.fixture
def alg_a2():
    return algebra("A2")
