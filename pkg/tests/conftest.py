"""Shared pipelines for the five standard test schemes.

Each bundle carries the validated scheme, its spectral data, the context
at base vertex 0, the measured module decomposition, and the solved
multiplicity table.  Building them once per session keeps the suite fast.
"""

from dataclasses import dataclass

import pytest

import terwlab as tw


@dataclass(frozen=True)
class Bundle:
    name: str
    scheme: object
    spectral: object
    ctx: object
    modules: tuple
    table: object


def _build(name, scheme) -> Bundle:
    spectral = tw.spectral_data(scheme)
    ctx = tw.build_context(scheme, spectral, 0)
    modules = tuple(tw.measure_all(ctx, tw.decompose(ctx, seed=0)))
    table = tw.solve_multiplicities(spectral)
    return Bundle(name=name, scheme=scheme, spectral=spectral, ctx=ctx,
                  modules=modules, table=table)


@pytest.fixture(scope="session")
def c7():
    return _build("C7", tw.odd_cycle(3))


@pytest.fixture(scope="session")
def c9():
    return _build("C9", tw.odd_cycle(4))


@pytest.fixture(scope="session")
def o4():
    return _build("O4", tw.odd_graph(3))


@pytest.fixture(scope="session")
def fc7():
    return _build("FC7", tw.folded_cube(3))


@pytest.fixture(scope="session")
def fc9():
    return _build("FC9", tw.folded_cube(4))


@pytest.fixture(scope="session")
def all_bundles(c7, c9, o4, fc7, fc9):
    return (c7, c9, o4, fc7, fc9)
