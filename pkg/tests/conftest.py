"""Pytest configuration for pg_qldpc tests."""

from functools import lru_cache

import pytest

from pg_qldpc.geometry import HyperovalPartition, PlaneModel, build_plane, regular_hyperoval


def pytest_addoption(parser):
    """Add command-line options to pytest."""
    parser.addoption("--max-s", action="store", default="2", help="Largest field exponent for exhaustive sweeps")


def pytest_generate_tests(metafunc):
    """Sweep ``field_s`` over 1..--max-s."""
    if "field_s" in metafunc.fixturenames:
        max_s = int(metafunc.config.getoption("--max-s"))
        metafunc.parametrize("field_s", range(1, max_s + 1))


@lru_cache(maxsize=None)
def geometry(s: int) -> tuple[PlaneModel, HyperovalPartition]:
    plane = build_plane(s)
    return plane, regular_hyperoval(plane)


@pytest.fixture
def geometry_of():
    return geometry


@pytest.fixture(scope="session")
def max_s(request):
    return int(request.config.getoption("--max-s"))
