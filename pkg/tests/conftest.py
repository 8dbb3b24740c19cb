"""Shared fixtures: scenario data computed once per session."""

from types import SimpleNamespace

import pytest

from dislospec import coupling, dirac, scenarios


def _bundle(scenario_id: str) -> SimpleNamespace:
    sc = scenarios.builtin(scenario_id)
    dd = dirac.find_dirac_point(sc.V, sc.n)
    cc = coupling.coupling_curve(dd, sc.W)
    return SimpleNamespace(sc=sc, dd=dd, cc=cc)


@pytest.fixture(scope="session")
def n1():
    """Scaled pair, first gap: V = 0.05 cos(4 pi x), W = 0.1 cos(2 pi x)."""
    return _bundle("scaled-n1")


@pytest.fixture(scope="session")
def n3():
    """Scaled pair, third gap (exercises the negative Fermi-velocity sign)."""
    return _bundle("scaled-n3")


@pytest.fixture(scope="session")
def tuned():
    """Tuned pair (n, m) = (1, 3): winding 3 in the first gap, eps = 0.3."""
    return _bundle("tuned-1-3")
