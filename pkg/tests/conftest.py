"""Shared fixtures: reduced grids keep every solver test under a few seconds."""

import pytest

from src.convex_geometry import DirectionGrid, Disk, Ellipse, RegularNgon
from src.settings import LabSettings


@pytest.fixture
def settings():
    return LabSettings(M=32, L=24, bisect_tol=1e-3)


@pytest.fixture
def grid():
    return DirectionGrid(32)


@pytest.fixture
def disk():
    return Disk(1.0)


@pytest.fixture
def ellipse():
    return Ellipse(2.0, 1.0)


@pytest.fixture
def rounded_square():
    return RegularNgon(4, 1.0, 0.05)
