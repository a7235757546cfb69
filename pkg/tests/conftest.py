"""Pytest configuration and path setup for the dephasing tests."""

import sys
from pathlib import Path

import pytest

# Add src/dephasing to path so tests can import the modules by name
_dephasing_path = Path(__file__).parent.parent / "src" / "dephasing"
if str(_dephasing_path) not in sys.path:
    sys.path.insert(0, str(_dephasing_path))


@pytest.fixture
def ohmic():
    from bath import BathSpec

    return BathSpec(1, 0.25, 1e-3)


@pytest.fixture
def super_ohmic():
    from bath import BathSpec

    return BathSpec(3, 0.25, 1e-3)
