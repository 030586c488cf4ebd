"""Shared fixtures: src/ on sys.path and the two standard contexts."""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from qcore.context import QContext, ScalarMode  # noqa: E402


@pytest.fixture
def exact_ctx() -> QContext:
    """q = 1/2 in exact rational arithmetic."""
    return QContext(Fraction(1, 2), ScalarMode.EXACT)


@pytest.fixture
def float_ctx() -> QContext:
    """q = 0.5 in float arithmetic."""
    return QContext(0.5, ScalarMode.FLOAT)
