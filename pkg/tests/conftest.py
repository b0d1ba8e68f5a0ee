import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from borelss.algebra import FiberPresentation
from borelss.driver import search_cases

_CACHE = {}


@pytest.fixture
def scenarios():
    """Session-wide scenario cache; searches are deterministic and reusable."""

    def run(field: str, m: int, n: int = 4):
        key = (field, m, n)
        if key not in _CACHE:
            _CACHE[key] = search_cases(FiberPresentation(field, m, n))
        return _CACHE[key]

    return run
