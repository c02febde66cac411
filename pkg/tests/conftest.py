import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from torickit import CATALOG_DEFAULTS, SymplecticPotential, catalog


@pytest.fixture(params=CATALOG_DEFAULTS, ids=lambda e: f"{e[0]}{e[1]}")
def catalog_polytope(request):
    name, params = request.param
    return catalog(name, *params)


@pytest.fixture
def catalog_potential(catalog_polytope):
    return SymplecticPotential.guillemin(catalog_polytope)
