import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from ventgen.catalog import CatalogStats, build_catalog
from ventgen.config import BUNDLED_CLIMATES, data_path
from ventgen.occupancy import annual_fractions, load_profiles
from ventgen.weather import read_epw
from ventgen.wfc import WFCSolver, derive_seed, learn_rules, load_tile_document, sample_weights

GRID = 40
N_SOLUTIONS = 300


@pytest.fixture(scope="session")
def tile_doc():
    return load_tile_document(str(data_path("tiles.json")))


@pytest.fixture(scope="session")
def tileset(tile_doc):
    return tile_doc[0]


@pytest.fixture(scope="session")
def bundled_rules(tile_doc):
    tileset, example = tile_doc
    return learn_rules(example, len(tileset))


def generate_solutions(tileset, rules, count=N_SOLUTIONS, seed=0):
    out = []
    for i in range(count):
        weighted = sample_weights(tileset, derive_seed(seed, 0, i))
        out.append(WFCSolver(weighted, rules).solve(GRID, GRID, derive_seed(seed, 1, i)))
    return out


@pytest.fixture(scope="session")
def solutions(tileset, bundled_rules):
    return generate_solutions(tileset, bundled_rules)


@pytest.fixture(scope="session")
def catalog_with_stats(solutions, tileset):
    stats = CatalogStats()
    entries = build_catalog(solutions, tileset, stats=stats)
    return entries, stats


@pytest.fixture(scope="session")
def catalog(catalog_with_stats):
    return catalog_with_stats[0]


@pytest.fixture(scope="session")
def profiles():
    with open(data_path("occupancy.csv"), newline="") as fh:
        return load_profiles(fh)


@pytest.fixture(scope="session")
def fractions(profiles):
    return annual_fractions(profiles, "post_covid", "middle")


@pytest.fixture(scope="session")
def weather():
    return {label: read_epw(data_path("weather", f"{label}.epw")) for label in BUNDLED_CLIMATES}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
