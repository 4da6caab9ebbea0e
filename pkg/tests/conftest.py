import json
from pathlib import Path

import pytest

from e8ks.census import enumerate_family_proofs
from e8ks.families import family_for_selector
from e8ks.rays import build_rays
from e8ks.structure import build_graph, enumerate_bases
from e8ks.subsystems import build_kp_sets
from e8ks.symmetry import generate_labeled_table, load_generators, load_seed_block

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def system():
    return build_rays()


@pytest.fixture(scope="session")
def graph(system):
    return build_graph(system)


@pytest.fixture(scope="session")
def table(graph):
    return enumerate_bases(graph)


@pytest.fixture(scope="session")
def generators(graph):
    return load_generators(graph)


@pytest.fixture(scope="session")
def labeled(generators):
    return generate_labeled_table(generators)


@pytest.fixture(scope="session")
def block(graph):
    return load_seed_block(graph)


@pytest.fixture(scope="session")
def kp_scan(table, graph, block):
    return build_kp_sets(table, graph, block)


@pytest.fixture(scope="session")
def census_type1(table, graph):
    return enumerate_family_proofs(family_for_selector(table, "type1"), graph)


@pytest.fixture(scope="session")
def census_type2(table, graph):
    return enumerate_family_proofs(family_for_selector(table, "type2"), graph)


def read_proof(name: str) -> list[tuple[int, ...]]:
    """Whitespace fixture table, one basis per non-comment line."""
    rows = []
    for line in (DATA / name).read_text().splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            rows.append(tuple(int(tok) for tok in body.split()))
    return rows


def read_json(name: str) -> dict:
    return json.loads((DATA / name).read_text())
