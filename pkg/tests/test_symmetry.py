import numpy as np
import pytest

from e8ks.errors import RealizationMismatch
from e8ks.symmetry import (
    derive_row_shift,
    matrix_fixtures,
    parse_cycles,
    perm_from_matrix,
)

from conftest import read_proof


def test_generator_orders(generators):
    assert generators.band_shift.order == 15
    assert generators.block_rotation.order == 9
    assert generators.row_shift.order == 15


def test_generators_are_automorphisms(generators, graph):
    for perm in (generators.band_shift, generators.block_rotation, generators.row_shift):
        assert perm.is_automorphism(graph)


def test_band_shift_cycles_are_the_bands(generators):
    cycles = {tuple(sorted(c)) for c in generators.band_shift.cycles}
    bands = {tuple(range(15 * k + 1, 15 * k + 16)) for k in range(8)}
    assert cycles == bands


def test_row_shift_matches_block_columns(generators, block):
    assert derive_row_shift(block).image == generators.row_shift.image


def test_permutation_algebra(generators):
    v = generators.block_rotation
    assert v.power(9)(17) == 17
    assert v.compose(v.inverse()).order == 1
    assert v.inverse()(v(42)) == 42


def test_parse_cycles_rejects_duplicates():
    with pytest.raises(ValueError):
        parse_cycles("1 2 3\n3 4")


def test_labeled_table_covers_everything(labeled, table):
    assert len(labeled) == 2025
    assert labeled.basis_set() == set(table.bases)


def test_seed_block_is_the_l_axis(labeled, block):
    for l, basis in enumerate(block):
        assert tuple(sorted(labeled.of_label(0, 0, l))) == tuple(sorted(basis))


def test_printed_blocks_match_generated_labels(labeled):
    """The nine printed blocks are exactly the m-axis sweep of the labels."""
    rows = read_proof("fig2_blocks.txt")
    assert len(rows) == 135
    for row in rows:
        m, l, rays = row[0], row[1], row[2:]
        assert set(rays) == set(labeled.of_label(0, m, l))


def test_label_of_inverts_of_label(labeled):
    for lab in ((0, 0, 0), (7, 3, 11), (14, 8, 14)):
        assert labeled.label_of(labeled.of_label(*lab)) == lab


def test_matrix_fixtures_realize_generators(system, generators):
    maps = matrix_fixtures(system, generators)
    for name in ("row_shift", "block_rotation", "band_shift"):
        want = getattr(generators, name)
        assert maps[name].permutation.image == want.image
        m = maps[name].matrix
        assert np.abs(m @ m.T - np.eye(8)).max() <= 1e-12


def test_perm_from_matrix_rejects_non_symmetry(system):
    with pytest.raises(RealizationMismatch):
        perm_from_matrix(system, np.eye(8) * 0.5)
