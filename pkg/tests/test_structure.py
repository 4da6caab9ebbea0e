import pytest

from e8ks.rays import N_RAYS
from e8ks.structure import (
    build_graph,
    check_saturation,
    load_table,
    pair_occurrence_counts,
    parse_symbol,
    save_table,
    system_symbol,
    table_checksum,
)


def test_degree_is_63_everywhere(graph):
    degrees = graph.adjacency.sum(axis=1)
    assert set(degrees.tolist()) == {63}


def test_threshold_placement_is_irrelevant(system, graph):
    # anywhere inside the (0, 0.25) gap cuts the same edges
    assert (build_graph(system, 0.2).adjacency == graph.adjacency).all()
    assert (build_graph(system, 1e-12).adjacency == graph.adjacency).all()


def test_threshold_validation(system):
    with pytest.raises(ValueError):
        build_graph(system, 0.0)
    with pytest.raises(ValueError):
        build_graph(system, 0.3)


def test_basis_count(table):
    assert len(table) == 2025


def test_multiplicity_135(table):
    assert {table.multiplicity(i) for i in range(1, N_RAYS + 1)} == {135}


def test_every_basis_is_orthogonal(table, graph):
    for basis in table:
        for x in range(8):
            for y in range(x + 1, 8):
                assert graph.are_orthogonal(basis[x], basis[y])


def test_pair_cooccurrence_15(table, graph):
    counts = pair_occurrence_counts(table)
    assert set(counts[graph.adjacency].tolist()) == {15}
    assert set(counts[~graph.adjacency].tolist()) <= {0}


def test_saturation(table, graph):
    assert check_saturation(table, graph)


def test_system_symbol_of_full_table(table):
    assert system_symbol(table).text == "120_135-2025_8"


def test_symbol_parse_roundtrip():
    for text in ("120_135-2025_8", "15_4 30_2-15_8", "2_4 32_2-9_8"):
        sym = parse_symbol(text)
        assert sym.text == text
        assert sym.balanced


def test_symbol_canonical_order():
    assert parse_symbol("30_2 15_4-15_8") == parse_symbol("15_4 30_2-15_8")


def test_symbol_rejects_garbage():
    with pytest.raises(ValueError):
        parse_symbol("15_4 30_2")
    with pytest.raises(ValueError):
        parse_symbol("x_4-15_8")


def test_table_cache_roundtrip(tmp_path, system, table):
    checksum = table_checksum(system, 1e-9)
    path = tmp_path / "bases.txt"
    save_table(table, path, checksum)
    again = load_table(path, checksum)
    assert again is not None and again.bases == table.bases
    # stale checksum reads as a miss, not an error
    assert load_table(path, "0" * 64) is None
    assert load_table(tmp_path / "absent.txt", checksum) is None


def test_table_cache_detects_truncation(tmp_path, system, table):
    checksum = table_checksum(system, 1e-9)
    path = tmp_path / "bases.txt"
    save_table(table, path, checksum)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-5]) + "\n")
    with pytest.raises(ValueError):
        load_table(path, checksum)


def test_checksum_depends_on_threshold(system):
    assert table_checksum(system, 1e-9) != table_checksum(system, 1e-8)
