from collections import Counter

import pytest

import e8ks.subsystems as subsystems
from e8ks.coloring import Assignment, colorable, verify_assignment
from e8ks.errors import ExtensionFailure, InsufficientPairs, NonOrthogonalRequired
from e8ks.subsystems import (
    KP_SYMBOL,
    KPSet,
    _bitmask,
    _induced_cliques,
    _repair_selection,
    build_kp_sets,
    extract_E6,
    extract_E7,
    is_saturated,
    kp_parity_proofs,
    kp_report,
)

from conftest import read_json, read_proof


def _find_by_seeds(candidates, seeds):
    want = {tuple(sorted(s)) for s in seeds}
    return next(
        k for k in candidates if {tuple(sorted(s)) for s in k.seeds} == want
    )


def test_e7_shape(table, graph):
    e7 = extract_E7(table, graph, 1)
    assert e7.n_rays == 63
    assert e7.n_bases == 135
    assert e7.basis_size == 7
    assert e7.symbol.text == "63_15-135_7"
    assert set(e7.rays) == set(graph.neighbors(1))
    assert all(1 not in b for b in e7.bases)


def test_e7_saturated_and_uncolorable(table, graph):
    e7 = extract_E7(table, graph, 1)
    assert is_saturated(e7, graph)
    assert colorable(e7.bases, graph, mode="strict") is None


def test_e7_bases_are_exactly_the_induced_cliques(table, graph):
    e7 = extract_E7(table, graph, 1)
    cliques = _induced_cliques(graph, e7.rays, 7)
    assert set(cliques) == set(e7.bases)


def test_e7_anchors_give_isomorphic_census(table, graph):
    for anchor in (37, 120):
        e7 = extract_E7(table, graph, anchor)
        assert e7.symbol.text == "63_15-135_7"


def test_e7_anchor_validation(table, graph):
    for bad in (0, 121):
        with pytest.raises(ValueError):
            extract_E7(table, graph, bad)


def test_e6_has_no_bases(graph):
    e6 = extract_E6(graph, 1, 2)
    assert e6.n_rays == 36
    assert e6.n_bases == 0
    assert e6.symbol.text == "-"
    for r in e6.rays:
        assert graph.are_orthogonal(1, r)
        assert graph.are_orthogonal(2, r)


def test_e6_rejects_orthogonal_or_degenerate_pairs(graph):
    with pytest.raises(NonOrthogonalRequired):
        extract_E6(graph, 1, 7)
    with pytest.raises(ValueError):
        extract_E6(graph, 1, 1)
    with pytest.raises(ValueError):
        extract_E6(graph, 0, 5)


def test_kp_scan_counts(kp_scan):
    kp_sets, pseudo = kp_scan
    assert len(kp_sets) == 168
    assert len(pseudo) == 2835
    for sample in (kp_sets[0], pseudo[0]):
        assert len(sample.bases) == 25
        assert len(sample.rays) == 40
        assert sample.symbol.text == KP_SYMBOL


def test_fig3_set_reconstructed(kp_scan):
    data = read_json("fig3_kp.json")
    kp = _find_by_seeds(kp_scan[0], data["seeds"])
    assert kp.is_kp
    assert kp.pseudo_reason is None
    want_pairs = {
        frozenset((tuple(sorted(a)), tuple(sorted(b)))) for a, b in data["pairs"]
    }
    got_pairs = {
        frozenset((tuple(sorted(a)), tuple(sorted(b)))) for a, b in kp.pairs
    }
    assert got_pairs == want_pairs
    printed = {tuple(sorted(b)) for row in data["seeds"] for b in [row]}
    printed |= {tuple(sorted(b)) for a, b in data["pairs"] for b in (a, b)}
    assert set(kp.bases) == printed


def test_fig3_parity_proofs(kp_scan, graph):
    kp = _find_by_seeds(kp_scan[0], read_json("fig3_kp.json")["seeds"])
    proofs = kp_parity_proofs(kp)
    assert len(proofs) == 1024
    sizes = Counter(p.n_bases for p in proofs)
    assert sizes == {11: 320, 13: 640, 15: 64}
    keys = {p.key for p in proofs}
    for name in ("fig3a_11.txt", "fig3a_13.txt", "fig3a_15.txt"):
        printed = frozenset(tuple(sorted(b)) for b in read_proof(name))
        assert printed in keys


def test_fig3b_is_pseudo_and_colorable(kp_scan, graph):
    data = read_json("fig3b_pseudo.json")
    cand = _find_by_seeds(kp_scan[1], data["seeds"])
    assert not cand.is_kp
    assert cand.pseudo_reason == "rays 1 and 73 occur together in 4 bases"
    witness = Assignment(frozenset(data["assignment"]), tuple(sorted(cand.rays)))
    assert verify_assignment(witness, cand.bases, graph, mode="strict")
    with pytest.raises(ValueError):
        kp_parity_proofs(cand)


def test_kp_report_shapes(kp_scan):
    kp_sets, pseudo = kp_scan
    kp = _find_by_seeds(kp_sets, read_json("fig3_kp.json")["seeds"])
    report = kp_report(kp)
    assert report["isKP"] is True
    assert "pseudoReason" not in report
    assert report["proofCounts"] == {"11": 320, "13": 640, "15": 64}
    assert len(report["seeds"]) == 5
    assert len(report["pairs"]) == 10

    blank = kp_report(pseudo[0])
    assert blank["isKP"] is False
    assert blank["pseudoReason"]
    assert blank["proofCounts"] == {"11": 0, "13": 0, "15": 0}


def test_insufficient_pairs_raised(monkeypatch, table, graph, block):
    monkeypatch.setattr(subsystems, "_half_half_groups", lambda *a: {})
    with pytest.raises(InsufficientPairs):
        build_kp_sets(table, graph, block)


def test_repair_selection_branches():
    seeds = [_bitmask((1, 2)), _bitmask((3, 4)), _bitmask((5, 6))]
    assert _repair_selection(_bitmask((1, 2)), seeds) == [0]
    assert _repair_selection(_bitmask((1, 2, 3, 4, 5, 6)), seeds) == [0, 1, 2]
    with pytest.raises(ExtensionFailure, match="only partially"):
        _repair_selection(_bitmask((1,)), seeds)
    with pytest.raises(ExtensionFailure, match="escapes"):
        _repair_selection(_bitmask((9,)), seeds)
    with pytest.raises(ExtensionFailure, match="even size"):
        _repair_selection(_bitmask((1, 2, 3, 4)), seeds)


def test_kpset_rejects_wrong_flags(kp_scan):
    kp = kp_scan[0][0]
    with pytest.raises(ValueError):
        KPSet(kp.seeds, kp.pairs, False, "made up")
