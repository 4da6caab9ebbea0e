"""Parity proofs of uncolorability and their classification.

A collection of distinct bases is a parity proof when the number of
bases is odd while every ray in scope sits in an even number of them.
Any exactly-one-per-basis assignment would then pick an odd total of
rays basis-by-basis but an even total ray-by-ray, so none exists.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .coloring import DEFAULT_NODE_BUDGET, Assignment, Mode, colorable
from .errors import AmbiguousPairing, TimeoutExceeded
from .gf2 import nullspace
from .structure import BasisTable, OrthogonalityGraph, SystemSymbol, system_symbol

__all__ = [
    "ParityProof",
    "multiplicities",
    "is_parity_proof",
    "proof_symbol",
    "RefinedSymbol",
    "rank2_refine",
    "parse_refined",
    "CriticalityReport",
    "is_critical",
    "noncontextuality_gap",
]


def multiplicities(bases) -> dict[int, int]:
    counts: dict[int, int] = {}
    for b in bases:
        for i in b:
            counts[i] = counts.get(i, 0) + 1
    return counts


def is_parity_proof(bases) -> bool:
    """Odd basis count, all ray multiplicities even, no repeated basis."""
    canon = [tuple(sorted(b)) for b in bases]
    if len(set(canon)) != len(canon):
        return False
    if len(canon) % 2 == 0:
        return False
    return all(m % 2 == 0 for m in multiplicities(canon).values())


@dataclass(frozen=True)
class ParityProof:
    """A validated parity proof with canonically ordered bases."""

    bases: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not is_parity_proof(self.bases):
            raise ValueError("not a parity proof")

    @classmethod
    def from_bases(cls, bases) -> "ParityProof":
        return cls(tuple(sorted(tuple(sorted(b)) for b in bases)))

    @property
    def n_bases(self) -> int:
        return len(self.bases)

    @property
    def scope(self) -> tuple[int, ...]:
        return tuple(sorted({i for b in self.bases for i in b}))

    @property
    def key(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.bases)

    def multiplicities(self) -> dict[int, int]:
        return multiplicities(self.bases)

    def is_irreducible(self) -> bool:
        """True when no proper sub-collection is itself a parity proof.

        Equivalent to the GF(2) kernel of the basis-incidence columns
        being one-dimensional: the only dependency is the proof itself.
        """
        cols = []
        for b in self.bases:
            m = 0
            for i in b:
                m |= 1 << i
            cols.append(m)
        return len(nullspace(cols)) == 1

    def labels(self, table: BasisTable) -> tuple[int, ...]:
        return tuple(table.position(b) for b in self.bases)


def proof_symbol(proof: ParityProof) -> SystemSymbol:
    return system_symbol(proof.bases)


@dataclass(frozen=True)
class RefinedSymbol:
    """Symbol after merging rays with identical basis membership.

    Rays sharing the same incidence pattern co-occur in some basis, so
    they are mutually orthogonal and span a higher-rank projector that
    every containing basis uses as a unit.  Classes read
    (count, rank, multiplicity); basis classes read (count, size in
    projectors).
    """

    projector_classes: tuple[tuple[int, int, int], ...]
    basis_classes: tuple[tuple[int, int], ...]

    @property
    def text(self) -> str:
        left = " ".join(f"{c}^{r}_{m}" for c, r, m in self.projector_classes)
        right = " ".join(f"{c}_{s}" for c, s in self.basis_classes)
        return f"{left}-{right}"


def _membership_groups(proof: ParityProof):
    """Rays grouped by the set of proof bases containing them."""
    patterns: dict[int, frozenset[int]] = {}
    for i in proof.scope:
        patterns[i] = frozenset(
            k for k, b in enumerate(proof.bases) if i in b
        )
    groups: dict[frozenset[int], list[int]] = {}
    for i, pat in patterns.items():
        groups.setdefault(pat, []).append(i)
    oversized = [tuple(sorted(g)) for g in groups.values() if len(g) > 2]
    if oversized:
        raise AmbiguousPairing(tuple(sorted(oversized)))
    return patterns, groups


def rank2_pairs(proof: ParityProof) -> tuple[tuple[int, int], ...]:
    """The rank-2 groupings: ray pairs sharing every containing basis."""
    _, groups = _membership_groups(proof)
    return tuple(
        sorted(tuple(sorted(g)) for g in groups.values() if len(g) == 2)
    )


def rank2_refine(proof: ParityProof) -> RefinedSymbol:
    """Merge same-membership ray pairs into rank-2 projectors.

    Raises AmbiguousPairing when three or more rays share a membership
    pattern, since pairing them off is then not canonical.
    """
    patterns, groups = _membership_groups(proof)

    class_counts: dict[tuple[int, int], int] = {}
    for pat, members in groups.items():
        key = (len(members), len(pat))
        class_counts[key] = class_counts.get(key, 0) + 1
    projector_classes = tuple(
        (count, rank, mult)
        for (rank, mult), count in sorted(
            class_counts.items(), key=lambda kv: (-kv[0][0], -kv[0][1])
        )
    )

    sizes: dict[int, int] = {}
    for k, b in enumerate(proof.bases):
        distinct = {patterns[i] for i in b}
        sizes[k] = len(distinct)
    size_counts: dict[int, int] = {}
    for s in sizes.values():
        size_counts[s] = size_counts.get(s, 0) + 1
    basis_classes = tuple(
        (count, s)
        for s, count in sorted(size_counts.items(), key=lambda kv: (-kv[1], -kv[0]))
    )
    return RefinedSymbol(projector_classes, basis_classes)


_REFINED_TERM = re.compile(r"^(\d+)\^(\d+)_(\d+)$")
_BASIS_TERM = re.compile(r"^(\d+)_(\d+)$")


def parse_refined(text: str) -> RefinedSymbol:
    """Parse `10^2_2 16^1_2-8_6 1_4` into canonical class order."""
    left, sep, right = text.partition("-")
    if not sep:
        raise ValueError(f"malformed refined symbol {text!r}")
    projector_classes = []
    for term in left.split():
        m = _REFINED_TERM.match(term)
        if not m:
            raise ValueError(f"malformed projector class {term!r}")
        projector_classes.append((int(m[1]), int(m[2]), int(m[3])))
    basis_classes = []
    for term in right.split():
        m = _BASIS_TERM.match(term)
        if not m:
            raise ValueError(f"malformed basis class {term!r}")
        basis_classes.append((int(m[1]), int(m[2])))
    projector_classes.sort(key=lambda t: (-t[1], -t[2]))
    basis_classes.sort(key=lambda t: (-t[0], -t[1]))
    return RefinedSymbol(tuple(projector_classes), tuple(basis_classes))


@dataclass(frozen=True)
class CriticalityReport:
    """Outcome of dropping each basis in turn and re-testing colorability.

    critical is True when every drop admits a valid assignment, False as
    soon as one drop stays uncolorable, and None when no refutation was
    found but some drops timed out.
    """

    critical: bool | None
    witnesses: tuple[tuple[int, Assignment], ...] = field(default=())
    refuted_by: tuple[int, ...] = field(default=())
    unresolved: tuple[int, ...] = field(default=())


def is_critical(
    proof: ParityProof,
    graph: OrthogonalityGraph,
    mode: Mode = "weak",
    node_budget: int = DEFAULT_NODE_BUDGET,
    backend: str | None = None,
) -> CriticalityReport:
    """Decide whether dropping any one basis leaves a colorable collection.

    Each reduction is judged in weak mode by default: only rays sharing
    one of its own bases exclude each other.  This is the reading under
    which the per-family censuses close; strict mode (adjacency from the
    ambient graph) is stricter and rejects some of those proofs.

    One definitive uncolorable drop refutes criticality outright, even
    if other drops time out; unresolved drops alone leave the verdict
    open rather than defaulting to critical.
    """
    witnesses: list[tuple[int, Assignment]] = []
    refuted: list[int] = []
    unresolved: list[int] = []
    for k in range(proof.n_bases):
        reduced = proof.bases[:k] + proof.bases[k + 1 :]
        try:
            found = colorable(reduced, graph, mode=mode,
                              node_budget=node_budget, backend=backend)
        except TimeoutExceeded:
            unresolved.append(k)
            continue
        if found is None:
            refuted.append(k)
        else:
            witnesses.append((k, found))
    if refuted:
        verdict: bool | None = False
    elif unresolved:
        verdict = None
    else:
        verdict = True
    return CriticalityReport(
        verdict, tuple(witnesses), tuple(refuted), tuple(unresolved)
    )


def noncontextuality_gap(
    proof: ParityProof, criticality: CriticalityReport
) -> tuple[int, int]:
    """Classical vs quantum bound pair (B - 2, B) for a critical proof.

    The projectors satisfy all B exactly-one constraints at once.  A 0/1
    valuation cannot: the total ray count over bases is even (all
    multiplicities are), so with B odd the per-basis counts cannot all
    be 1, and count parity makes the shortfall at least two.  Criticality
    is required so the pair describes a minimal such collection.
    """
    if criticality.critical is not True:
        raise ValueError("noncontextuality gap requires a verified critical proof")
    return proof.n_bases - 2, proof.n_bases
