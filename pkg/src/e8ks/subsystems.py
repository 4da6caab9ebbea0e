"""E7, E6, and Kernaghan-Peres substructures of the ray system.

Three extractions, three behaviours: the 63 rays orthogonal to an anchor
form a saturated 7-ray-basis system that is uncolorable; the 36 rays
orthogonal to a nonorthogonal pair form no basis at all; and five
disjoint block bases plus their twenty half-and-half companions form a
40-ray, 25-basis set that either is a Kernaghan-Peres set or narrowly
misses (a "pseudo" set, detectably colorable).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import ExtensionFailure, InsufficientPairs, NonOrthogonalRequired
from .proofs import ParityProof
from .structure import (
    Basis,
    BasisTable,
    OrthogonalityGraph,
    SystemSymbol,
    pack_masks,
    system_symbol,
)

N_RAYS = 120
KP_SYMBOL = "40_5-25_8"


def _canon(b) -> Basis:
    return tuple(sorted(int(x) for x in b))


@dataclass(frozen=True)
class SubSystem:
    """A ray subset with the bases it supports at a fixed basis size."""

    rays: tuple[int, ...]
    bases: tuple[Basis, ...]
    symbol: SystemSymbol
    basis_size: int

    def __post_init__(self):
        rayset = set(self.rays)
        for b in self.bases:
            if len(b) != self.basis_size:
                raise ValueError(f"basis {b} is not of size {self.basis_size}")
            if not set(b) <= rayset:
                raise ValueError(f"basis {b} uses rays outside the subsystem")
        if self.symbol != system_symbol(self.bases):
            raise ValueError("symbol does not describe the bases")

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def n_bases(self) -> int:
        return len(self.bases)


def _induced_cliques(graph: OrthogonalityGraph, rays, k: int, backend=None):
    """k-cliques of the induced subgraph, reported with original ray ids."""
    rays = sorted(rays)
    idx = np.array(rays, dtype=np.intp) - 1
    sub = graph.adjacency[np.ix_(idx, idx)]
    rows = kernels(backend).find_cliques(pack_masks(sub), len(rays), k)
    return [tuple(rays[int(x)] for x in row) for row in rows]


def extract_E7(table: BasisTable, graph: OrthogonalityGraph, anchor: int) -> SubSystem:
    """The anchor's 63 neighbors with the anchor dropped from its bases.

    Every basis through the anchor loses that one ray and survives as a
    7-ray basis of the induced system; nothing else qualifies.
    """
    if not 1 <= anchor <= N_RAYS:
        raise ValueError(f"ray id {anchor} out of range")
    rays = graph.neighbors(anchor)
    bases = tuple(
        sorted(tuple(i for i in table.bases[k] if i != anchor) for k in table.containing(anchor))
    )
    return SubSystem(rays, bases, system_symbol(bases), 7)


def extract_E6(graph: OrthogonalityGraph, i: int, j: int) -> SubSystem:
    """The 36 rays orthogonal to both of two nonorthogonal rays.

    Raises NonOrthogonalRequired when i and j are orthogonal: their
    common neighborhood would then be a slice of the anchor system
    rather than the basis-free 36-ray one.
    """
    for r in (i, j):
        if not 1 <= r <= N_RAYS:
            raise ValueError(f"ray id {r} out of range")
    if i == j:
        raise ValueError("two distinct rays are required")
    if graph.are_orthogonal(i, j):
        raise NonOrthogonalRequired(f"rays {i} and {j} are orthogonal")
    rays = tuple(sorted(set(graph.neighbors(i)) & set(graph.neighbors(j))))
    bases = tuple(_induced_cliques(graph, rays, 6))
    return SubSystem(rays, bases, system_symbol(bases), 6)


def is_saturated(sub: SubSystem, graph: OrthogonalityGraph) -> bool:
    """Every orthogonal pair inside the subsystem shares some basis."""
    covered = set()
    for b in sub.bases:
        covered.update(itertools.combinations(b, 2))
    for x, y in itertools.combinations(sub.rays, 2):
        if graph.are_orthogonal(x, y) and (x, y) not in covered:
            return False
    return True


# --- Kernaghan-Peres sets ---------------------------------------------------


def _companion_counts(bases) -> Counter:
    counts: Counter = Counter()
    for b in bases:
        for pair in itertools.combinations(sorted(b), 2):
            counts[pair] += 1
    return counts


def _classify_companions(bases) -> tuple[bool, str | None]:
    """KP test: each ray meets 17 companions once and 6 companions thrice."""
    counts = _companion_counts(bases)
    once: Counter = Counter()
    thrice: Counter = Counter()
    other = []
    for (x, y), c in counts.items():
        if c == 1:
            once[x] += 1
            once[y] += 1
        elif c == 3:
            thrice[x] += 1
            thrice[y] += 1
        else:
            other.append((x, y, c))
    if not other:
        rays = {i for b in bases for i in b}
        if all(once[i] == 17 and thrice[i] == 6 for i in rays):
            return True, None
        return False, "companion pattern is not 17 once and 6 thrice for every ray"
    x, y, c = min(other, key=lambda t: (-t[2], t[0], t[1]))
    return False, f"rays {x} and {y} occur together in {c} bases"


@dataclass(frozen=True)
class KPSet:
    """Five seed bases plus ten complementary half-and-half pairs.

    Pseudo sets ride in the same record with is_kp False: they share
    every structural invariant (the 40_5-25_8 symbol, the disjoint
    half-half pairs) and differ only in the companion pattern.
    """

    seeds: tuple[Basis, ...]
    pairs: tuple[tuple[Basis, Basis], ...]
    is_kp: bool = field(default=True)
    pseudo_reason: str | None = field(default=None)

    def __post_init__(self):
        if len(self.seeds) != 5:
            raise ValueError("exactly five seed bases are required")
        if len(self.pairs) != 10:
            raise ValueError("exactly ten complementary pairs are required")
        seed_sets = [set(b) for b in self.seeds]
        for a, b in itertools.combinations(seed_sets, 2):
            if a & b:
                raise ValueError("seed bases must be disjoint")
        for a, b in self.pairs:
            if set(a) & set(b):
                raise ValueError(f"pair members {a} and {b} share rays")
            for member in (a, b):
                splits = sorted(
                    len(set(member) & s) for s in seed_sets if set(member) & s
                )
                if splits != [4, 4]:
                    raise ValueError(f"basis {member} is not half-and-half over two seeds")
        if self.symbol.text != KP_SYMBOL:
            raise ValueError(f"symbol {self.symbol.text} is not {KP_SYMBOL}")
        is_kp, reason = _classify_companions(self.bases)
        if is_kp != self.is_kp or (not is_kp and self.pseudo_reason != reason):
            raise ValueError("companion classification disagrees with the flags")

    @property
    def bases(self) -> tuple[Basis, ...]:
        members = list(self.seeds) + [b for p in self.pairs for b in p]
        return tuple(sorted(_canon(b) for b in members))

    @property
    def rays(self) -> tuple[int, ...]:
        return tuple(sorted({i for b in self.bases for i in b}))

    @property
    def symbol(self) -> SystemSymbol:
        return system_symbol(list(self.seeds) + [b for p in self.pairs for b in p])


def _validate_block(table: BasisTable, seed_block) -> tuple[Basis, ...]:
    block = tuple(_canon(b) for b in seed_block)
    if len(block) != 15:
        raise ValueError("a seed block holds exactly 15 bases")
    seen: Counter = Counter(i for b in block for i in b)
    if len(seen) != N_RAYS or set(seen.values()) != {1}:
        raise ValueError("a seed block must use each of the 120 rays exactly once")
    for b in block:
        if b not in table:
            raise ValueError(f"block row {b} is not a basis of the table")
    return block


def _half_half_groups(table: BasisTable, block) -> dict[tuple[int, int], list[Basis]]:
    """Table bases split 4 + 4 over two block rows, keyed by the row pair."""
    row_of = {i: r for r, b in enumerate(block) for i in b}
    groups: dict[tuple[int, int], list[Basis]] = {}
    for b in table:
        hits = Counter(row_of[i] for i in b)
        if len(hits) == 2 and set(hits.values()) == {4}:
            lo, hi = sorted(hits)
            groups.setdefault((lo, hi), []).append(b)
    return groups


def _pair_up(group: list[Basis]) -> list[tuple[Basis, Basis]]:
    """Greedy matching of complementary (ray-disjoint) bases."""
    remaining = sorted(group)
    pairs = []
    while len(remaining) >= 2:
        head = remaining.pop(0)
        mate = next((b for b in remaining if not set(head) & set(b)), None)
        if mate is None:
            break
        remaining.remove(mate)
        pairs.append((head, mate))
    return pairs


def build_kp_sets(
    table: BasisTable, graph: OrthogonalityGraph, seed_block
) -> tuple[tuple[KPSet, ...], tuple[KPSet, ...]]:
    """Scan every 5-subset of the block; return (KP sets, pseudo rejects).

    No generative shortcut is assumed: all C(15,5) = 3003 subsets are
    built and classified.  Each qualifying subset must yield its 20
    companions as 10 complementary pairs or InsufficientPairs is raised.
    """
    block = _validate_block(table, seed_block)
    groups = _half_half_groups(table, block)
    kp_sets: list[KPSet] = []
    pseudo: list[KPSet] = []
    for subset in itertools.combinations(range(15), 5):
        pairs: list[tuple[Basis, Basis]] = []
        for key in itertools.combinations(subset, 2):
            pairs.extend(_pair_up(groups.get(key, [])))
        if len(pairs) < 10:
            raise InsufficientPairs(
                f"block rows {subset} admit {len(pairs)} complementary pairs, need 10"
            )
        seeds = tuple(block[r] for r in subset)
        members = list(seeds) + [b for p in pairs for b in p]
        is_kp, reason = _classify_companions(members)
        candidate = KPSet(seeds, tuple(pairs), is_kp, reason)
        (kp_sets if is_kp else pseudo).append(candidate)
    return tuple(kp_sets), tuple(pseudo)


def _bitmask(b) -> int:
    m = 0
    for i in b:
        m |= 1 << i
    return m


def _repair_selection(chosen_parity: int, seed_masks) -> list[int]:
    """Indices of the unique seed subset restoring all-ray evenness.

    Seed supports are disjoint, so the subset is forced: every seed the
    parity vector touches must be swallowed whole.  Raises
    ExtensionFailure when the vector is not a union of whole seeds or
    the forced subset has even size.
    """
    chosen = [k for k, m in enumerate(seed_masks) if chosen_parity & m]
    rest = chosen_parity
    for k in chosen:
        if chosen_parity & seed_masks[k] != seed_masks[k]:
            raise ExtensionFailure("selection parity covers a seed basis only partially")
        rest &= ~seed_masks[k]
    if rest:
        raise ExtensionFailure("selection parity escapes the seed bases")
    if len(chosen) % 2 == 0:
        raise ExtensionFailure("forced seed subset has even size; no odd extension")
    return chosen


def kp_parity_proofs(kp: KPSet) -> list[ParityProof]:
    """All 1024 one-per-pair selections, each parity-repaired by seeds.

    Sizes land in {11, 13, 15}: ten pair members plus the forced one,
    three, or five seed bases.
    """
    if not kp.is_kp:
        raise ValueError("parity proofs require a valid KP set, not a pseudo set")
    seed_masks = [_bitmask(b) for b in kp.seeds]
    pair_masks = [(_bitmask(a), _bitmask(b)) for a, b in kp.pairs]
    proofs = []
    for sel in itertools.product(range(2), repeat=10):
        parity = 0
        for k, s in enumerate(sel):
            parity ^= pair_masks[k][s]
        forced = _repair_selection(parity, seed_masks)
        bases = [kp.pairs[k][s] for k, s in enumerate(sel)]
        bases.extend(kp.seeds[k] for k in forced)
        proofs.append(ParityProof.from_bases(bases))
    return proofs


def kp_report(kp: KPSet) -> dict:
    """JSON-ready summary: membership, verdict, and proof-size counts."""
    report: dict = {
        "seeds": [list(b) for b in kp.seeds],
        "pairs": [[list(a), list(b)] for a, b in kp.pairs],
        "isKP": kp.is_kp,
    }
    if not kp.is_kp:
        report["pseudoReason"] = kp.pseudo_reason
        report["proofCounts"] = {"11": 0, "13": 0, "15": 0}
        return report
    sizes = Counter(p.n_bases for p in kp_parity_proofs(kp))
    report["proofCounts"] = {str(n): sizes.get(n, 0) for n in (11, 13, 15)}
    return report
