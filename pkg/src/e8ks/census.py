"""Family-wide censuses of critical parity proofs.

Within a family, parity proofs are exactly the odd-weight elements of
the GF(2) kernel of the ray-by-basis incidence matrix.  Small kernels
(dimension at most the cap) are swept exhaustively in Gray-code order;
larger ones are explored by seeded random sampling of odd kernel
elements, each reduced to an irreducible proof before the criticality
check.  Exhaustive results carry coverage 1.0, randomized ones the
fraction of the odd coset actually examined.

Criticality here is the hypergraph notion: after dropping one basis,
the reduced collection must admit an assignment valid against its own
co-occurrence relation (only rays sharing a kept basis exclude each
other).  The published per-family counts close under this reading, not
under adjacency inherited from the ambient 120-ray graph.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .coloring import DEFAULT_NODE_BUDGET
from .errors import BudgetExceeded
from .families import Family
from .gf2 import nullspace
from .proofs import ParityProof
from .structure import Basis, OrthogonalityGraph, SystemSymbol, system_symbol

DEFAULT_KERNEL_CAP = 26
DEFAULT_SAMPLES = 20_000

_M64 = 0xFFFFFFFFFFFFFFFF

__all__ = [
    "DEFAULT_KERNEL_CAP",
    "DEFAULT_SAMPLES",
    "FamilyCensus",
    "family_columns",
    "family_kernel",
    "enumerate_family_proofs",
]


def family_columns(family: Family) -> list[int]:
    """Basis bitmasks over local ray positions, in family basis order."""
    pos = {ray: k for k, ray in enumerate(family.rays)}
    cols = []
    for b in family.bases:
        m = 0
        for i in b:
            m |= 1 << pos[i]
        cols.append(m)
    return cols


def family_kernel(family: Family) -> list[int]:
    """Kernel basis of the incidence matrix, masks over basis indices."""
    return nullspace(family_columns(family))


def _weak_adjacency(masks, nrays: int) -> list[int]:
    """Co-occurrence adjacency of a basis collection over local rays."""
    adj = [0] * nrays
    for m in masks:
        rest = m
        while rest:
            bit = rest & -rest
            rest ^= bit
            adj[bit.bit_length() - 1] |= m & ~bit
    return adj


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return out


@dataclass
class FamilyCensus:
    """Census results for one family.

    Masks select bases by their index in family.bases.  counts maps the
    canonical symbol text of each critical proof class to how many
    distinct proofs carry it; samples keeps one representative mask per
    class, the first one encountered in sweep or exploration order.
    """

    family: Family
    kernel_dim: int
    exhaustive: bool
    explored: int
    coverage: float
    counts: dict[str, int] = field(default_factory=dict)
    samples: dict[str, int] = field(default_factory=dict)
    critical_masks: tuple[int, ...] = ()
    unresolved_masks: tuple[int, ...] = ()
    n_odd: int = 0
    n_irreducible: int = 0

    @property
    def n_critical(self) -> int:
        return len(self.critical_masks)

    @property
    def n_unresolved(self) -> int:
        return len(self.unresolved_masks)

    @property
    def max_critical_bases(self) -> int:
        return max((m.bit_count() for m in self.critical_masks), default=0)

    def bases_for_mask(self, mask: int) -> tuple[Basis, ...]:
        return tuple(self.family.bases[j] for j in _bits(mask))

    def proof_from_mask(self, mask: int) -> ParityProof:
        return ParityProof.from_bases(self.bases_for_mask(mask))


def enumerate_family_proofs(
    family: Family,
    graph: OrthogonalityGraph,
    kernel_cap: int = DEFAULT_KERNEL_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
    backend: str | None = None,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    require_exhaustive: bool = False,
) -> FamilyCensus:
    """Census the critical parity proofs of one family.

    Exhaustive when the kernel dimension is within kernel_cap, otherwise
    randomized with `samples` seeded draws; require_exhaustive turns the
    fallback into a loud BudgetExceeded instead.
    """
    for b in family.bases:
        for x in range(len(b)):
            for y in range(x + 1, len(b)):
                if not graph.are_orthogonal(b[x], b[y]):
                    raise ValueError(f"family basis {b} is not orthogonal in the given graph")
    cols = family_columns(family)
    kernel = nullspace(cols)
    d = len(kernel)
    if d == 0 or not any(v.bit_count() & 1 for v in kernel):
        # parity of the weight is linear over the kernel, so without an
        # odd basis vector there are no odd elements and no proofs
        return FamilyCensus(family, d, True, 0, 1.0)
    if d <= kernel_cap:
        if len(family.rays) <= 64 and len(cols) <= 128:
            return _sweep_backend(family, cols, kernel, node_budget, backend)
        return _sweep_python(family, cols, kernel, node_budget)
    if require_exhaustive:
        raise BudgetExceeded(
            f"family {family.name}: kernel dimension {d} exceeds the exhaustive cap {kernel_cap}"
        )
    return _explore_random(family, cols, kernel, node_budget, backend, seed, samples)


def _decode_key(key: int) -> SystemSymbol:
    """Unpack a sweep-kernel histogram key (no overflow bit)."""
    nb = (key >> 48) & 0xFF
    ray_classes = []
    for slot in range(5, -1, -1):
        c = (key >> (8 * slot)) & 0xFF
        if c:
            ray_classes.append((int(c), 2 * (slot + 1)))
    return SystemSymbol(tuple(ray_classes), ((int(nb), 8),))


def _sweep_backend(family, cols, kernel, node_budget, backend) -> FamilyCensus:
    kern = kernels(backend)
    d = len(kernel)
    kb_lo = np.array([v & _M64 for v in kernel], dtype=np.uint64)
    kb_hi = np.array([v >> 64 for v in kernel], dtype=np.uint64)
    col_ray_mask = np.array(cols, dtype=np.uint64)
    pos = {ray: k for k, ray in enumerate(family.rays)}
    col_rays = np.array(
        [[pos[i] for i in b] for b in family.bases], dtype=np.int64
    )
    nrays = len(family.rays)

    total = 1 << d
    chunk = 1 << 20
    mask_parts: list[np.ndarray] = []
    key_parts: list[np.ndarray] = []
    unres: list[int] = []
    n_odd = n_irr = n_crit = n_unresolved = n_over = 0
    for s_lo in range(0, total, chunk):
        s_hi = min(s_lo + chunk, total)
        cap = s_hi - s_lo
        out_lo = np.empty(cap, dtype=np.uint64)
        out_hi = np.empty(cap, dtype=np.uint64)
        out_key = np.empty(cap, dtype=np.uint64)
        unres_lo = np.empty(4096, dtype=np.uint64)
        unres_hi = np.empty(4096, dtype=np.uint64)
        n_out, n_un, odd, irr, crit, unresolved, over = kern.sweep_parity_census(
            kb_lo, kb_hi, col_ray_mask, col_rays, nrays,
            s_lo, s_hi, node_budget,
            out_lo, out_hi, out_key, unres_lo, unres_hi,
        )
        n_odd += int(odd)
        n_irr += int(irr)
        n_crit += int(crit)
        n_unresolved += int(unresolved)
        n_over += int(over)
        if n_out:
            mask_parts.append(np.stack([out_lo[:n_out].copy(), out_hi[:n_out].copy()], axis=1))
            key_parts.append(out_key[:n_out].copy())
        for t in range(int(n_un)):
            unres.append(int(unres_lo[t]) | (int(unres_hi[t]) << 64))

    counts: dict[str, int] = {}
    samples_map: dict[str, int] = {}
    critical: list[int] = []
    if key_parts:
        keys = np.concatenate(key_parts)
        pairs = np.concatenate(mask_parts, axis=0)
        masks = [int(a) | (int(b) << 64) for a, b in pairs]
        critical = masks
        overflow = (keys >> np.uint64(63)).astype(bool)
        for k, m in zip(keys, masks):
            if int(k) >> 63:
                text = system_symbol(
                    [family.bases[j] for j in _bits(m)]
                ).text
            else:
                text = _decode_key(int(k)).text
            counts[text] = counts.get(text, 0) + 1
            samples_map.setdefault(text, m)
        assert overflow.sum() == n_over
    assert len(critical) == n_crit
    return FamilyCensus(
        family, d, True, 1 << (d - 1), 1.0,
        counts, samples_map, tuple(critical), tuple(unres),
        n_odd, n_irr,
    )


def _sweep_python(family, cols, kernel, node_budget) -> FamilyCensus:
    """Generic exhaustive sweep without word-size limits on the rays."""
    from ._kernels_numpy import _solve_int

    nrays = len(family.rays)
    d = len(kernel)
    counts: dict[str, int] = {}
    samples_map: dict[str, int] = {}
    critical: list[int] = []
    unres: list[int] = []
    n_odd = n_irr = 0

    cur = 0
    for s in range(1 << d):
        if s:
            cur ^= kernel[(s & -s).bit_length() - 1]
        w = cur.bit_count()
        if w == 0 or w % 2 == 0:
            continue
        n_odd += 1
        idxs = _bits(cur)

        pivots: dict[int, int] = {}
        zeros = 0
        for j in idxs:
            v = cols[j]
            while v:
                pv = pivots.get(v & -v)
                if pv is None:
                    break
                v ^= pv
            if v == 0:
                zeros += 1
                if zeros >= 2:
                    break
            else:
                pivots[v & -v] = v
        if zeros != 1:
            continue
        n_irr += 1

        verdict = _drop_each_and_solve(
            [cols[j] for j in idxs], nrays, node_budget, _solve_int
        )
        if verdict is None:
            unres.append(cur)
            continue
        if not verdict:
            continue
        text = system_symbol([family.bases[j] for j in idxs]).text
        counts[text] = counts.get(text, 0) + 1
        samples_map.setdefault(text, cur)
        critical.append(cur)

    return FamilyCensus(
        family, d, True, 1 << (d - 1), 1.0,
        counts, samples_map, tuple(critical), tuple(unres),
        n_odd, n_irr,
    )


def _drop_each_and_solve(sub_cols, nrays, node_budget, solve) -> bool | None:
    """Criticality verdict by dropping one basis at a time.

    Each reduced collection is solved against its own co-occurrence
    adjacency.  A single definitely-uncolorable drop refutes criticality
    even when other drops time out; only timeouts with no refutation
    leave None.
    """
    timed_out = False
    for drop in range(len(sub_cols)):
        reduced = sub_cols[:drop] + sub_cols[drop + 1 :]
        status, _ones, _nodes = solve(reduced, _weak_adjacency(reduced, nrays), node_budget)
        if status == 0:
            return False
        if status == -1:
            timed_out = True
    return None if timed_out else True


def _explore_random(
    family, cols, kernel, node_budget, backend, seed, samples
) -> FamilyCensus:
    """Randomized census: sampled odd kernel elements reduced to proofs.

    Every candidate it touches is either reduced further (hence provably
    non-critical) or lands in an irreducible endpoint that gets the full
    criticality check, so explored counts candidates whose status is
    actually known.
    """
    rng = random.Random(seed)
    d = len(kernel)
    odd_fix = next(v for v in kernel if v.bit_count() & 1)
    ncols = len(cols)
    nrays = len(family.rays)

    kern = kernels(backend) if nrays <= 64 else None
    if kern is not None:
        col_arr = np.array(cols, dtype=np.uint64)
        pos = {ray: k for k, ray in enumerate(family.rays)}
        ray_rows = np.array(
            [[pos[i] for i in b] for b in family.bases], dtype=np.intp
        )
        self_bits = np.uint64(1) << np.arange(nrays, dtype=np.uint64)
        adj_hi = np.zeros(nrays, dtype=np.uint64)

    def criticality(idxs: list[int]) -> bool | None:
        if kern is None:
            from ._kernels_numpy import _solve_int

            return _drop_each_and_solve(
                [cols[j] for j in idxs], nrays, node_budget, _solve_int
            )
        timed_out = False
        chosen = np.array(idxs, dtype=np.intp)
        for drop in range(len(idxs)):
            keep = np.concatenate([chosen[:drop], chosen[drop + 1 :]])
            basis_lo = col_arr[keep]
            basis_hi = np.zeros_like(basis_lo)
            wadj = np.zeros(nrays, dtype=np.uint64)
            np.bitwise_or.at(wadj, ray_rows[keep].ravel(), np.repeat(basis_lo, 8))
            wadj &= ~self_bits
            status, _lo, _hi, _nodes = kern.solve_coloring(
                basis_lo, basis_hi, wadj, adj_hi, node_budget
            )
            if status == 0:
                return False
            if status == -1:
                timed_out = True
        return None if timed_out else True

    seen: set[int] = set()

    def reduce(x: int) -> int:
        while True:
            seen.add(x)
            idxs = _bits(x)
            ns = nullspace([cols[j] for j in idxs])
            if len(ns) == 1:
                return x
            full = (1 << len(idxs)) - 1
            options = [y for y in ns if y != full]
            y = options[rng.randrange(len(options))]
            if y.bit_count() % 2 == 0:
                y ^= full
            nx = 0
            while y:
                p = (y & -y).bit_length() - 1
                y &= y - 1
                nx |= 1 << idxs[p]
            x = nx

    starts: list[int] = []
    xor_all = 0
    for m in cols:
        xor_all ^= m
    if xor_all == 0 and ncols % 2 == 1:
        # the whole family is itself a parity proof; descents from the
        # top reach large endpoints the uniform draws rarely visit
        starts.extend([(1 << ncols) - 1] * 16)
    for _ in range(samples):
        x = 0
        sel = rng.getrandbits(d)
        for t in range(d):
            if (sel >> t) & 1:
                x ^= kernel[t]
        if x.bit_count() % 2 == 0:
            x ^= odd_fix
        if x:
            starts.append(x)

    counts: dict[str, int] = {}
    samples_map: dict[str, int] = {}
    critical: list[int] = []
    unres: list[int] = []
    endpoint_status: dict[int, bool | None] = {}
    for x0 in starts:
        x = reduce(x0)
        if x in endpoint_status:
            continue
        idxs = _bits(x)
        verdict = criticality(idxs)
        endpoint_status[x] = verdict
        if verdict is True:
            text = system_symbol([family.bases[j] for j in idxs]).text
            counts[text] = counts.get(text, 0) + 1
            samples_map.setdefault(text, x)
            critical.append(x)
        elif verdict is None:
            unres.append(x)

    return FamilyCensus(
        family, d, False, len(seen), len(seen) / float(1 << (d - 1)),
        counts, samples_map, tuple(critical), tuple(unres),
        len(seen), len(endpoint_status),
    )
