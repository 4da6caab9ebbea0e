"""Pure numpy/python reference implementations of the hot kernels.

These define the contracts; e8ks._kernels_numba mirrors them.  Bitsets
cross the boundary as little-endian uint64 word pairs and are unpacked
into python ints internally.  Selection and iteration orders match the
numba backend exactly so that results are backend-independent.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "find_cliques",
    "solve_coloring",
    "count_ordering_symmetries",
    "sweep_parity_census",
]


def _join(lo: np.ndarray, hi: np.ndarray) -> list[int]:
    return [int(a) | (int(b) << 64) for a, b in zip(lo, hi)]


def find_cliques(masks: np.ndarray, n: int, k: int) -> np.ndarray:
    """All k-cliques of the graph, rows ascending, lex-sorted.

    Bron-Kerbosch with pivoting, truncated at depth k.  Exact only when
    the graph has no cliques larger than k, which holds here because k
    always matches the dimension spanned by the rays.
    """
    nbr = _join(masks[:, 0], masks[:, 1])
    found: list[tuple[int, ...]] = []

    def expand(r: list[int], p: int, x: int) -> None:
        if len(r) == k:
            found.append(tuple(r))
            return
        if p == 0 or len(r) + p.bit_count() < k:
            return
        pux = p | x
        best_u = -1
        best = -1
        m = pux
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            c = (p & nbr[u]).bit_count()
            if c > best:
                best = c
                best_u = u
        ext = p & ~nbr[best_u]
        while ext:
            v = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            bit = 1 << v
            expand(r + [v], p & nbr[v], x & nbr[v])
            p &= ~bit
            x |= bit

    expand([], (1 << n) - 1, 0)
    found.sort()
    return np.array(found, dtype=np.int32).reshape(-1, k)


def _solve_int(masks: list[int], adj: list[int], node_budget: int) -> tuple[int, int, int]:
    """Backtracking search shared by both public solver entry points.

    Branch on the first basis with strictly fewest live candidates,
    candidates in ascending ray order.  Returns (status, ones, nodes)
    with status 1 satisfiable, 0 unsatisfiable, -1 budget exhausted.
    """
    nb = len(masks)
    ones = 0
    forb = 0
    nodes = 0
    stack: list[tuple[int, int, int]] = []

    def select() -> int | None:
        best_cand = None
        best_cnt = 1 << 40
        for t in range(nb):
            m = masks[t]
            if m & ones:
                continue
            cand = m & ~forb
            c = cand.bit_count()
            if c < best_cnt:
                best_cnt = c
                best_cand = cand
                if c == 0:
                    break
        return best_cand

    cand = select()
    if cand is None:
        return 1, ones, nodes
    while True:
        if cand:
            bit = cand & -cand
            r = bit.bit_length() - 1
            stack.append((ones, forb, cand ^ bit))
            ones |= bit
            forb |= adj[r] | bit
            nodes += 1
            if nodes > node_budget:
                return -1, 0, nodes
            cand = select()
            if cand is None:
                return 1, ones, nodes
        else:
            if not stack:
                return 0, 0, nodes
            ones, forb, cand = stack.pop()


def solve_coloring(basis_lo, basis_hi, adj_lo, adj_hi, node_budget):
    """See _solve_int; masks arrive as uint64 word pairs."""
    masks = _join(basis_lo, basis_hi)
    adj = _join(adj_lo, adj_hi)
    status, ones, nodes = _solve_int(masks, adj, int(node_budget))
    lo = np.uint64(ones & 0xFFFFFFFFFFFFFFFF)
    hi = np.uint64(ones >> 64)
    return status, lo, hi, nodes


def count_ordering_symmetries(cx, cy, perms, tol):
    """Count target-basis orderings inducing a global ray symmetry.

    Vectorized two-stage filter: cheap screen on the image of ray 0,
    full 120x120 overlap check on the survivors.
    """
    lim = 1.0 - tol
    count = 0
    chunk = 2048
    for s in range(0, perms.shape[0], chunk):
        block = perms[s : s + chunk]
        cyp = cy[block]  # (c, 8, n)
        t0 = np.einsum("k,ckj->cj", cx[0], cyp)
        keep = np.flatnonzero(np.abs(t0).max(axis=1) >= lim)
        for ci in keep:
            overlaps = cx @ cyp[ci]
            if (np.abs(overlaps).max(axis=1) >= lim).all():
                count += 1
    return count


def sweep_parity_census(kb_lo, kb_hi, col_ray_mask, col_rays, nrays,
                        s_lo, s_hi, node_budget,
                        out_lo, out_hi, out_key, unres_lo, unres_hi):
    """Gray-code sweep over kernel combinations in index range [s_lo, s_hi).

    Candidate s is the XOR of kernel basis vectors selected by bits of
    gray(s) = s ^ (s >> 1).  Odd-size candidates are tested for
    irreducibility (exactly one dependent column under GF(2) column
    elimination of their ray masks) and then for basis-criticality:
    every single-column drop must be colorable, with rays adjacent
    exactly when they share one of the kept columns.  Critical
    candidates append (mask_lo, mask_hi, key) records; key packs the
    multiplicity histogram (counts of multiplicity 2..12 in bits 0..47),
    the column count in bits 48..55, and bit 63 flags multiplicities
    beyond 12.

    Returns (n_out, n_unres, odd, irreducible, critical, unresolved,
    overflowed).
    """
    d = kb_lo.shape[0]
    kb = _join(kb_lo, kb_hi)
    col_mask = [int(x) for x in col_ray_mask]
    budget = int(node_budget)

    n_out = 0
    n_unres = 0
    n_odd = n_irr = n_crit = n_unresolved = n_over = 0

    cur = 0
    g = s_lo ^ (s_lo >> 1)
    for t in range(d):
        if (g >> t) & 1:
            cur ^= kb[t]

    for s in range(s_lo, s_hi):
        if s > s_lo:
            cur ^= kb[(s & -s).bit_length() - 1]
        w = cur.bit_count()
        if w % 2 == 0 or w == 0:
            continue
        n_odd += 1

        cols = []
        m = cur
        while m:
            cols.append((m & -m).bit_length() - 1)
            m &= m - 1

        # reduce on the lowest set bit each step; the XOR only touches
        # that bit and higher ones, so the bit strictly increases
        pivots: dict[int, int] = {}
        zeros = 0
        for c in cols:
            v = col_mask[c]
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

        mult: dict[int, int] = {}
        for c in cols:
            for t in range(col_rays.shape[1]):
                ray = int(col_rays[c, t])
                mult[ray] = mult.get(ray, 0) + 1

        critical = True
        timed_out = False
        for drop_idx in range(len(cols)):
            sub = [col_mask[c] for i, c in enumerate(cols) if i != drop_idx]
            wadj = [0] * int(nrays)
            for m in sub:
                rest = m
                while rest:
                    bit = rest & -rest
                    rest ^= bit
                    wadj[bit.bit_length() - 1] |= m & ~bit
            status, _ones, _nodes = _solve_int(sub, wadj, budget)
            if status == 0:
                critical = False
                timed_out = False
                break
            if status == -1:
                timed_out = True
        if timed_out:
            n_unresolved += 1
            if n_unres < unres_lo.shape[0]:
                unres_lo[n_unres] = np.uint64(cur & 0xFFFFFFFFFFFFFFFF)
                unres_hi[n_unres] = np.uint64(cur >> 64)
                n_unres += 1
            continue
        if not critical:
            continue
        n_crit += 1

        key = len(cols) << 48
        over = False
        for ray, mv in mult.items():
            if mv > 12:
                over = True
            else:
                key += 1 << (8 * (mv // 2 - 1))
        if over:
            key |= 1 << 63
            n_over += 1
        out_lo[n_out] = np.uint64(cur & 0xFFFFFFFFFFFFFFFF)
        out_hi[n_out] = np.uint64(cur >> 64)
        out_key[n_out] = np.uint64(key)
        n_out += 1

    return n_out, n_unres, n_odd, n_irr, n_crit, n_unresolved, n_over
