"""numba implementations of the hot kernels.

Same contracts as e8ks._kernels_numpy; see that module for the
reference semantics.  All bitset arguments are little-endian uint64
words over local 0-based indices.  Iteration orders are fixed so both
backends produce identical results.
"""
from __future__ import annotations

import numpy as np
from numba import int64, njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True, inline="always")
def _ctz(x):
    # only called with x != 0
    lsb = x & (_ZERO - x)
    return int64(_popcount(lsb - _ONE))


@njit(cache=True)
def find_cliques(masks, n, k):
    """All k-cliques of the graph, rows ascending, lex order."""
    cap = 4096
    out = np.empty((cap, k), np.int32)
    cnt = 0
    verts = np.empty(k, np.int32)
    cand_lo = np.empty(k + 1, np.uint64)
    cand_hi = np.empty(k + 1, np.uint64)
    for v0 in range(n):
        verts[0] = v0
        # neighbors strictly above v0
        if v0 < 63:
            above_lo = ~((_ONE << np.uint64(v0 + 1)) - _ONE)
            above_hi = ~_ZERO
        elif v0 == 63:
            above_lo = _ZERO
            above_hi = ~_ZERO
        else:
            above_lo = _ZERO
            above_hi = ~((_ONE << np.uint64(v0 - 63)) - _ONE)
        cand_lo[1] = masks[v0, 0] & above_lo
        cand_hi[1] = masks[v0, 1] & above_hi
        depth = 1
        while depth >= 1:
            if cand_lo[depth] != _ZERO:
                u = _ctz(cand_lo[depth])
                cand_lo[depth] &= cand_lo[depth] - _ONE
            elif cand_hi[depth] != _ZERO:
                u = 64 + _ctz(cand_hi[depth])
                cand_hi[depth] &= cand_hi[depth] - _ONE
            else:
                depth -= 1
                continue
            verts[depth] = u
            if depth + 1 == k:
                if cnt == cap:
                    grown = np.empty((cap * 2, k), np.int32)
                    grown[:cap] = out
                    out = grown
                    cap *= 2
                for t in range(k):
                    out[cnt, t] = verts[t]
                cnt += 1
            else:
                nlo = cand_lo[depth] & masks[u, 0]
                nhi = cand_hi[depth] & masks[u, 1]
                if int64(_popcount(nlo)) + int64(_popcount(nhi)) >= k - depth - 1:
                    cand_lo[depth + 1] = nlo
                    cand_hi[depth + 1] = nhi
                    depth += 1
    return out[:cnt]


@njit(cache=True)
def solve_coloring(basis_lo, basis_hi, adj_lo, adj_hi, node_budget):
    """Search for a set of pairwise non-adjacent rays hitting each basis once.

    Returns (status, ones_lo, ones_hi, nodes): status 1 satisfiable,
    0 unsatisfiable, -1 node budget exhausted.  Branches on the basis
    with the fewest live candidates (first wins ties), candidates tried
    in ascending ray order.
    """
    nb = basis_lo.shape[0]
    st_ones_lo = np.empty(nb + 1, np.uint64)
    st_ones_hi = np.empty(nb + 1, np.uint64)
    st_forb_lo = np.empty(nb + 1, np.uint64)
    st_forb_hi = np.empty(nb + 1, np.uint64)
    st_rem_lo = np.empty(nb + 1, np.uint64)
    st_rem_hi = np.empty(nb + 1, np.uint64)
    ones_lo = _ZERO
    ones_hi = _ZERO
    forb_lo = _ZERO
    forb_hi = _ZERO
    nodes = int64(0)
    sp = 0

    # select initial basis
    cand_lo = _ZERO
    cand_hi = _ZERO
    best_cnt = int64(1 << 40)
    found = False
    for t in range(nb):
        if (basis_lo[t] & ones_lo) != _ZERO or (basis_hi[t] & ones_hi) != _ZERO:
            continue
        clo = basis_lo[t] & ~forb_lo
        chi = basis_hi[t] & ~forb_hi
        c = int64(_popcount(clo)) + int64(_popcount(chi))
        if c < best_cnt:
            best_cnt = c
            cand_lo = clo
            cand_hi = chi
            found = True
            if c == 0:
                break
    if not found:
        return 1, ones_lo, ones_hi, nodes

    while True:
        if cand_lo != _ZERO or cand_hi != _ZERO:
            if cand_lo != _ZERO:
                r = _ctz(cand_lo)
                bit_lo = _ONE << np.uint64(r)
                bit_hi = _ZERO
                st_rem_lo[sp] = cand_lo & (cand_lo - _ONE)
                st_rem_hi[sp] = cand_hi
            else:
                r = _ctz(cand_hi)
                bit_lo = _ZERO
                bit_hi = _ONE << np.uint64(r)
                r += 64
                st_rem_lo[sp] = _ZERO
                st_rem_hi[sp] = cand_hi & (cand_hi - _ONE)
            st_ones_lo[sp] = ones_lo
            st_ones_hi[sp] = ones_hi
            st_forb_lo[sp] = forb_lo
            st_forb_hi[sp] = forb_hi
            sp += 1
            ones_lo |= bit_lo
            ones_hi |= bit_hi
            forb_lo |= adj_lo[r] | bit_lo
            forb_hi |= adj_hi[r] | bit_hi
            nodes += 1
            if nodes > node_budget:
                return -1, _ZERO, _ZERO, nodes
            # select next basis
            cand_lo = _ZERO
            cand_hi = _ZERO
            best_cnt = int64(1 << 40)
            found = False
            for t in range(nb):
                if (basis_lo[t] & ones_lo) != _ZERO or (basis_hi[t] & ones_hi) != _ZERO:
                    continue
                clo = basis_lo[t] & ~forb_lo
                chi = basis_hi[t] & ~forb_hi
                c = int64(_popcount(clo)) + int64(_popcount(chi))
                if c < best_cnt:
                    best_cnt = c
                    cand_lo = clo
                    cand_hi = chi
                    found = True
                    if c == 0:
                        break
            if not found:
                return 1, ones_lo, ones_hi, nodes
        else:
            if sp == 0:
                return 0, _ZERO, _ZERO, nodes
            sp -= 1
            ones_lo = st_ones_lo[sp]
            ones_hi = st_ones_hi[sp]
            forb_lo = st_forb_lo[sp]
            forb_hi = st_forb_hi[sp]
            cand_lo = st_rem_lo[sp]
            cand_hi = st_rem_hi[sp]


@njit(cache=True)
def count_ordering_symmetries(cx, cy, perms, tol):
    """Count target-basis orderings inducing a global ray symmetry.

    cx[i] holds ray i in the frame of the fixed basis, cy[k] the k-th
    target vector against all rays; the candidate map for a permutation
    p sends ray i to the vector with overlaps sum_k cx[i, k] cy[p[k], :].
    An ordering counts when every ray lands on some ray up to sign
    within tolerance.
    """
    n_perm = perms.shape[0]
    n_ray = cx.shape[0]
    count = 0
    lim = 1.0 - tol
    cyp = np.empty((8, n_ray))
    for p in range(n_perm):
        for t in range(8):
            src = perms[p, t]
            for j in range(n_ray):
                cyp[t, j] = cy[src, j]
        ok = True
        for i in range(n_ray):
            best = 0.0
            for j in range(n_ray):
                acc = 0.0
                for t in range(8):
                    acc += cx[i, t] * cyp[t, j]
                a = abs(acc)
                if a > best:
                    best = a
            if best < lim:
                ok = False
                break
        if ok:
            count += 1
    return count


@njit(cache=True)
def _solve_family(sub_masks, nb, adj, node_budget,
                  st_ones, st_forb, st_rem):
    """Single-word variant of solve_coloring for <= 64 local rays."""
    ones = _ZERO
    forb = _ZERO
    nodes = int64(0)
    sp = 0
    cand = _ZERO
    best_cnt = int64(1 << 40)
    found = False
    for t in range(nb):
        if (sub_masks[t] & ones) != _ZERO:
            continue
        c0 = sub_masks[t] & ~forb
        c = int64(_popcount(c0))
        if c < best_cnt:
            best_cnt = c
            cand = c0
            found = True
            if c == 0:
                break
    if not found:
        return 1, nodes
    while True:
        if cand != _ZERO:
            r = _ctz(cand)
            bit = _ONE << np.uint64(r)
            st_ones[sp] = ones
            st_forb[sp] = forb
            st_rem[sp] = cand & (cand - _ONE)
            sp += 1
            ones |= bit
            forb |= adj[r] | bit
            nodes += 1
            if nodes > node_budget:
                return -1, nodes
            cand = _ZERO
            best_cnt = int64(1 << 40)
            found = False
            for t in range(nb):
                if (sub_masks[t] & ones) != _ZERO:
                    continue
                c0 = sub_masks[t] & ~forb
                c = int64(_popcount(c0))
                if c < best_cnt:
                    best_cnt = c
                    cand = c0
                    found = True
                    if c == 0:
                        break
            if not found:
                return 1, nodes
        else:
            if sp == 0:
                return 0, nodes
            sp -= 1
            ones = st_ones[sp]
            forb = st_forb[sp]
            cand = st_rem[sp]


@njit(cache=True)
def sweep_parity_census(kb_lo, kb_hi, col_ray_mask, col_rays, nrays,
                        s_lo, s_hi, node_budget,
                        out_lo, out_hi, out_key, unres_lo, unres_hi):
    """Gray-code sweep over kernel combinations in index range [s_lo, s_hi).

    Candidate s is the XOR of kernel basis vectors selected by bits of
    gray(s) = s ^ (s >> 1); vectors are column bitmasks (2 words).  For
    each odd-size candidate the sweep tests irreducibility (exactly one
    dependent column during GF(2) column elimination over ray masks) and
    then basis-criticality: every single-column drop must be colorable,
    with orthogonality constraints taken from the reduced collection's
    own co-occurrence relation (rays adjacent when they share a kept
    column).

    Critical candidates append (mask_lo, mask_hi, key) records where key
    packs the multiplicity histogram (counts of multiplicity 2,4,..,12
    in bits 0..47), the column count in bits 48..55, and bit 63 as an
    overflow flag for multiplicities beyond 12.  Unresolved candidates
    (solver timeout, no refuting drop) append their masks separately.

    Returns (n_out, n_unres, odd, irreducible, critical, unresolved,
    overflowed).
    """
    d = kb_lo.shape[0]
    cols = np.empty(128, np.int64)
    piv_vec = np.empty(128, np.uint64)
    piv_of = np.empty(64, np.int64)
    mult = np.zeros(64, np.uint8)
    sub_masks = np.empty(128, np.uint64)
    st_ones = np.empty(129, np.uint64)
    st_forb = np.empty(129, np.uint64)
    st_rem = np.empty(129, np.uint64)
    wadj = np.empty(64, np.uint64)

    n_out = 0
    n_unres = 0
    n_odd = int64(0)
    n_irr = int64(0)
    n_crit = int64(0)
    n_unresolved = int64(0)
    n_over = int64(0)

    # state at s_lo: XOR of kernel vectors selected by gray(s_lo)
    cur_lo = _ZERO
    cur_hi = _ZERO
    g = np.uint64(s_lo) ^ (np.uint64(s_lo) >> _ONE)
    for t in range(d):
        if (g >> np.uint64(t)) & _ONE:
            cur_lo ^= kb_lo[t]
            cur_hi ^= kb_hi[t]

    for s in range(s_lo, s_hi):
        if s > s_lo:
            flip = _ctz(np.uint64(s))
            cur_lo ^= kb_lo[flip]
            cur_hi ^= kb_hi[flip]
        w = int64(_popcount(cur_lo)) + int64(_popcount(cur_hi))
        if w & 1 == 0 or w == 0:
            continue
        n_odd += 1

        # unpack chosen column indices
        nc = 0
        m = cur_lo
        while m != _ZERO:
            cols[nc] = _ctz(m)
            m &= m - _ONE
            nc += 1
        m = cur_hi
        while m != _ZERO:
            cols[nc] = 64 + _ctz(m)
            m &= m - _ONE
            nc += 1

        # irreducibility: column elimination over ray masks; the
        # candidate is irreducible iff exactly one column is dependent.
        # Reduce on the current lowest set bit each step: the XOR only
        # touches that bit and higher ones, so the loop terminates with
        # either zero or a fresh pivot bit.
        np_piv = 0
        zeros = 0
        for t in range(nrays):
            piv_of[t] = -1
        for ci in range(nc):
            v = col_ray_mask[cols[ci]]
            while v != _ZERO:
                pj = piv_of[_ctz(v)]
                if pj < 0:
                    break
                v ^= piv_vec[pj]
            if v == _ZERO:
                zeros += 1
                if zeros >= 2:
                    break
            else:
                piv_vec[np_piv] = v
                piv_of[_ctz(v)] = np_piv
                np_piv += 1
        if zeros != 1:
            continue
        n_irr += 1

        # scope and multiplicities
        scope = _ZERO
        for ci in range(nc):
            scope |= col_ray_mask[cols[ci]]
        for t in range(nrays):
            mult[t] = 0
        for ci in range(nc):
            c = cols[ci]
            for t in range(8):
                mult[col_rays[c, t]] += 1

        # criticality: every single-column drop must be colorable under
        # the kept columns' own co-occurrence adjacency
        critical = True
        timed_out = False
        for drop in range(nc):
            nb = 0
            for t in range(nrays):
                wadj[t] = _ZERO
            for ci in range(nc):
                if ci != drop:
                    cm = col_ray_mask[cols[ci]]
                    sub_masks[nb] = cm
                    nb += 1
                    for t in range(8):
                        r = col_rays[cols[ci], t]
                        wadj[r] |= cm & ~(_ONE << np.uint64(r))
            status, _nodes = _solve_family(sub_masks, nb, wadj,
                                           node_budget, st_ones, st_forb, st_rem)
            if status == 0:
                critical = False
                timed_out = False
                break
            if status == -1:
                timed_out = True
        if timed_out:
            n_unresolved += 1
            if n_unres < unres_lo.shape[0]:
                unres_lo[n_unres] = cur_lo
                unres_hi[n_unres] = cur_hi
                n_unres += 1
            continue
        if not critical:
            continue
        n_crit += 1

        # histogram key
        key = np.uint64(nc) << np.uint64(48)
        over = False
        mm = scope
        while mm != _ZERO:
            t = _ctz(mm)
            mm &= mm - _ONE
            mv = int64(mult[t])
            if mv > 12:
                over = True
            else:
                slot = np.uint64((mv >> 1) - 1)
                key += _ONE << (np.uint64(8) * slot)
        if over:
            key |= _ONE << np.uint64(63)
            n_over += 1
        out_lo[n_out] = cur_lo
        out_hi[n_out] = cur_hi
        out_key[n_out] = key
        n_out += 1

    return n_out, n_unres, n_odd, n_irr, n_crit, n_unresolved, n_over
