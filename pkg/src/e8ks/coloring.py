"""Noncontextual 0/1 colorings of basis collections.

An assignment gives every ray in scope (the union of the bases) a 0 or
a 1.  Validity has two clauses: every basis contains exactly one ray
valued 1, and no two orthogonal rays are both valued 1.  Strict mode
enforces the second clause across the whole scope; weak mode only
within bases, where it is implied by the first clause.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ._backend import kernels
from .errors import TimeoutExceeded
from .structure import OrthogonalityGraph

Mode = Literal["strict", "weak"]

DEFAULT_NODE_BUDGET = 10_000_000

__all__ = [
    "Mode",
    "DEFAULT_NODE_BUDGET",
    "Assignment",
    "colorable",
    "verify_assignment",
    "brute_force_colorable",
]


@dataclass(frozen=True)
class Assignment:
    """A 0/1 valuation of the rays in scope; `ones` holds the 1s."""

    ones: frozenset[int]
    scope: tuple[int, ...]

    def value(self, ray: int) -> int:
        if ray not in self.scope:
            raise KeyError(f"ray {ray} outside assignment scope")
        return 1 if ray in self.ones else 0

    def as_dict(self) -> dict[int, int]:
        return {i: (1 if i in self.ones else 0) for i in self.scope}


def _instance(bases, graph: OrthogonalityGraph, mode: Mode):
    """Local bitset encoding: scope rays, basis masks, adjacency masks."""
    canon = [tuple(sorted(b)) for b in bases]
    scope = tuple(sorted({i for b in canon for i in b}))
    pos = {ray: k for k, ray in enumerate(scope)}
    basis_masks = []
    for b in canon:
        m = 0
        for i in b:
            m |= 1 << pos[i]
        basis_masks.append(m)
    adj = [0] * len(scope)
    if mode == "strict":
        for a_i, ray_i in enumerate(scope):
            for a_j in range(a_i + 1, len(scope)):
                if graph.are_orthogonal(ray_i, scope[a_j]):
                    adj[a_i] |= 1 << a_j
                    adj[a_j] |= 1 << a_i
    elif mode == "weak":
        for m in basis_masks:
            rest = m
            while rest:
                bit = rest & -rest
                rest ^= bit
                k = bit.bit_length() - 1
                adj[k] |= m & ~bit
    else:
        raise ValueError(f"mode must be 'strict' or 'weak', got {mode!r}")
    return scope, basis_masks, adj


def _split(values: list[int]) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([v & 0xFFFFFFFFFFFFFFFF for v in values], dtype=np.uint64)
    hi = np.array([v >> 64 for v in values], dtype=np.uint64)
    return lo, hi


def colorable(
    bases,
    graph: OrthogonalityGraph,
    mode: Mode = "strict",
    node_budget: int = DEFAULT_NODE_BUDGET,
    backend: str | None = None,
) -> Assignment | None:
    """Search for a valid assignment; None when provably none exists.

    Raises TimeoutExceeded (with the node count) when the backtracking
    budget runs out before a verdict.
    """
    scope, basis_masks, adj = _instance(bases, graph, mode)
    if len(scope) > 128:
        raise ValueError(f"scope of {len(scope)} rays exceeds the 128-ray solver limit")
    kern = kernels(backend)
    basis_lo, basis_hi = _split(basis_masks)
    adj_lo, adj_hi = _split(adj)
    status, ones_lo, ones_hi, nodes = kern.solve_coloring(
        basis_lo, basis_hi, adj_lo, adj_hi, node_budget
    )
    if status == -1:
        raise TimeoutExceeded(int(nodes))
    if status == 0:
        return None
    ones = int(ones_lo) | (int(ones_hi) << 64)
    chosen = frozenset(scope[k] for k in range(len(scope)) if (ones >> k) & 1)
    return Assignment(chosen, scope)


def verify_assignment(
    assignment: Assignment,
    bases,
    graph: OrthogonalityGraph,
    mode: Mode = "strict",
) -> bool:
    """Re-check both validity clauses from scratch."""
    scope_set = set(assignment.scope)
    for b in bases:
        if not set(b) <= scope_set:
            return False
        if sum(1 for i in b if i in assignment.ones) != 1:
            return False
    if mode == "strict":
        ones = sorted(assignment.ones)
        for x, i in enumerate(ones):
            for j in ones[x + 1 :]:
                if graph.are_orthogonal(i, j):
                    return False
    return True


def brute_force_colorable(
    bases,
    graph: OrthogonalityGraph,
    mode: Mode = "strict",
) -> Assignment | None:
    """Exhaustive reference oracle over all 2^n scope subsets (n <= 22)."""
    scope, basis_masks, adj = _instance(bases, graph, mode)
    n = len(scope)
    if n > 22:
        raise ValueError(f"brute force limited to 22 rays, got {n}")
    count = 1 << n
    sel = np.arange(count, dtype=np.uint32)
    bits = ((sel[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(np.uint8)
    valid = np.ones(count, dtype=bool)
    for m in basis_masks:
        idx = [k for k in range(n) if (m >> k) & 1]
        valid &= bits[:, idx].sum(axis=1) == 1
    adj_mat = np.zeros((n, n), dtype=np.uint8)
    for k in range(n):
        for j in range(n):
            if (adj[k] >> j) & 1:
                adj_mat[k, j] = 1
    pair_hits = (bits @ adj_mat).astype(np.int32)
    valid &= (pair_hits * bits).sum(axis=1) == 0
    hits = np.flatnonzero(valid)
    if hits.size == 0:
        return None
    first = int(hits[0])
    ones = frozenset(scope[k] for k in range(n) if (first >> k) & 1)
    return Assignment(ones, scope)
