"""GF(2) linear algebra on columns stored as python-int bitsets.

A matrix is a sequence of columns; column j is an int whose bit k is
the entry in row k.  Arbitrary-precision ints keep this exact for any
row count, and XOR is the whole arithmetic.
"""
from __future__ import annotations

from collections.abc import Sequence

__all__ = ["rank", "nullspace", "popcount"]


def popcount(x: int) -> int:
    return x.bit_count()


def rank(columns: Sequence[int]) -> int:
    """Rank of the column collection."""
    pivots: dict[int, int] = {}
    rk = 0
    for v in columns:
        while v:
            low = v & -v
            pv = pivots.get(low)
            if pv is None:
                pivots[low] = v
                rk += 1
                break
            v ^= pv
    return rk


def nullspace(columns: Sequence[int]) -> list[int]:
    """Kernel basis of the matrix, as bitmasks over column indices.

    Gaussian elimination over the columns in their given order, with
    combination tracking.  Each returned mask x satisfies
    XOR of columns[j] for bits j of x == 0, and the masks are
    linearly independent (each introduces a new highest column index).
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for j, v in enumerate(columns):
        comb = 1 << j
        while v:
            low = v & -v
            hit = pivots.get(low)
            if hit is None:
                break
            v ^= hit[0]
            comb ^= hit[1]
        if v:
            pivots[v & -v] = (v, comb)
        else:
            kernel.append(comb)
    return kernel
