"""Orthogonality graph, basis enumeration, and occupation symbols.

Two rays are orthogonal when their inner product vanishes; the graph on
ray ids with those edges is 63-regular, and its 2025 maximum cliques of
size 8 are the complete orthogonal bases of the system.
"""
from __future__ import annotations

import hashlib
import re
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import kernels
from .errors import DegreeAnomaly
from .rays import N_RAYS, RaySystem

Basis = tuple[int, ...]

EXPECTED_DEGREE = 63
N_BASES = 2025
BASIS_SIZE = 8

__all__ = [
    "Basis",
    "EXPECTED_DEGREE",
    "N_BASES",
    "BASIS_SIZE",
    "OrthogonalityGraph",
    "BasisTable",
    "SystemSymbol",
    "build_graph",
    "enumerate_bases",
    "check_saturation",
    "pair_occurrence_counts",
    "system_symbol",
    "parse_symbol",
    "pack_masks",
    "table_checksum",
    "save_table",
    "load_table",
]


def pack_masks(adjacency: np.ndarray) -> np.ndarray:
    """Pack boolean rows into little-endian uint64 words, 2 per row."""
    n = adjacency.shape[0]
    nwords = (n + 63) // 64
    out = np.zeros((adjacency.shape[0], max(nwords, 2)), dtype=np.uint64)
    for i in range(adjacency.shape[0]):
        for j in np.flatnonzero(adjacency[i]):
            out[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
    return out


class OrthogonalityGraph:
    """Orthogonality relation on the 120 rays at a fixed threshold."""

    def __init__(self, adjacency: np.ndarray, threshold: float):
        self.adjacency = adjacency
        self.adjacency.setflags(write=False)
        self.threshold = threshold
        self.masks = pack_masks(adjacency)
        self.masks.setflags(write=False)

    def are_orthogonal(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i - 1, j - 1])

    def neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(int(j) + 1 for j in np.flatnonzero(self.adjacency[i - 1]))

    def degree(self, i: int) -> int:
        return int(self.adjacency[i - 1].sum())


def build_graph(system: RaySystem, threshold: float = 1e-9) -> OrthogonalityGraph:
    """Adjacency from |<i|j>| <= threshold; demands 63-regularity.

    The threshold must fall inside (0, 0.25): the nonzero overlaps all
    have magnitude 1/2, so any cut below that separates cleanly.
    """
    if not 0.0 < threshold < 0.25:
        raise ValueError(f"threshold must lie in (0, 0.25), got {threshold}")
    adjacency = np.abs(system.gram) <= threshold
    np.fill_diagonal(adjacency, False)
    degrees = adjacency.sum(axis=1)
    if not (degrees == EXPECTED_DEGREE).all():
        bad = {int(i) + 1: int(d) for i, d in enumerate(degrees) if d != EXPECTED_DEGREE}
        raise DegreeAnomaly(f"expected degree {EXPECTED_DEGREE} everywhere, got {bad}")
    return OrthogonalityGraph(adjacency, threshold)


class BasisTable:
    """Sorted collection of bases with per-ray membership index."""

    def __init__(self, bases: Iterable[Sequence[int]]):
        canon = sorted(tuple(sorted(int(x) for x in b)) for b in bases)
        for b in canon:
            if len(set(b)) != len(b):
                raise ValueError(f"repeated ray in basis {b}")
            if b[0] < 1 or b[-1] > N_RAYS:
                raise ValueError(f"ray id out of range in basis {b}")
        if len(set(canon)) != len(canon):
            raise ValueError("duplicate bases")
        self.bases: tuple[Basis, ...] = tuple(canon)
        self._pos: dict[Basis, int] = {b: k for k, b in enumerate(self.bases)}
        by_ray: dict[int, list[int]] = defaultdict(list)
        for k, b in enumerate(self.bases):
            for i in b:
                by_ray[i].append(k)
        self._by_ray = {i: tuple(v) for i, v in by_ray.items()}

    def __len__(self) -> int:
        return len(self.bases)

    def __iter__(self):
        return iter(self.bases)

    def __contains__(self, basis: Sequence[int]) -> bool:
        return tuple(sorted(basis)) in self._pos

    def position(self, basis: Sequence[int]) -> int:
        return self._pos[tuple(sorted(basis))]

    def containing(self, ray: int) -> tuple[int, ...]:
        """Positions of all bases that contain the ray."""
        return self._by_ray.get(ray, ())

    def multiplicity(self, ray: int) -> int:
        return len(self._by_ray.get(ray, ()))

    def as_array(self) -> np.ndarray:
        """Bases as an (n, 8) int32 array of 1-based ids."""
        return np.array(self.bases, dtype=np.int32)


def enumerate_bases(graph: OrthogonalityGraph, backend: str | None = None) -> BasisTable:
    """All 8-cliques of the orthogonality graph, one basis each."""
    kern = kernels(backend)
    rows = kern.find_cliques(graph.masks, N_RAYS, BASIS_SIZE)
    return BasisTable([tuple(int(x) + 1 for x in row) for row in rows])


def pair_occurrence_counts(table: BasisTable) -> np.ndarray:
    """counts[i-1, j-1] = number of bases containing both rays i and j."""
    counts = np.zeros((N_RAYS, N_RAYS), dtype=np.int32)
    for basis in table:
        idx = np.array(basis, dtype=np.intp) - 1
        counts[np.ix_(idx, idx)] += 1
    np.fill_diagonal(counts, 0)
    return counts


def check_saturation(table: BasisTable, graph: OrthogonalityGraph) -> bool:
    """True when every orthogonal pair lies in at least one common basis."""
    counts = pair_occurrence_counts(table)
    return bool((counts[graph.adjacency] >= 1).all())


@dataclass(frozen=True)
class SystemSymbol:
    """Occupation symbol: ray classes by multiplicity, basis classes by size.

    ray_classes is a tuple of (count, multiplicity) sorted by descending
    multiplicity; basis_classes is a tuple of (count, size) sorted by
    descending count.  Rendered like `15_4 30_2-15_8`.
    """

    ray_classes: tuple[tuple[int, int], ...]
    basis_classes: tuple[tuple[int, int], ...]

    @property
    def n_bases(self) -> int:
        return sum(c for c, _ in self.basis_classes)

    @property
    def n_rays(self) -> int:
        return sum(c for c, _ in self.ray_classes)

    @property
    def balanced(self) -> bool:
        """Both halves must count the same incidences."""
        rays = sum(c * m for c, m in self.ray_classes)
        bases = sum(c * s for c, s in self.basis_classes)
        return rays == bases

    @property
    def text(self) -> str:
        left = " ".join(f"{c}_{m}" for c, m in self.ray_classes)
        right = " ".join(f"{c}_{s}" for c, s in self.basis_classes)
        return f"{left}-{right}"

    def __str__(self) -> str:
        return self.text


def system_symbol(bases: Iterable[Sequence[int]]) -> SystemSymbol:
    """Occupation symbol of any finite basis collection."""
    mult: Counter[int] = Counter()
    sizes: Counter[int] = Counter()
    for b in bases:
        sizes[len(b)] += 1
        for i in b:
            mult[i] += 1
    ray_hist: Counter[int] = Counter(mult.values())
    ray_classes = tuple(sorted(((c, m) for m, c in ray_hist.items()), key=lambda t: -t[1]))
    basis_classes = tuple(sorted(((c, s) for s, c in sizes.items()), key=lambda t: (-t[0], -t[1])))
    return SystemSymbol(ray_classes, basis_classes)


_SYMBOL_PART = re.compile(r"^(\d+)_(\d+)$")


def parse_symbol(text: str) -> SystemSymbol:
    """Parse `15_4 30_2-15_8` into a canonical SystemSymbol."""
    try:
        left, right = text.split("-")
    except ValueError:
        raise ValueError(f"symbol needs exactly one '-': {text!r}") from None

    def _parts(chunk: str) -> list[tuple[int, int]]:
        out = []
        for piece in chunk.split():
            m = _SYMBOL_PART.match(piece)
            if not m:
                raise ValueError(f"bad symbol component {piece!r} in {text!r}")
            out.append((int(m.group(1)), int(m.group(2))))
        if not out:
            raise ValueError(f"empty symbol side in {text!r}")
        return out

    ray_classes = tuple(sorted(_parts(left), key=lambda t: -t[1]))
    basis_classes = tuple(sorted(_parts(right), key=lambda t: (-t[0], -t[1])))
    return SystemSymbol(ray_classes, basis_classes)


def table_checksum(system: RaySystem, threshold: float) -> str:
    """Hash of the inputs that determine the basis table."""
    h = hashlib.sha256()
    h.update(threshold.hex().encode())
    h.update(system.coords.tobytes())
    return h.hexdigest()


def save_table(table: BasisTable, path: str | Path, checksum: str) -> None:
    """One basis per line, ascending ids, with a counted header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# rays={N_RAYS} bases={len(table)} checksum={checksum}\n")
        for basis in table:
            fh.write(" ".join(str(i) for i in basis) + "\n")


def load_table(path: str | Path, checksum: str | None = None) -> BasisTable | None:
    """Read a cached table; None when absent or stale."""
    path = Path(path)
    if not path.is_file():
        return None
    with open(path) as fh:
        header = fh.readline().strip()
        m = re.match(r"# rays=(\d+) bases=(\d+) checksum=(\S+)$", header)
        if not m:
            raise ValueError(f"malformed table header in {path}: {header!r}")
        if checksum is not None and m.group(3) != checksum:
            return None
        declared = int(m.group(2))
        bases = []
        for line in fh:
            line = line.strip()
            if line:
                bases.append(tuple(int(tok) for tok in line.split()))
    if len(bases) != declared:
        raise ValueError(f"table in {path} declares {declared} bases, has {len(bases)}")
    return BasisTable(bases)
