"""Symmetries of the ray system and the three-index basis labels.

Three generators drive the label axes: a row shift U-style permutation
of order 15 read off the seed-block columns, a block rotation of order
9, and a band shift of order 15 that advances every ray one step along
its band.  basis(n, m, l) = band_shift^n block_rotation^m row_shift^l
applied to the seed basis.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from itertools import permutations
from math import gcd
from pathlib import Path

import numpy as np

from ._backend import kernels
from .errors import CollisionError, FixtureCorrupt, RealizationMismatch
from .rays import N_RAYS, RaySystem
from .structure import Basis, BasisTable, OrthogonalityGraph

__all__ = [
    "RayPermutation",
    "GeneratorSet",
    "LabeledTable",
    "OrthogonalMap",
    "parse_cycles",
    "fixture_permutations",
    "load_seed_block",
    "derive_row_shift",
    "load_generators",
    "generate_labeled_table",
    "export_labeled_csv",
    "matrix_fixtures",
    "perm_from_matrix",
    "ordered_basis_map",
    "count_basis_symmetries",
    "symmetry_group_order",
    "SIGN_CHOICES",
]

# sign patterns available on top of each counted ordering
SIGN_CHOICES = 256


@dataclass(frozen=True)
class RayPermutation:
    """Permutation of ray ids 1..120; image[0] is unused padding."""

    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != N_RAYS + 1 or self.image[0] != 0:
            raise ValueError("image must have length 121 with image[0] == 0")
        if sorted(self.image[1:]) != list(range(1, N_RAYS + 1)):
            raise ValueError("image is not a permutation of 1..120")

    @classmethod
    def identity(cls) -> RayPermutation:
        return cls(tuple(range(N_RAYS + 1)))

    @classmethod
    def from_cycles(cls, cycles) -> RayPermutation:
        image = list(range(N_RAYS + 1))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for i in cyc:
                if not 1 <= i <= N_RAYS:
                    raise ValueError(f"ray id out of range in cycle: {i}")
                if i in seen:
                    raise ValueError(f"ray {i} appears in two cycles")
                seen.add(i)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                image[a] = b
        return cls(tuple(image))

    def __call__(self, i: int) -> int:
        return self.image[i]

    def apply_basis(self, basis) -> Basis:
        return tuple(sorted(self.image[i] for i in basis))

    def compose(self, other: RayPermutation) -> RayPermutation:
        """(self.compose(other))(i) == self(other(i))."""
        img = self.image
        return RayPermutation(tuple(img[j] for j in other.image))

    def __mul__(self, other: RayPermutation) -> RayPermutation:
        return self.compose(other)

    def power(self, k: int) -> RayPermutation:
        k %= self.order
        result = RayPermutation.identity()
        base = self
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def inverse(self) -> RayPermutation:
        inv = [0] * (N_RAYS + 1)
        for i, j in enumerate(self.image):
            inv[j] = i
        inv[0] = 0
        return RayPermutation(tuple(inv))

    @property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each starting at its least element."""
        seen = [False] * (N_RAYS + 1)
        out = []
        for start in range(1, N_RAYS + 1):
            if seen[start] or self.image[start] == start:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j]
            out.append(tuple(cyc))
        return tuple(out)

    @property
    def order(self) -> int:
        n = 1
        for cyc in self.cycles:
            n = n * len(cyc) // gcd(n, len(cyc))
        return n

    def is_automorphism(self, graph: OrthogonalityGraph) -> bool:
        p = np.array(self.image[1:], dtype=np.intp) - 1
        return bool((graph.adjacency[np.ix_(p, p)] == graph.adjacency).all())


def parse_cycles(text: str) -> RayPermutation:
    """One cycle per line of space-separated ids; # starts a comment."""
    cycles = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            cycles.append([int(tok) for tok in line.split()])
    return RayPermutation.from_cycles(cycles)


def _data_text(name: str) -> str:
    return resources.files("e8ks.data").joinpath(name).read_text()


def fixture_permutations(
    graph: OrthogonalityGraph | None = None,
) -> tuple[RayPermutation, RayPermutation]:
    """Load the order-9 block rotation and order-15 band shift.

    Validates cycle structure and expected orders; with a graph, also
    that both are automorphisms.  Raises FixtureCorrupt otherwise.
    """
    try:
        block_rotation = parse_cycles(_data_text("block_rotation_cycles.txt"))
        band_shift = parse_cycles(_data_text("band_shift_cycles.txt"))
    except ValueError as exc:
        raise FixtureCorrupt(str(exc)) from exc
    if block_rotation.order != 9:
        raise FixtureCorrupt(f"block rotation has order {block_rotation.order}, want 9")
    if band_shift.order != 15:
        raise FixtureCorrupt(f"band shift has order {band_shift.order}, want 15")
    if graph is not None:
        for name, perm in (("block rotation", block_rotation), ("band shift", band_shift)):
            if not perm.is_automorphism(graph):
                raise FixtureCorrupt(f"{name} does not preserve orthogonality")
    return block_rotation, band_shift


def load_seed_block(graph: OrthogonalityGraph | None = None) -> tuple[tuple[int, ...], ...]:
    """The fifteen seed bases in printed row and column order.

    Every ray must appear exactly once across the block; with a graph,
    each row must be mutually orthogonal.
    """
    rows = []
    for line in _data_text("seed_block.txt").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(tuple(int(tok) for tok in line.split()))
    if len(rows) != 15 or any(len(r) != 8 for r in rows):
        raise FixtureCorrupt("seed block must be 15 rows of 8 rays")
    flat = [i for r in rows for i in r]
    if sorted(flat) != list(range(1, N_RAYS + 1)):
        raise FixtureCorrupt("seed block must use each of rays 1..120 once")
    if graph is not None:
        for row in rows:
            for a in range(8):
                for b in range(a + 1, 8):
                    if not graph.are_orthogonal(row[a], row[b]):
                        raise FixtureCorrupt(f"seed row {row} is not mutually orthogonal")
    return tuple(rows)


def derive_row_shift(seed_block) -> RayPermutation:
    """Order-15 permutation read down the eight seed-block columns.

    Column c, read top to bottom, is one cycle: the entry in row l maps
    to the entry in row l + 1 (mod 15).
    """
    columns = [[row[c] for row in seed_block] for c in range(8)]
    try:
        perm = RayPermutation.from_cycles(columns)
    except ValueError as exc:
        raise FixtureCorrupt(f"seed-block columns do not form disjoint cycles: {exc}") from exc
    if perm.order != 15:
        raise FixtureCorrupt(f"row shift has order {perm.order}, want 15")
    return perm


@dataclass(frozen=True)
class GeneratorSet:
    """The three label-axis generators."""

    row_shift: RayPermutation
    block_rotation: RayPermutation
    band_shift: RayPermutation
    seed_block: tuple[tuple[int, ...], ...]

    @property
    def seed_basis(self) -> Basis:
        return tuple(sorted(self.seed_block[0]))


def load_generators(graph: OrthogonalityGraph | None = None) -> GeneratorSet:
    block_rotation, band_shift = fixture_permutations(graph)
    seed_block = load_seed_block(graph)
    row_shift = derive_row_shift(seed_block)
    if graph is not None and not row_shift.is_automorphism(graph):
        raise FixtureCorrupt("row shift does not preserve orthogonality")
    return GeneratorSet(row_shift, block_rotation, band_shift, seed_block)


class LabeledTable:
    """Bases indexed by their (n, m, l) labels."""

    def __init__(self, labels: dict[tuple[int, int, int], Basis]):
        self.labels = labels
        self.by_basis: dict[Basis, tuple[int, int, int]] = {}
        for lab, basis in labels.items():
            if basis in self.by_basis:
                raise CollisionError(
                    f"labels {self.by_basis[basis]} and {lab} generate the same basis {basis}"
                )
            self.by_basis[basis] = lab

    def __len__(self) -> int:
        return len(self.labels)

    def of_label(self, n: int, m: int, l: int) -> Basis:
        return self.labels[(n, m, l)]

    def label_of(self, basis) -> tuple[int, int, int]:
        return self.by_basis[tuple(sorted(basis))]

    def basis_set(self) -> set[Basis]:
        return set(self.labels.values())


def generate_labeled_table(generators: GeneratorSet) -> LabeledTable:
    """All 2025 bases as band_shift^n block_rotation^m row_shift^l (seed)."""
    seed = generators.seed_basis
    labels: dict[tuple[int, int, int], Basis] = {}
    level_l = [seed]
    for _ in range(14):
        level_l.append(generators.row_shift.apply_basis(level_l[-1]))
    for l, basis_l in enumerate(level_l):
        level_m = [basis_l]
        for _ in range(8):
            level_m.append(generators.block_rotation.apply_basis(level_m[-1]))
        for m, basis_m in enumerate(level_m):
            basis_n = basis_m
            labels[(0, m, l)] = basis_n
            for n in range(1, 15):
                basis_n = generators.band_shift.apply_basis(basis_n)
                labels[(n, m, l)] = basis_n
    return LabeledTable(labels)


def export_labeled_csv(labeled: LabeledTable, path: str | Path) -> None:
    """Rows n,m,l,id1..id8 with ascending ray ids, labels in lex order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "l"] + [f"id{k}" for k in range(1, 9)])
        for (n, m, l) in sorted(labeled.labels):
            writer.writerow([n, m, l] + list(labeled.labels[(n, m, l)]))


# Matrix fixtures: signed outer products |image><source| over the rays
# of the seed basis.  Each realizes the like-named ray permutation.
_MATRIX_TERMS: dict[str, tuple[tuple[int, int, int], ...]] = {
    "row_shift": (
        (29, 1, -1), (115, 7, -1), (33, 62, -1), (11, 66, +1),
        (74, 70, +1), (61, 73, +1), (5, 107, -1), (52, 111, -1),
    ),
    "block_rotation": (
        (5, 1, +1), (14, 7, +1), (50, 62, -1), (31, 66, -1),
        (22, 70, -1), (20, 73, -1), (85, 107, -1), (65, 111, +1),
    ),
    "band_shift": (
        (2, 1, +1), (8, 7, +1), (63, 62, +1), (67, 66, +1),
        (71, 70, +1), (74, 73, +1), (108, 107, +1), (112, 111, +1),
    ),
}


@dataclass(frozen=True)
class OrthogonalMap:
    """An orthogonal 8x8 matrix together with the ray action it induces."""

    matrix: np.ndarray
    permutation: RayPermutation
    signs: tuple[int, ...]  # sign picked up by each ray, indexed 1..120 (entry 0 unused)


def perm_from_matrix(system: RaySystem, matrix: np.ndarray, tol: float = 1e-8):
    """Ray permutation induced by an orthogonal matrix.

    Each transformed ray must land on some ray up to sign within tol
    (max-norm); otherwise RealizationMismatch.
    """
    transformed = system.coords @ matrix.T
    overlaps = transformed @ system.coords.T
    image = [0]
    signs = [0]
    for i in range(N_RAYS):
        j = int(np.argmax(np.abs(overlaps[i])))
        sign = 1 if overlaps[i, j] > 0 else -1
        residual = np.abs(transformed[i] - sign * system.coords[j]).max()
        if residual > tol:
            raise RealizationMismatch(
                f"ray {i + 1} maps {residual:.3e} away from ray {j + 1}"
            )
        image.append(j + 1)
        signs.append(sign)
    if sorted(image[1:]) != list(range(1, N_RAYS + 1)):
        raise RealizationMismatch("matrix action is not a bijection on rays")
    return RayPermutation(tuple(image)), tuple(signs)


def matrix_fixtures(
    system: RaySystem,
    generators: GeneratorSet | None = None,
    tol: float = 1e-8,
) -> dict[str, OrthogonalMap]:
    """Build the three generator matrices and their induced ray actions.

    With a GeneratorSet, checks each induced permutation against the
    like-named fixture permutation (RealizationMismatch on a clash).
    """
    out: dict[str, OrthogonalMap] = {}
    for name, terms in _MATRIX_TERMS.items():
        matrix = np.zeros((8, 8))
        for img, src, sign in terms:
            matrix += sign * np.outer(system.vector(img), system.vector(src))
        if np.abs(matrix @ matrix.T - np.eye(8)).max() > 1e-10:
            raise RealizationMismatch(f"{name} matrix is not orthogonal")
        perm, signs = perm_from_matrix(system, matrix, tol)
        out[name] = OrthogonalMap(matrix, perm, signs)
    if generators is not None:
        expected = {
            "row_shift": generators.row_shift,
            "block_rotation": generators.block_rotation,
            "band_shift": generators.band_shift,
        }
        for name, omap in out.items():
            if omap.permutation.image != expected[name].image:
                raise RealizationMismatch(f"{name} matrix realizes the wrong permutation")
    return out


def ordered_basis_map(system: RaySystem, source, target, signs=None) -> np.ndarray:
    """Matrix sum_k signs[k] |target[k]><source[k]| for ordered bases."""
    if signs is None:
        signs = (1,) * len(source)
    matrix = np.zeros((8, 8))
    for src, tgt, sign in zip(source, target, signs):
        matrix += sign * np.outer(system.vector(tgt), system.vector(src))
    return matrix


def count_basis_symmetries(
    system: RaySystem,
    fixed,
    target,
    tol: float = 1e-6,
    backend: str | None = None,
) -> int:
    """Count orderings of `target` whose basis map is a ray symmetry.

    Sweeps all 8! orderings of the target basis against the fixed
    source ordering (all signs +1; sign choices never affect whether
    rays land on rays, so the symmetry count per ordering is exactly
    SIGN_CHOICES).
    """
    src = np.array([system.vector(i) for i in fixed])
    tgt = np.array([system.vector(i) for i in target])
    cx = system.coords @ src.T  # (120, 8): rays in the source frame
    cy = tgt @ system.coords.T  # (8, 120): target vectors against rays
    perms = np.array(list(permutations(range(8))), dtype=np.int64)
    kern = kernels(backend)
    return int(kern.count_ordering_symmetries(cx, cy, perms, tol))


def symmetry_group_order(
    system: RaySystem,
    table: BasisTable,
    fixed=None,
    tol: float = 1e-6,
    backend: str | None = None,
) -> int:
    """Order of the ray-symmetry group: bases x orderings x signs.

    The group acts transitively on bases, so the order is the table
    size times the number of symmetries fixing one basis setwise, the
    latter being the measured ordering count times SIGN_CHOICES.
    """
    basis = tuple(fixed) if fixed is not None else table.bases[0]
    orderings = count_basis_symmetries(system, basis, basis, tol, backend)
    return len(table) * orderings * SIGN_CHOICES
