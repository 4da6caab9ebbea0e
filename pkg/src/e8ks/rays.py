"""Construction of the 120 rays spanned by the E8 root system.

The 240 roots of E8 fall into 120 antipodal pairs; one representative
per pair is a "ray".  In the triacontagonal coordinatization used here
every ray is written as four complex numbers r * omega^k with
omega = exp(i*pi/30), and its real 8-vector is the (Re, Im) expansion
of those four components in order.  Rays are numbered 1..120 and split
into eight bands of fifteen (band letters A..H); plotted in the complex
plane the fifteen rays of a band trace a regular triacontagon.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from math import cos, pi, sin, sqrt
from pathlib import Path

import numpy as np

N_RAYS = 120

__all__ = [
    "N_RAYS",
    "AlgebraicConstants",
    "Ray",
    "RaySystem",
    "build_constants",
    "build_rays",
    "chord",
    "inner_product",
    "export_rays_csv",
    "export_gram_csv",
]


def chord(n: int) -> float:
    """Chord length 2*cos(n*pi/30) subtended in the regular triacontagon."""
    return 2.0 * cos(n * pi / 30.0)


@dataclass(frozen=True)
class AlgebraicConstants:
    """The closed-form lengths entering the ray coordinates.

    a, b, c, d are the four base amplitudes; radial[k] holds the radius
    r_k for k = 1..8, which is a..d divided by chord(9) for k <= 4 and
    by chord(3) for k >= 5 (radial[0] is unused padding).
    """

    tau: float
    a: float
    b: float
    c: float
    d: float
    radial: tuple[float, ...]


def build_constants() -> AlgebraicConstants:
    """Evaluate the amplitudes and radii in double precision.

    2a^2 = 1 + 3^(-1/2) 5^(-1/4) tau^(3/2)   (tau the golden ratio)
    2b^2 = 1 + 3^(-1/2) 5^(-1/4) tau^(-3/2)
    2c^2 = 1 - 3^(-1/2) 5^(-1/4) tau^(-3/2)
    2d^2 = 1 - 3^(-1/2) 5^(-1/4) tau^(3/2)

    so that a > b > c > d > 0 and a^2 + d^2 = b^2 + c^2 = 1.
    """
    tau = (1.0 + sqrt(5.0)) / 2.0
    f = 3.0 ** -0.5 * 5.0 ** -0.25
    a = sqrt((1.0 + f * tau ** 1.5) / 2.0)
    b = sqrt((1.0 + f * tau ** -1.5) / 2.0)
    c = sqrt((1.0 - f * tau ** -1.5) / 2.0)
    d = sqrt((1.0 - f * tau ** 1.5) / 2.0)
    c9 = chord(9)
    c3 = chord(3)
    radial = (0.0, a / c9, b / c9, c / c9, d / c9, a / c3, b / c3, c / c3, d / c3)
    return AlgebraicConstants(tau=tau, a=a, b=b, c=c, d=d, radial=radial)


# Component recipes per band letter.  Each entry is (sign, radius index,
# slope, intercept): the component is sign * r[idx] * omega^(slope*n + i),
# with n the formula parameter and exponents taken mod 60.  A ray's real
# coordinates are (Re, Im) of the four components in listed order.
_BAND_COMPONENTS: dict[str, tuple[tuple[int, int, int, int], ...]] = {
    "A": ((+1, 1, 2, 0), (+1, 4, 22, 0), (+1, 6, 14, 1), (+1, 7, 26, 1)),
    "B": ((+1, 4, 2, 0), (-1, 1, 22, 0), (+1, 7, 14, 1), (-1, 6, 26, 1)),
    "C": ((+1, 7, 2, 29), (-1, 6, 22, 19), (-1, 1, 14, 24), (+1, 4, 26, 18)),
    "D": ((+1, 6, 2, 29), (+1, 7, 22, 19), (+1, 4, 14, 24), (+1, 1, 26, 18)),
    "E": ((+1, 8, 2, 0), (-1, 5, 22, 0), (-1, 3, 14, 1), (+1, 2, 26, 1)),
    "F": ((+1, 5, 2, 0), (+1, 8, 22, 0), (-1, 2, 14, 1), (-1, 3, 26, 1)),
    "G": ((+1, 2, 2, 29), (+1, 3, 22, 19), (-1, 8, 14, 24), (-1, 5, 26, 18)),
    "H": ((+1, 3, 2, 29), (-1, 2, 22, 19), (+1, 5, 14, 24), (-1, 8, 26, 18)),
}

# The twelve id-range formulas: ray id = offset + n for n in n_lo..n_hi,
# components drawn from the named band recipe.  Bands C, D, G, H are
# each covered by two ranges whose n runs 8..14 then 0..7, so within
# those bands n = (position + 8) mod 15.
_FAMILY_RANGES: tuple[tuple[int, int, int, str], ...] = (
    (1, 0, 14, "A"),
    (16, 0, 14, "B"),
    (23, 8, 14, "C"),
    (38, 0, 7, "C"),
    (38, 8, 14, "D"),
    (53, 0, 7, "D"),
    (61, 0, 14, "E"),
    (76, 0, 14, "F"),
    (83, 8, 14, "G"),
    (98, 0, 7, "G"),
    (98, 8, 14, "H"),
    (113, 0, 7, "H"),
)


@dataclass(frozen=True)
class Ray:
    """A single ray: 1-based id plus its eight real coordinates."""

    ident: int
    coords: tuple[float, ...]


class RaySystem:
    """All 120 rays with their Gram matrix.

    coords[i - 1] is the unit vector of ray i; gram[i - 1, j - 1] is the
    exact floating-point inner product.
    """

    def __init__(self, coords: np.ndarray, constants: AlgebraicConstants):
        if coords.shape != (N_RAYS, 8):
            raise ValueError(f"expected (120, 8) coordinates, got {coords.shape}")
        self.constants = constants
        self.coords = coords
        self.coords.setflags(write=False)
        self.gram = coords @ coords.T
        self.gram.setflags(write=False)

    def vector(self, ident: int) -> np.ndarray:
        """Coordinate row of ray `ident` (1-based)."""
        if not 1 <= ident <= N_RAYS:
            raise ValueError(f"ray id out of range: {ident}")
        return self.coords[ident - 1]

    def ray(self, ident: int) -> Ray:
        return Ray(ident, tuple(self.vector(ident)))

    def inner(self, i: int, j: int) -> float:
        if not (1 <= i <= N_RAYS and 1 <= j <= N_RAYS):
            raise ValueError(f"ray id out of range: ({i}, {j})")
        return float(self.gram[i - 1, j - 1])


def build_rays(constants: AlgebraicConstants | None = None) -> RaySystem:
    """Evaluate all twelve formula ranges into a RaySystem."""
    consts = constants or build_constants()
    r = consts.radial
    coords = np.zeros((N_RAYS, 8))
    seen = np.zeros(N_RAYS, dtype=bool)
    for offset, n_lo, n_hi, band in _FAMILY_RANGES:
        recipe = _BAND_COMPONENTS[band]
        for n in range(n_lo, n_hi + 1):
            ident = offset + n
            if seen[ident - 1]:
                raise ValueError(f"ray {ident} produced by two formula ranges")
            seen[ident - 1] = True
            row = []
            for sign, idx, slope, icpt in recipe:
                angle = ((slope * n + icpt) % 60) * pi / 30.0
                row.append(sign * r[idx] * cos(angle))
                row.append(sign * r[idx] * sin(angle))
            coords[ident - 1] = row
    if not seen.all():
        missing = [i + 1 for i in np.flatnonzero(~seen)]
        raise ValueError(f"formula ranges left rays unassigned: {missing}")
    return RaySystem(coords, consts)


def inner_product(system: RaySystem, i: int, j: int) -> float:
    """Inner product of rays i and j (1-based ids)."""
    return system.inner(i, j)


def export_rays_csv(system: RaySystem, path: str | Path) -> None:
    """Write `id,x1..x8` rows with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [f"x{k}" for k in range(1, 9)])
        for ident in range(1, N_RAYS + 1):
            row = [str(ident)] + [f"{x:.17g}" for x in system.vector(ident)]
            writer.writerow(row)


def export_gram_csv(system: RaySystem, path: str | Path) -> None:
    """Write the 120x120 Gram matrix, one ray per row, id first."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id"] + [str(j) for j in range(1, N_RAYS + 1)])
        for ident in range(1, N_RAYS + 1):
            row = [str(ident)] + [f"{x:.17g}" for x in system.gram[ident - 1]]
            writer.writerow(row)
