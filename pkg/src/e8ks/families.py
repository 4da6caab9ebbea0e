"""Band letters, basis profiles, and profile families.

Ray i belongs to band (i - 1) // 15, lettered A through H.  A basis
touches bands in a multiset called its profile, written as a sorted
8-letter string like AAEEEEHH.  Bases sharing a profile (or a chosen
set of profiles) form a family, the search unit for parity proofs.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass

from .structure import Basis, BasisTable

LETTERS = "ABCDEFGH"

logger = logging.getLogger(__name__)

__all__ = [
    "LETTERS",
    "Family",
    "band_letter",
    "profile",
    "classify_table",
    "family_for",
    "type_profiles",
    "selector_profiles",
    "family_for_selector",
]


def band_letter(ray: int) -> str:
    if not 1 <= ray <= 120:
        raise ValueError(f"ray id out of range: {ray}")
    return LETTERS[(ray - 1) // 15]


def profile(basis) -> str:
    return "".join(sorted(band_letter(i) for i in basis))


def classify_table(table: BasisTable) -> dict[str, tuple[int, ...]]:
    """Profile -> positions of the bases carrying it, in table order."""
    buckets: dict[str, list[int]] = defaultdict(list)
    for pos, basis in enumerate(table):
        buckets[profile(basis)].append(pos)
    return {p: tuple(v) for p, v in sorted(buckets.items())}


@dataclass(frozen=True)
class Family:
    """All bases whose profile is in `profiles`, plus the rays they use."""

    profiles: tuple[str, ...]
    bases: tuple[Basis, ...]
    rays: tuple[int, ...]

    @property
    def name(self) -> str:
        return "+".join(self.profiles)


def family_for(table: BasisTable, profiles) -> Family:
    wanted = tuple(sorted(set(profiles)))
    bases = tuple(b for b in table if profile(b) in wanted)
    if not bases:
        raise ValueError(f"no bases carry profiles {wanted}")
    rays = tuple(sorted({i for b in bases for i in b}))
    return Family(wanted, bases, rays)


# Fixed profiles per proof-class type.  Type 1 contains a C-centred
# profile whose exact spelling is resolved from the table at runtime
# (the two candidate spellings disagree in print).
_TYPE1_FIXED = ("AAEEEEHH", "BBFFFFGG", "DDFFHHHH")
_TYPE1_C_CANDIDATES = ("CCEEGGGG", "CCEEEEGG")
_TYPE_PROFILES = {
    "type2": ("AABBEEFF", "CCDDGGHH"),
    "type3": ("EEFFGGHH",),
    "type4": ("AABBCCDD",),
}


def type_profiles(classification: dict[str, tuple[int, ...]], type_name: str) -> tuple[str, ...]:
    """Profiles making up one of the four named proof-class types."""
    if type_name == "type1":
        present = [p for p in _TYPE1_C_CANDIDATES if p in classification]
        if len(present) != 1:
            raise ValueError(
                f"expected exactly one of {_TYPE1_C_CANDIDATES} in the table, found {present}"
            )
        logger.info("type1 C-centred profile resolved to %s", present[0])
        return tuple(sorted(_TYPE1_FIXED + (present[0],)))
    try:
        return _TYPE_PROFILES[type_name]
    except KeyError:
        raise ValueError(f"unknown type selector {type_name!r}") from None


def selector_profiles(table: BasisTable, selector: str) -> tuple[str, ...]:
    """Resolve a CLI selector: type1..type4 or an explicit profile."""
    selector = selector.strip()
    if selector.lower() in ("type1", "type2", "type3", "type4"):
        return type_profiles(classify_table(table), selector.lower())
    letters = selector.upper()
    if len(letters) == 8 and all(ch in LETTERS for ch in letters):
        return ("".join(sorted(letters)),)
    raise ValueError(f"selector must be type1..type4 or an 8-letter profile, got {selector!r}")


def family_for_selector(table: BasisTable, selector: str) -> Family:
    return family_for(table, selector_profiles(table, selector))
