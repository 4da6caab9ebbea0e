import pytest

from e8ks.families import (
    Family,
    band_letter,
    classify_table,
    family_for,
    family_for_selector,
    profile,
    selector_profiles,
    type_profiles,
)


def test_band_letters():
    assert band_letter(1) == "A"
    assert band_letter(15) == "A"
    assert band_letter(16) == "B"
    assert band_letter(120) == "H"
    for bad in (0, 121, -3):
        with pytest.raises(ValueError):
            band_letter(bad)


def test_profile_is_sorted_letters():
    assert profile((1, 7, 62, 66, 70, 73, 107, 111)) == "AAEEEEHH"
    assert profile((111, 1, 70, 66, 7, 73, 107, 62)) == "AAEEEEHH"


def test_profile_census(table):
    classes = classify_table(table)
    assert len(classes) == 33
    assert sum(len(v) for v in classes.values()) == 2025
    assert len(classes["EEFFGGHH"]) == 45
    assert len(classes["AABBCCDD"]) == 75
    for p in type_profiles(classes, "type1"):
        assert len(classes[p]) == 15
    for p in type_profiles(classes, "type2"):
        assert len(classes[p]) == 30


def test_type1_profile_resolution(table):
    classes = classify_table(table)
    got = type_profiles(classes, "type1")
    assert got == ("AAEEEEHH", "BBFFFFGG", "CCEEGGGG", "DDFFHHHH")
    with pytest.raises(ValueError):
        type_profiles(classes, "type9")


def test_selector_resolution(table):
    assert selector_profiles(table, "type3") == ("EEFFGGHH",)
    assert selector_profiles(table, "aabbccdd") == ("AABBCCDD",)
    assert selector_profiles(table, "hgfedcba") == ("ABCDEFGH",)
    for bad in ("type", "AAB", "AABBXXDD", ""):
        with pytest.raises(ValueError):
            selector_profiles(table, bad)


def test_family_shapes(table):
    shapes = {
        "type1": (60, 120),
        "type2": (60, 120),
        "type3": (45, 60),
        "type4": (75, 60),
    }
    for sel, (n_bases, n_rays) in shapes.items():
        fam = family_for_selector(table, sel)
        assert isinstance(fam, Family)
        assert (len(fam.bases), len(fam.rays)) == (n_bases, n_rays)
        assert all(profile(b) in fam.profiles for b in fam.bases)
        assert fam.name == "+".join(fam.profiles)


def test_family_for_empty_selection(table):
    # well-formed profile no basis carries
    with pytest.raises(ValueError):
        family_for(table, ("AAAAAAAA",))


def test_one_band_per_ray_family_is_largest(table):
    classes = classify_table(table)
    assert len(classes["ABCDEFGH"]) == 165
    assert max(len(v) for v in classes.values()) == 165
