import random

from hypothesis import given, settings
from hypothesis import strategies as st

from e8ks.gf2 import nullspace, popcount, rank


def test_popcount():
    assert popcount(0) == 0
    assert popcount(0b1011) == 3
    assert popcount(1 << 200) == 1


def test_rank_known():
    # columns 1, 2, 3 over GF(2): third is the sum of the first two
    assert rank([0b01, 0b10, 0b11]) == 2
    assert rank([0b01, 0b10]) == 2
    assert rank([0, 0]) == 0


def test_nullspace_known():
    kernel = nullspace([0b01, 0b10, 0b11])
    assert len(kernel) == 1
    assert kernel[0] == 0b111  # the only dependency uses all three columns


columns = st.lists(st.integers(min_value=0, max_value=2**40 - 1), min_size=1, max_size=24)


@settings(max_examples=200, deadline=None)
@given(columns)
def test_rank_nullity(cols):
    assert rank(cols) + len(nullspace(cols)) == len(cols)


@settings(max_examples=200, deadline=None)
@given(columns)
def test_kernel_vectors_annihilate(cols):
    for mask in nullspace(cols):
        acc = 0
        for j, col in enumerate(cols):
            if (mask >> j) & 1:
                acc ^= col
        assert acc == 0


def test_kernel_spans_all_dependencies():
    rng = random.Random(11)
    cols = [rng.getrandbits(16) for _ in range(20)]
    kernel = nullspace(cols)
    seen = set()
    for _ in range(200):
        combo = 0
        for v in kernel:
            if rng.random() < 0.5:
                combo ^= v
        acc = 0
        for j, col in enumerate(cols):
            if (combo >> j) & 1:
                acc ^= col
        assert acc == 0
        seen.add(combo)
    assert len(seen) > 1
