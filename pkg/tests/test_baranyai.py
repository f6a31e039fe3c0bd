from __future__ import annotations

from itertools import combinations
from math import comb

import pytest

from starlight.baranyai import (
    SubsetPartition,
    check_request,
    exact_cover_partition,
    partition_all_subsets,
    verify_partition,
)
from starlight.errors import InfeasibleRequest


def test_single_subset():
    p = partition_all_subsets(3, 3, [1])
    assert [list(c) for c in p.classes] == [[(1, 2, 3)]]
    assert verify_partition(p, [1])


def test_six_choose_three_in_pairs():
    p = partition_all_subsets(6, 3, [2] * 10)
    assert verify_partition(p, [2] * 10)
    assert len({tuple(sorted(s)) for c in p.classes for s in c}) == 20


def test_mixed_sizes_on_seven_points():
    sizes = [2] * 14 + [1] * 7
    p = partition_all_subsets(7, 3, sizes)
    assert p.sizes() == sizes
    assert verify_partition(p, sizes)


@pytest.mark.parametrize("m,e,sizes", [(6, 3, [3]), (4, 2, [2, 2, 1]), (4, 2, [2, 2, 2, 1])])
def test_infeasible_requests(m, e, sizes):
    with pytest.raises(InfeasibleRequest):
        check_request(m, e, sizes)
    with pytest.raises(InfeasibleRequest):
        partition_all_subsets(m, e, sizes)


def test_moving_a_subset_breaks_verification():
    p = partition_all_subsets(6, 3, [2] * 10)
    classes = [list(c) for c in p.classes]
    classes[1].append(classes[0].pop())
    moved = SubsetPartition(6, 3, classes)
    assert not verify_partition(moved, [2] * 10)
    assert not verify_partition(moved)  # the moved triple meets its new class


def test_hand_built_matchings():
    p = SubsetPartition(4, 2, [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)]])
    assert verify_partition(p, [2, 2, 2])
    bad = SubsetPartition(4, 2, [[(1, 2), (2, 4)], [(1, 3), (3, 4)], [(1, 4), (2, 3)]])
    assert not verify_partition(bad)


def test_format_lines():
    p = SubsetPartition(4, 2, [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)]])
    assert p.format().splitlines()[0] == "class 1: {1 2} {3 4}"


@pytest.mark.parametrize("seed", range(5))
def test_seeds_are_deterministic(seed):
    a = partition_all_subsets(8, 3, [2] * 28, seed=seed)
    b = partition_all_subsets(8, 3, [2] * 28, seed=seed)
    assert a.classes == b.classes


def test_exact_cover_fallback_agrees():
    for m, e, sizes in [(6, 3, [2] * 10), (6, 2, [3] * 5), (7, 3, [2] * 14 + [1] * 7), (8, 4, [2] * 35)]:
        p = exact_cover_partition(m, e, sizes)
        assert verify_partition(p, sizes)
        assert sum(sizes) == comb(m, e) == len(list(combinations(range(m), e)))
