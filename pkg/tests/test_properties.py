from __future__ import annotations

import random
from math import comb

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from starlight.baranyai import partition_all_subsets, verify_partition
from starlight.chromatic import (
    Colourable,
    Extended,
    NotColourable,
    PartialColouring,
    SearchBudget,
    find_colouring,
    propagate_forced,
)
from starlight.core import Colouring, StarSystem, check_colouring, relabel, validate_decomposition
from starlight.formats import parse_system, serialize_system

from oracles import brute_colourable, random_star_system

BUDGET = SearchBudget(max_seconds=60)
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def star_systems(draw, orders=(6, 7, 9, 10)):
    n = draw(st.sampled_from(orders))
    seed = draw(st.integers(0, 2**32 - 1))
    sys = random_star_system(n, 3, random.Random(seed))
    assert sys is not None
    return sys


@st.composite
def permutations(draw, n: int):
    return draw(st.permutations(list(range(1, n + 1))))


@st.composite
def size_vectors(draw):
    m = draw(st.integers(2, 10))
    e = draw(st.integers(1, min(4, m)))
    cap = m // e
    left = comb(m, e)
    sizes = []
    while left:
        s = draw(st.integers(1, min(cap, left)))
        sizes.append(s)
        left -= s
    return m, e, sizes


@SETTINGS
@given(star_systems(), st.data())
def test_validity_survives_relabelling(sys, data):
    perm = data.draw(permutations(sys.n))
    assert validate_decomposition(sys).ok
    assert validate_decomposition(relabel(sys, perm)).ok
    assert len(sys) * sys.e == comb(sys.n, 2)


@SETTINGS
@given(star_systems(), st.data())
def test_properness_ignores_colour_names(sys, data):
    k = data.draw(st.integers(1, 4))
    colours = data.draw(st.lists(st.integers(1, k), min_size=sys.n, max_size=sys.n))
    perm = data.draw(st.permutations(list(range(1, k + 1))))
    col = Colouring(k, colours)
    assert check_colouring(sys, col).proper == check_colouring(sys, col.permuted(perm)).proper


@SETTINGS
@given(star_systems())
def test_one_colour_is_never_proper(sys):
    assert not check_colouring(sys, Colouring(1, [1] * sys.n)).proper
    assert isinstance(find_colouring(sys, 1, BUDGET), NotColourable)


@SETTINGS
@given(star_systems())
def test_round_trip(sys):
    data = serialize_system(sys)
    again = parse_system(data)
    assert again == sys and serialize_system(again) == data


@SETTINGS
@given(star_systems(orders=(6, 7, 9)), st.data())
def test_verdicts_survive_relabelling(sys, data):
    perm = data.draw(permutations(sys.n))
    other = relabel(sys, perm)
    for k in (2, 3):
        a = isinstance(find_colouring(sys, k, BUDGET), Colourable)
        b = isinstance(find_colouring(other, k, BUDGET), Colourable)
        assert a == b == brute_colourable(sys, k)


@SETTINGS
@given(star_systems())
def test_non_colourability_is_downward_closed(sys):
    for k in (2, 3):
        if isinstance(find_colouring(sys, k, BUDGET), NotColourable):
            assert isinstance(find_colouring(sys, k - 1, BUDGET), NotColourable)


@SETTINGS
@given(star_systems(), st.data())
def test_propagation_is_monotone_and_confluent(sys, data):
    k = data.draw(st.integers(2, 3))
    fixed = data.draw(
        st.dictionaries(st.integers(1, sys.n), st.integers(1, k), max_size=sys.n // 2)
    )
    start = PartialColouring.from_assignment(sys.n, k, fixed)
    out = propagate_forced(sys, start)
    order = data.draw(st.permutations(list(range(len(sys)))))
    shuffled = StarSystem(sys.e, sys.n, sys.blocks[np.array(order, dtype=np.int64)])
    again = propagate_forced(shuffled, start)
    assert type(out) is type(again)
    if isinstance(out, Extended):
        assert out.partial == again.partial
        assert np.all(out.partial.masks & ~start.masks == 0)


@SETTINGS
@given(size_vectors(), st.integers(0, 1000))
def test_any_feasible_size_vector_partitions(req, seed):
    m, e, sizes = req
    p = partition_all_subsets(m, e, sizes, seed=seed)
    assert verify_partition(p, sizes)
    assert partition_all_subsets(m, e, sizes, seed=seed).classes == p.classes
