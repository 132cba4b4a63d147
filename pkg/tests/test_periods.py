import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ladic_monodromy.padic import INF
from ladic_monodromy.periods import (PeriodTriple, integral_period, is_equivariant_section,
                                     search_integral_period, section_for)

from oracles import sylvester_solvable_brute


def random_triple(rng, ell, M, n, w):
    mod = ell ** M
    while True:
        F = [[rng.randrange(mod) if i < w or j >= w else 0 for j in range(n)] for i in range(n)]
        # bias towards interesting cases: diagonal blocks close to each other
        if rng.random() < 0.6:
            for i in range(n):
                F[i][i] = (1 + ell * rng.randrange(mod)) % mod
        try:
            return PeriodTriple(ell, M, tuple(map(tuple, F)), w)
        except ValueError:
            continue


@pytest.mark.parametrize("ell", [2, 3, 5])
@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_non_split_extension_has_period_r(ell, r):
    t = PeriodTriple(ell, r + 3, ((1, 1), (0, 1 + ell ** r)), 1)
    assert integral_period(t) == r
    assert search_integral_period(t) == r


@pytest.mark.parametrize("ell", [2, 3, 5])
def test_split_blocks_have_period_zero(ell):
    assert integral_period(PeriodTriple(ell, 5, ((1, 0), (0, 1 + ell)), 1)) == 0
    assert integral_period(PeriodTriple(ell, 5, ((1, 1, 0), (0, 1, 0), (0, 0, 1 + ell)), 2)) == 0


def test_worked_example():
    assert integral_period(PeriodTriple(3, 6, ((1, 3), (0, 10)), 1)) == 1


def test_unipotent_extension_never_splits():
    t = PeriodTriple(3, 5, ((1, 1), (0, 1)), 1)
    assert integral_period(t) == INF
    assert search_integral_period(t) == INF


def test_trivial_filtrations():
    assert integral_period(PeriodTriple(3, 4, ((1, 1), (0, 1)), 0)) == 0
    assert integral_period(PeriodTriple(3, 4, ((1, 1), (0, 1)), 2)) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 4), st.integers(1, 6))
def test_smith_route_matches_exhaustive_search(seed, n, M):
    rng = random.Random(seed)
    w = rng.randrange(1, n)
    if w * (n - w) > 2 and M > 4:
        M = 4
    t = random_triple(rng, 3, M, n, w)
    e = integral_period(t)
    assert e == search_integral_period(t)
    if e != INF:
        S = section_for(t, e)
        assert is_equivariant_section(t, S, e)
        if e > 0:
            assert section_for(t, e - 1) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_brute_force_over_all_matrices(seed):
    rng = random.Random(seed)
    ell, M = 2, 3
    t = random_triple(rng, ell, M, 2, 1)
    A, B, C = t.blocks()
    e = integral_period(t)
    solvable = [sylvester_solvable_brute(A, B, C, ell, M, k) for k in range(M)]
    expected = next((k for k, ok in enumerate(solvable) if ok), INF)
    assert e == expected


def test_validation_errors():
    with pytest.raises(ValueError):
        PeriodTriple(3, 4, ((1, 1), (1, 1)), 1)
    with pytest.raises(ValueError):
        PeriodTriple(3, 4, ((3, 1), (0, 1)), 1)
    with pytest.raises(ValueError):
        PeriodTriple(4, 4, ((1, 1), (0, 1)), 1)
    with pytest.raises(ValueError):
        PeriodTriple.from_json(json.dumps({"ell": 3, "precision": 4, "matrix": [1, 0, 0]}))


def test_flat_json_matrix():
    t = PeriodTriple.from_json(json.dumps({"ell": 3, "precision": 6, "w": 1,
                                           "matrix": ["1", "3", "0", "10"]}))
    assert integral_period(t) == 1
