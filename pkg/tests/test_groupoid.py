import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from ladic_monodromy.freealg import (AlgebraElement, AlgebraSignature, antipode, coproduct,
                                     group_element, is_grouplike)
from ladic_monodromy.groupoid import (FiniteGroupAlgebra, TorsorElement, abelianization_iso,
                                      abelianization_rank, compose, left_module_degree,
                                      random_element, right_module_degree, torsor_antipode,
                                      torsor_compose, torsor_compose_right, torsor_from_text,
                                      torsor_to_text, unit, verify_hopf_axioms)


def permutation_group_table(gens):
    """Multiplication table of the permutation group generated by ``gens``."""
    n = len(gens[0])
    elems = [tuple(range(n))]
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in elems:
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    index = {e: i for i, e in enumerate(elems)}
    return [[index[tuple(y[i] for i in x)] for y in elems] for x in elems]


def heisenberg_table(p):
    elems = list(itertools.product(range(p), repeat=3))
    index = {e: i for i, e in enumerate(elems)}
    return [[index[((a + x) % p, (b + y) % p, (c + z + a * y) % p)] for x, y, z in elems]
            for a, b, c in elems]


@pytest.mark.parametrize("grades", [[1], [1, 1], [1, 2]])
def test_hopf_axioms_hold(grades):
    report = verify_hopf_axioms(40, degree=4, grades=grades, seed=7)
    assert report.all_passed, report.to_dict()
    assert all(r.checked >= 40 for r in report.results)


def test_hopf_report_is_deterministic():
    a = verify_hopf_axioms(10, degree=3, seed=3).to_dict()
    b = verify_hopf_axioms(10, degree=3, seed=3).to_dict()
    assert a == b


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_abelianization_rank_equals_generator_count(rank):
    sig = AlgebraSignature.simple(3, 10, 3, [1] * rank)
    assert abelianization_rank(sig) == rank


def test_abelianization_of_group_differences():
    sig = AlgebraSignature.simple(3, 10, 4, [1, 1])
    p0 = TorsorElement.base_path(sig)
    g = group_element(sig, [(0, 2), (1, 1)])
    t = compose(TorsorElement(g - 1, "a", "a"), p0)
    cls = abelianization_iso(t)
    assert cls == AlgebraElement(sig, {(0,): 2, (1,): 1})


def test_abelianization_needs_augmentation_zero():
    sig = AlgebraSignature.simple(3, 10, 3, [1])
    with pytest.raises(ValueError):
        abelianization_iso(TorsorElement.base_path(sig))


def test_composition_requires_matching_endpoints():
    sig = AlgebraSignature.simple(3, 10, 3, [1])
    p = TorsorElement.base_path(sig)
    with pytest.raises(ValueError):
        compose(p, p)
    assert compose(p, torsor_antipode(p)) == unit(sig, "a")


def test_module_filtrations_agree_on_torsor():
    sig = AlgebraSignature.simple(3, 10, 5, [1, 1])
    x = AlgebraElement.monomial(sig, [0, 1])
    t = torsor_compose(x, TorsorElement.base_path(sig))
    assert left_module_degree(t) == 2
    assert right_module_degree(t) == 2
    s = torsor_compose_right(TorsorElement.base_path(sig), x)
    assert right_module_degree(s) == left_module_degree(s) == 2


def test_torsor_antipode_reverses_grouplike_paths():
    sig = AlgebraSignature.simple(3, 12, 4, [1, 1])
    g = group_element(sig, [(0, 1), (1, -1)])
    t = TorsorElement(g, "a", "b")
    assert compose(t, torsor_antipode(t)) == unit(sig, "a")
    assert compose(torsor_antipode(t), t) == unit(sig, "b")
    assert is_grouplike(antipode(g))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_torsor_text_round_trip(seed):
    sig = AlgebraSignature.simple(3, 10, 3, [1, 1])
    t = TorsorElement(random_element(sig, random.Random(seed)), "a", "b")
    assert torsor_from_text(sig, torsor_to_text(t)) == t


@pytest.mark.parametrize("moduli,expected", [([2], 2), ([4], 4), ([8], 8), ([3], 3), ([9], 9),
                                             ([3, 3], 5), ([2, 2], 3), ([2, 2, 2], 4),
                                             ([5], 5), ([2, 4], 5)])
def test_abelian_nilpotency_index(moduli, expected):
    ell = {2: 2, 4: 2, 8: 2, 3: 3, 9: 3, 5: 5}[moduli[0]]
    alg = FiniteGroupAlgebra.abelian(ell, moduli)
    assert alg.nilpotency_index() == expected
    assert alg.brute_nilpotency_index() == expected


def test_non_abelian_groups_agree_with_brute_span():
    dihedral = permutation_group_table([(1, 2, 3, 0), (0, 3, 2, 1)])
    quaternion = permutation_group_table([(1, 2, 3, 0, 5, 6, 7, 4), (4, 7, 6, 5, 2, 1, 0, 3)])
    for table in (dihedral, quaternion):
        alg = FiniteGroupAlgebra(2, table)
        assert alg.nilpotency_index() == alg.brute_nilpotency_index() == 5


def test_heisenberg_group_loewy_length():
    # Jennings series: two generators of weight 1, one central of weight 2
    assert FiniteGroupAlgebra(3, heisenberg_table(3)).nilpotency_index() == 1 + 2 * 2 + 2 * 2


def test_group_table_validation():
    with pytest.raises(ValueError):
        FiniteGroupAlgebra(3, [[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        FiniteGroupAlgebra(2, [[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        FiniteGroupAlgebra.from_json(json.dumps({"ell": 2, "order": 2, "table": [0, 1, 1]}))
    alg = FiniteGroupAlgebra.from_json(json.dumps({"ell": 2, "order": 2, "table": [0, 1, 1, 0]}))
    assert alg.nilpotency_index() == 2
