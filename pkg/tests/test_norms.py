import itertools
import math
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, strategies as st

from schreierlab.config import Budget
from schreierlab.engines import scaled_weights
from schreierlab.errors import BudgetExceeded
from schreierlab.norms import (
    BlockSequence,
    Norm,
    baernstein_norm,
    check_domination,
    coefficient_search_set,
    composite_norm,
    lp_norm,
    schreier_norm,
)
from schreierlab.oracles import baernstein_brute_powers, baernstein_pth_brute, schreier_norm_brute, successive_member_sequences
from schreierlab.ordinal import parse_ordinal
from schreierlab.schreier import SchreierFamily, iter_spreads
from schreierlab.values import NormValue, RationalVector, compare_values

ONES3 = RationalVector.ones([1, 2, 3])


def test_schreier_examples():
    v = schreier_norm("1", ONES3)
    assert v.value == 2 and v.witness == [2, 3]
    v = schreier_norm("1", RationalVector({1: 1, 2: Q(1, 2), 3: Q(1, 3)}))
    assert v.value == 1 and v.witness == [1]
    for a in ("0", "2", "w"):
        assert schreier_norm(a, RationalVector.basis(7, Q(-3, 4))).value == Q(3, 4)


def test_baernstein_examples():
    v = baernstein_norm("1", 2, ONES3)
    assert v.mode == "pth-power" and v.power == 5 and v.witness == [[1], [2, 3]]
    v = baernstein_norm("1", 2, RationalVector.ones([2, 3, 4, 5]))
    assert v.power == 10 and v.witness == [[2], [3, 4, 5]]
    for p in (1, 2, "3/2", "inf"):
        assert compare_values(baernstein_norm("2", p, RationalVector.basis(4)), NormValue.exact(1)) == 0


def test_composite_examples():
    assert composite_norm(Norm.schreier("1"), Norm.lp(2), ONES3).power == 5
    x = RationalVector({2: Q(1, 2), 3: 1, 5: Q(-1, 3), 6: 1})
    inner = Norm.baernstein("1", 2)
    assert composite_norm(inner, Norm.lp(2), x) == baernstein_norm("1", 2, x).with_witness(None)
    single = RationalVector.basis(4, Q(2, 3))
    assert composite_norm(inner, Norm.lp(3), single).value == Q(2, 3)


def test_non_integer_p_interval_width_and_containment():
    x = RationalVector({1: 1, 2: Q(1, 2), 4: Q(2, 3), 5: Q(1, 3)})
    tol = Q(1, 10**12)
    v = baernstein_norm("1", "3/2", x, budget=Budget(tolerance=tol))
    assert v.mode == "interval" and v.hi - v.lo <= tol
    coords = x.as_dict()
    best = max(
        sum(float(sum(abs(coords[i]) for i in B)) ** 1.5 for B in blocks)
        for blocks in successive_member_sequences(parse_ordinal("1"), x.support)
    ) ** (1 / 1.5)
    assert float(v.lo) - 1e-9 <= best <= float(v.hi) + 1e-9


def test_lp_norm():
    x = RationalVector({1: 3, 2: -4})
    assert lp_norm(2, x).value == 5
    assert lp_norm("inf", x).value == 4
    assert lp_norm(1, x).value == 7
    v = lp_norm("5/2", x)
    assert v.mode == "interval" and v.lo <= v.hi


def test_norm_descriptor_parse():
    assert str(Norm.parse("baernstein:w+1:2")) == "baernstein:w + 1:2"
    assert Norm.parse("schreier:2").power == 1
    assert Norm.parse("lp:3/2").power is None
    for bad in ("foo:1", "schreier", "baernstein:1", "lp:1/2"):
        with pytest.raises(ValueError):
            Norm.parse(bad)


entries = st.sampled_from([Q(1), Q(-1), Q(1, 2), Q(-1, 2), Q(1, 3), Q(-1, 3), Q(2, 5)])
small_vectors = st.dictionaries(st.integers(1, 10), entries, min_size=1, max_size=7).map(RationalVector)


@given(st.sampled_from(["1", "2", "w"]), small_vectors)
def test_schreier_norm_matches_brute_force(alpha, x):
    a = parse_ordinal(alpha)
    assert schreier_norm(a, x).value == schreier_norm_brute(a, x.as_dict())


@given(st.sampled_from(["1", "2", "w+1"]), small_vectors)
def test_baernstein_matches_brute_force(alpha, x):
    a = parse_ordinal(alpha)
    brute = baernstein_brute_powers(a, (1, 2, 3), x.as_dict())
    for p in (1, 2, 3):
        v = baernstein_norm(a, p, x)
        assert v.exact_power(p) == brute[p]
    # the witness is an optimal partition and lexicographically no larger than the oracle's
    value, witness = baernstein_pth_brute(a, 2, x.as_dict())
    ours = baernstein_norm(a, 2, x).witness
    coords = x.as_dict()
    assert all(SchreierFamily(a).is_member(B) for B in ours)
    assert sum(sum(abs(coords[i]) for i in B) ** 2 for B in ours) == value
    assert [tuple(B) for B in ours] <= [tuple(B) for B in witness]


large = st.dictionaries(st.integers(1, 40), entries, min_size=1, max_size=9).map(RationalVector)


@given(st.sampled_from(["1", "2", "3", "w", "w*2", "w^2"]), large)
def test_engines_agree(alpha, x):
    a = parse_ordinal(alpha)
    for p in (2, "inf"):
        e = baernstein_norm(a, p, x, engine="enumerate", witness=False)
        s = baernstein_norm(a, p, x, engine="structural", witness=False)
        assert e == s


def test_structural_witness_is_optimal():
    x = RationalVector({i: Q(1, 1 + i % 3) for i in range(20, 34)})
    v = baernstein_norm("2", 2, x, engine="structural")
    fam = SchreierFamily(parse_ordinal("2"))
    coords = x.as_dict()
    assert all(fam.is_member(B) for B in v.witness)
    assert sum(sum(coords[i] for i in B) ** 2 for B in v.witness) == v.exact_power(2)


def test_enumeration_support_ceiling():
    x = RationalVector.ones(range(30, 60))
    with pytest.raises(BudgetExceeded):
        schreier_norm("1", x, engine="enumerate")
    assert schreier_norm("1", x).value == 30


def test_evaluate_rows_matches_evaluate():
    support = (2, 3, 5, 7, 8)
    rng = np.random.default_rng(5)
    W = rng.integers(0, 7, size=(20, 5))
    for norm in (Norm.schreier("1"), Norm.baernstein("2", 2), Norm.baernstein("1", "3/2"), Norm.lp(2)):
        rows = norm.evaluate_rows(support, W, 6)
        for r, row in enumerate(W):
            x = RationalVector((s, Q(int(v), 6)) for s, v in zip(support, row))
            assert compare_values(rows[r], norm.evaluate(x, witness=False)) in (0, None)


def test_right_dominance_on_spreads():
    x = RationalVector({1: 1, 2: Q(1, 2), 4: Q(1, 3)})
    base = baernstein_norm("1", 2, x)
    for G in iter_spreads(x.support, 9):
        assert compare_values(baernstein_norm("1", 2, x.moved(G)), base) >= 0


def blocks(*dicts):
    return BlockSequence(tuple(RationalVector(d) for d in dicts))


def test_domination_self_ratio_one():
    norm = Norm.baernstein("1", 2)
    rep = check_domination(blocks({1: 1}, {2: 1}, {5: 1}), norm, [1, 2, 5], norm, 1, seed=3)
    assert rep.status == "pass" and rep.get("max_ratio") == NormValue.exact(1)
    assert rep.get("violations") == 0


def test_upper_block_estimate_sample():
    z = blocks({1: 1}, {2: 1, 3: 1}, {5: Q(1, 2), 6: 1, 7: Q(1, 3)})
    norm = Norm.baernstein("1", 2)
    rep = check_domination(z, norm, z.minima, norm, 4, normalize=True, seed=1)
    assert rep.status == "pass" and rep.get("undecided") == 0
    assert "not a proof" in rep.notes[0]


def test_right_dominance_direction():
    norm = Norm.baernstein("2", 2)
    m = [2, 4, 7]
    k = [3, 6, 9]
    basis_m = blocks(*({i: 1} for i in m))
    rep = check_domination(basis_m, norm, k, norm, 1, seed=0)
    assert rep.status == "pass"


def test_domination_falsified():
    z = blocks({2: 1, 3: 1}, {4: 1, 5: 1})
    rep = check_domination(z, Norm.schreier("1"), [2, 4], Norm.lp(1), Q(1, 2), seed=0)
    assert rep.status == "fail" and rep.get("violations") > 0 and rep.witnesses


def test_block_sequence_validation():
    with pytest.raises(ValueError):
        blocks({1: 1, 3: 1}, {2: 1})
    with pytest.raises(ValueError):
        blocks({1: 1}, {})
    assert blocks({1: 1}, {3: 2, 4: 1}).minima == (1, 3)


def test_coefficient_search_set_deterministic():
    a = coefficient_search_set(4, seed=9, samples=20)
    assert a == coefficient_search_set(4, seed=9, samples=20)
    assert a != coefficient_search_set(4, seed=10, samples=20)
    assert len(set(a)) == len(a) and all(any(r) for r in a)
    assert all(tuple(map(Q, bits)) in a for bits in itertools.product((0, 1), repeat=4) if any(bits))


def test_scaled_weights():
    support, w, L = scaled_weights(RationalVector({3: Q(-1, 2), 8: Q(1, 3)}))
    assert support == (3, 8) and w == [3, 2] and L == 6
    assert math.gcd(L, *w) == 1
