from fractions import Fraction as Q

import pytest

from schreierlab.averages import IndexStream, check_invariants, generate, generate_upto, mass_bound_check
from schreierlab.config import Budget
from schreierlab.errors import BudgetExceeded
from schreierlab.ordinal import parse_ordinal
from schreierlab.values import RationalVector

I = IndexStream.geometric(1, 3)


def vec(d):
    return RationalVector(d)


def test_level_zero_is_the_basis():
    p = generate("0", I, 2)
    assert p.vectors == [vec({1: 1}), vec({3: 1})]


def test_level_one_example():
    p = generate("1", I, 2)
    assert p.vectors[0] == vec({1: 1})
    assert p.vectors[1] == vec({3: Q(1, 3), 9: Q(1, 3), 27: Q(1, 3)})
    assert p.consumed == 4


def test_level_two_first_vector():
    assert generate("2", I, 1).vectors == [vec({1: 1})]


@pytest.mark.parametrize("alpha,start,count", [("1", 1, 3), ("1", 2, 2), ("2", 1, 1), ("2", 2, 1), ("w", 1, 1), ("w+1", 1, 1), ("3", 1, 1)])
def test_invariants_hold(alpha, start, count):
    p = generate(alpha, IndexStream.geometric(start, 3), count)
    check_invariants(p)
    for x in p.vectors:
        assert sum(x.values) == 1 and all(v > 0 for v in x.values)


def test_invariant_violation_is_detected():
    p = generate("1", I, 2)
    p.vectors[1] = vec({3: Q(1, 2), 9: Q(1, 2)})
    with pytest.raises(AssertionError):
        check_invariants(p)


def test_budget_is_enforced_before_allocation():
    with pytest.raises(BudgetExceeded):
        generate("1", I, 4)
    with pytest.raises(BudgetExceeded):
        generate("2", I, 2)
    with pytest.raises(BudgetExceeded):
        generate("1", I, 3, budget=Budget(entry_cap=10))


def test_generate_upto_reports_reason():
    p, reason = generate_upto("1", I, 5)
    assert len(p) == 3 and "entries" in reason
    p, reason = generate_upto("w", I, 3)
    assert len(p) == 1 and reason


def test_stream_validation():
    with pytest.raises(ValueError):
        IndexStream((3, 2))
    with pytest.raises(ValueError):
        IndexStream((1, 2), growth3=True)
    with pytest.raises(ValueError):
        IndexStream((1,), ratio=2, growth3=True)
    s = IndexStream.from_mapping({"prefix": [1, 3, 9], "rule": "geometric", "ratio": 3})
    assert s.head(5) == [1, 3, 9, 27, 81]
    with pytest.raises(BudgetExceeded):
        IndexStream((1, 4), rule="finite").element(2)


def test_mass_bound_examples():
    stream = IndexStream.geometric(1, 3, growth3=True)
    p = generate("1", stream, 2)
    r = mass_bound_check(p, 2)
    assert r.status == "pass" and r.get("max_mass") <= 2
    assert sum(p.total(2).restrict((3, 9, 27)).values) == 1
    r0 = mass_bound_check(generate("0", stream, 3), 3)
    assert r0.get("max_mass") == 1
    r2 = mass_bound_check(generate("2", stream, 1), 1, truncation=12)
    assert r2.status == "pass"


def test_mass_bound_truncation_matches_exact():
    stream = IndexStream.geometric(2, 3, growth3=True)
    p = generate("1", stream, 2)
    exact = mass_bound_check(p, 2).get("max_mass")
    trunc = mass_bound_check(p, 2, truncation=18).get("max_mass")
    assert exact == trunc


def test_mass_bound_requires_growth():
    with pytest.raises(ValueError):
        mass_bound_check(generate("1", I, 2), 2)


def test_limit_level_uses_fundamental_sequence():
    w = parse_ordinal("w")
    p = generate(w, I, 1)
    # stream element 1 selects stage w[1] + 1 = 2
    assert p.vectors[0] == generate("2", I, 1).vectors[0]
    for stream, n in ((I, 2), (IndexStream.geometric(2, 3), 1)):
        with pytest.raises(BudgetExceeded):
            generate(w, stream, n)
