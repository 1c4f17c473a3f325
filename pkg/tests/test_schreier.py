import itertools

import pytest
from hypothesis import given, strategies as st

from schreierlab.errors import BudgetExceeded, NotAMember
from schreierlab.oracles import member_brute
from schreierlab.ordinal import Ordinal, parse_ordinal
from schreierlab.schreier import (
    SchreierFamily,
    all_subsets,
    format_set,
    greedy_decomposition,
    is_spread,
    iter_spreads,
    parse_set,
)

ALPHAS = ["0", "1", "2", "3", "w", "w+1", "w*2", "w^2"]


def fam(text, **kw):
    return SchreierFamily(parse_ordinal(text), **kw)


def test_membership_examples():
    for a in ALPHAS:
        assert fam(a).is_member(())
    assert fam("1").is_member((2, 3))
    assert not fam("1").is_member((1, 2))
    assert fam("2").is_member((3, 4, 5))
    expected = any(member_brute(Ordinal.of(n + 1), (2, 5, 6)) for n in (1, 2))
    assert fam("w").is_member((2, 5, 6)) is expected is True


def test_maximality_examples():
    assert fam("1").is_maximal((2, 3))
    assert not fam("1").is_maximal((3, 5))
    assert fam("0").is_maximal((7,))
    with pytest.raises(NotAMember):
        fam("1").is_maximal((1, 2))


def test_maximal_extension_examples():
    assert fam("1").maximal_extension((3,), 5) == (3, 5, 6)
    assert fam("0").maximal_extension((4,), 10) == (4,)
    E = fam("2").maximal_extension((), 2)
    assert E == (2, 3, 4, 5, 6, 7)
    assert fam("2").is_maximal(E)


def test_enumerate_examples():
    assert fam("1").enumerate(3) == [(), (1,), (2,), (2, 3), (3,)]
    assert fam("0").enumerate(2) == [(), (1,), (2,)]
    members = fam("2").enumerate(4)
    brute = sorted(E for E in all_subsets(4) if member_brute(Ordinal.of(2), E))
    assert members == brute
    assert len(members) == 9


def test_enumeration_ceiling():
    with pytest.raises(BudgetExceeded):
        fam("1", enum_ceiling=5).enumerate(6)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_greedy_matches_brute_force(alpha):
    a = parse_ordinal(alpha)
    F = SchreierFamily(a)
    for E in all_subsets(10):
        assert F.is_member(E) == member_brute(a, E), format_set(E)


@pytest.mark.parametrize("alpha", ["1", "2", "w", "w+1"])
def test_greedy_decomposition_is_admissible(alpha):
    a = parse_ordinal(alpha)
    F = SchreierFamily(a)
    for E in all_subsets(9):
        if E and F.is_member(E):
            blocks = greedy_decomposition(a, E)
            assert tuple(itertools.chain(*blocks)) == E


@pytest.mark.parametrize("alpha,N", [("1", 8), ("0", 5), ("w", 10), ("2", 9), ("w*2", 9)])
def test_audit_passes(alpha, N):
    report = fam(alpha).audit(N)
    assert report.status == "pass"
    assert report.get("hereditary") == "pass" and report.get("spreading") == "pass"
    if alpha == "w":
        assert report.get("nesting") == "info"


@pytest.mark.parametrize("alpha", ["1", "2", "3", "w", "w+1", "w*2"])
def test_probe_window_one_agrees_with_window_fifteen(alpha):
    narrow, wide = fam(alpha), fam(alpha, probe_window=15)
    for E in narrow.enumerate(11):
        if E:
            assert narrow.is_maximal(E) == wide.is_maximal(E), format_set(E)


def test_set_syntax():
    assert parse_set("{2, 3,7}") == (2, 3, 7)
    assert parse_set("{}") == ()
    assert format_set((2, 3, 7)) == "{2,3,7}"
    for bad in ("{3,2}", "{0,1}", "2,3", "{1,1}"):
        with pytest.raises(ValueError):
            parse_set(bad)


def test_spreads():
    assert list(iter_spreads((2, 4), 5)) == [(2, 4), (2, 5), (3, 4), (3, 5), (4, 5)]
    assert is_spread((3, 5), (2, 4)) and not is_spread((1, 5), (2, 4))


sets = st.lists(st.integers(1, 14), min_size=1, max_size=7, unique=True).map(lambda xs: tuple(sorted(xs)))


@given(st.sampled_from(ALPHAS), sets)
def test_hereditary_and_spreading(alpha, E):
    F = fam(alpha)
    if not F.is_member(E):
        return
    for r in range(len(E)):
        assert F.is_member(E[:r] + E[r + 1:])
    shifted = tuple(e + 1 for e in E)
    assert F.is_member(shifted)
