import pytest
from hypothesis import given, strategies as st

from schreierlab.errors import NonCanonicalOrdinal
from schreierlab.ordinal import (
    Ordinal,
    OrdinalKind,
    compare,
    fundamental_sequence,
    iter_below,
    kind,
    parse_ordinal,
)

W = parse_ordinal("w")


def test_compare_examples():
    assert compare(W, W) == 0
    assert compare(parse_ordinal("w*2 + 3"), parse_ordinal("w*3")) == -1
    w2 = parse_ordinal("w^2")
    for k in range(1, 101):
        assert compare(w2, parse_ordinal(f"w*{k}")) == 1


def test_kind_examples():
    assert kind(Ordinal.of(0)) is OrdinalKind.ZERO
    a = parse_ordinal("w + 1")
    assert kind(a) is OrdinalKind.SUCCESSOR and a.predecessor == W
    assert kind(parse_ordinal("w^2*2")) is OrdinalKind.LIMIT


@pytest.mark.parametrize("n", [1, 2, 5, 17])
def test_fundamental_sequence_examples(n):
    assert fundamental_sequence(W, n) == Ordinal.of(n)
    assert fundamental_sequence(parse_ordinal("w^2"), n) == parse_ordinal(f"w*{n}")
    assert fundamental_sequence(parse_ordinal("w*3"), n) == parse_ordinal(f"w*2 + {n}")


def test_fundamental_sequence_rejects_non_limits():
    with pytest.raises(ValueError):
        fundamental_sequence(Ordinal.of(3), 1)
    with pytest.raises(ValueError):
        fundamental_sequence(Ordinal.of(0), 1)


@pytest.mark.parametrize("text", ["w + w", "2 + w", "w + w^2", "w*0", "", "w^0", "w^w", "w ++ 1", "x"])
def test_parser_rejects_non_canonical(text):
    with pytest.raises(NonCanonicalOrdinal):
        parse_ordinal(text)


def test_parser_round_trip_and_whitespace():
    a = parse_ordinal("w^2*3 + w*2 + 5")
    assert str(a) == "w^2*3 + w*2 + 5"
    assert parse_ordinal(" w^2*3+w*2 +5 ") == a
    assert parse_ordinal("ω") == W
    assert parse_ordinal("w^w", ceiling=None) == parse_ordinal("w^(w)", ceiling=None)


CORPUS = list(iter_below(6, 3))


def test_corpus_is_strictly_increasing():
    # iter_below lists ordinals in increasing order; this exercises trichotomy and transitivity
    for a, b in zip(CORPUS, CORPUS[1:]):
        assert compare(a, b) == -1 and compare(b, a) == 1


@given(st.sampled_from(CORPUS), st.sampled_from(CORPUS), st.sampled_from(CORPUS))
def test_trichotomy_and_transitivity(a, b, c):
    assert [compare(a, b) == v for v in (-1, 0, 1)].count(True) == 1
    assert (compare(a, b) == 0) == (a == b)
    if compare(a, b) < 0 and compare(b, c) < 0:
        assert compare(a, c) < 0


@given(st.sampled_from(CORPUS))
def test_successor_round_trip(a):
    s = a.successor()
    assert kind(s) is OrdinalKind.SUCCESSOR and s.predecessor == a
    assert compare(a, s) == -1
    assert parse_ordinal(str(a), ceiling=None) == a


LIMITS = [a for a in CORPUS if kind(a) is OrdinalKind.LIMIT and compare(a, parse_ordinal("w^3", ceiling=None)) <= 0]


@pytest.mark.parametrize("lam", LIMITS[:40], ids=str)
def test_fundamental_sequences_increase_below_limit(lam):
    prev = None
    for n in range(1, 201):
        cur = fundamental_sequence(lam, n)
        assert compare(cur, lam) == -1
        if prev is not None:
            assert compare(prev, cur) == -1
        prev = cur
