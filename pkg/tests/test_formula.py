import pickle

import pytest
from hypothesis import given, strategies as st

from mht.formula import (
    BOT,
    ELL,
    FINAL,
    INITIAL,
    TOP,
    And,
    Atom,
    Implies,
    Next,
    Prev,
    Release,
    Theory,
    Until,
    WeakNext,
    Since,
    alphabet,
    derive,
    depth,
    interval,
    iterate,
    max_subindex,
    size,
)
from mht.models import bounded_equiv
from mht.parser import parse_formula, parse_theory

from strategies import formulas

p, q, green = Atom("p"), Atom("q"), Atom("green")


def test_derive_eventually_is_until_with_top():
    assert derive("eventually", p, bound=3) == Until(3, TOP, p)


def test_derive_not_bot():
    assert derive("not", BOT) == Implies(BOT, BOT)


def test_derive_until_defaults_to_trace_length():
    assert derive("until", p, q) == Until(ELL, p, q)


@pytest.mark.parametrize(
    "op, expected",
    [
        ("always", Release(ELL, BOT, p)),
        ("once", Since(ELL, TOP, p)),
        ("iff", None),
    ],
)
def test_derive_sugar(op, expected):
    if op == "iff":
        assert derive("iff", p, q) == And(Implies(p, q), Implies(q, p))
    else:
        assert derive(op, p) == expected


def test_derive_constants():
    assert derive("top") == TOP
    assert derive("initial") == INITIAL == Implies(Prev(TOP), BOT)
    assert derive("final") == FINAL == Implies(Next(TOP), BOT)


def test_derive_unknown():
    with pytest.raises(ValueError):
        derive("sometimes", p)


def test_iterate():
    assert iterate("next", 2, p) == Next(Next(p))
    assert iterate("prev", 0, p) == p
    assert iterate("weak-next", 3, green) == WeakNext(WeakNext(WeakNext(green)))


@given(st.sampled_from(["next", "weak-next", "prev", "weak-prev"]), st.integers(0, 5), st.integers(0, 5))
def test_iterate_is_additive(op, a, b):
    assert iterate(op, a, iterate(op, b, p)) == iterate(op, a + b, p)


def test_interval_empty_window_keeps_negative_bound():
    f = interval("eventually", 5, 3, p)
    assert f == iterate("next", 5, Until(-2, TOP, p))
    assert bounded_equiv(f, BOT, max_length=4)


def test_interval_one_step():
    f = interval("eventually", 1, 2, p)
    assert f == Next(Until(1, TOP, p))
    assert bounded_equiv(f, Next(p), max_length=4)


def test_interval_zero_lower_is_plain_operator():
    assert interval("always", 0, ELL, p) == Release(ELL, BOT, p)
    assert interval("until", 2, ELL, p, q) == Next(Next(Until(ELL, p, q)))


@pytest.mark.parametrize("op", ["eventually", "until", "once", "since"])
@pytest.mark.parametrize("m, n", [(2, 2), (3, 1)])
def test_empty_interval_is_false(op, m, n):
    args = (p, q) if op in ("until", "since") else (p,)
    assert bounded_equiv(interval(op, m, n, *args), BOT, max_length=4)


@pytest.mark.parametrize("op", ["always", "release", "historically", "trigger"])
@pytest.mark.parametrize("m, n", [(2, 2), (3, 1)])
def test_empty_interval_is_true(op, m, n):
    args = (p, q) if op in ("release", "trigger") else (p,)
    assert bounded_equiv(interval(op, m, n, *args), TOP, max_length=4)


def test_interval_rejects_negative_lower():
    with pytest.raises(ValueError):
        interval("eventually", -1, 3, p)


def test_size():
    assert size(p) == 1
    assert size(And(p, q)) == 3
    assert size(Until(5, p, q)) == 3
    assert size(parse_formula("G (push -> F[3] G[4] green)")) == 9


def test_depth():
    assert depth(p) == 0
    assert depth(Next(And(p, q))) == 2


def test_max_subindex():
    assert max_subindex(p) == 1
    assert max_subindex(parse_formula("F[3] G[4] green")) == 4
    assert max_subindex(Until(ELL, p, q)) == 1
    assert max_subindex(Until(-3, p, q)) == 1


def test_alphabet():
    assert alphabet(parse_theory("red & green -> #false")) == ["green", "red"]
    assert alphabet(Theory((TOP,))) == []
    rules = parse_theory("G (red & green -> #false)\nG (~green -> red)\nG (push -> F[3] G[4] green)")
    assert alphabet(rules) == ["green", "push", "red"]


def test_bound_validation():
    with pytest.raises((TypeError, ValueError)):
        Until("3", p, q)


def test_formulas_are_hashable_and_ordered():
    a, b = Until(2, p, q), Until(2, p, q)
    assert a == b and hash(a) == hash(b) and a is not b
    assert sorted([Until(ELL, p, q), Until(3, p, q), p]) == [p, Until(3, p, q), Until(ELL, p, q)]


@given(formulas())
def test_structural_order_is_total(f):
    g = Next(f)
    assert (f < g) != (g < f)
    assert not f < f


@given(formulas())
def test_pickle_roundtrip(f):
    g = pickle.loads(pickle.dumps(f))
    assert g == f and hash(g) == hash(f)
