import pytest
from hypothesis import given, settings, strategies as st

from mht.formula import BOT, TOP, Always, Atom, Not, Or, Theory, Until, derive
from mht.models import (
    CapExceeded,
    ModelSet,
    NotAModel,
    bounded_equiv,
    bounded_tautology,
    enumerate_models,
    find_smaller_model,
    is_equilibrium,
    mel_models,
    models,
)
from mht.parser import parse_formula, parse_theory
from mht.semantics import holds_theory
from mht.generate import all_ht_traces
from mht.trace import HTTrace, Trace
from mht.transform import boolean_dual, swap_time

from strategies import formulas

GAMMA = parse_theory("G (red & green -> #false)\nG (~green -> red)\nG (push -> F[3] G[4] green)")
GAMMA_PUSH = GAMMA + Theory((parse_formula("X push"),))
EMPTY = Theory(())


def T(*states):
    return Trace(tuple(frozenset(s) for s in states))


def total(*states):
    return HTTrace.total(T(*states))


def ht(here, there):
    return HTTrace(T(*here), T(*there))


def keys(*ms):
    return {m.key() for m in ms}


def test_traffic_light_mtl():
    ms = enumerate_models(GAMMA, None, 1, "mtl")
    assert ms.keys() == keys(total({"red"}), total({"green"}), total({"green", "push"}))
    assert ms.alphabet == ("green", "push", "red")


def test_traffic_light_mht():
    ms = enumerate_models(GAMMA, None, 1, "mht")
    extra = keys(ht([()], [{"green"}]), ht([()], [{"green", "push"}]), ht([{"green"}], [{"green", "push"}]))
    assert ms.keys() == enumerate_models(GAMMA, None, 1, "mtl").keys() | extra
    assert len(ms) == 6


def test_traffic_light_mel():
    assert mel_models(GAMMA, None, 1).keys() == keys(total({"red"}))


def test_pushed_light_mel():
    assert mel_models(GAMMA_PUSH, None, 3).keys() == keys(total({"red"}, {"red", "push"}, {"green"}))


def test_empty_theory():
    assert enumerate_models(EMPTY, ["p"], 1, "mtl").keys() == keys(total(()), total({"p"}))
    assert mel_models(EMPTY, ["p"], 2).keys() == keys(total((), ()))
    assert mel_models(EMPTY, ["p"], 1).keys() == keys(total(()))


def test_is_equilibrium():
    assert is_equilibrium(T({"red"}), GAMMA)
    assert not is_equilibrium(T({"green"}), GAMMA)
    assert find_smaller_model(T({"green"}), GAMMA) == ht([()], [{"green"}])
    with pytest.raises(NotAModel):
        is_equilibrium(T({"red", "green"}), GAMMA)


def test_smaller_model_witness():
    t = T({"red"}, {"green", "push"}, {"green"})
    assert not is_equilibrium(t, GAMMA_PUSH)
    w = find_smaller_model(t, GAMMA_PUSH)
    assert w == HTTrace(T({"red"}, {"push"}, {"green"}), t)


def test_rejects_zero_length_and_bad_alphabet():
    with pytest.raises(ValueError):
        enumerate_models(GAMMA, None, 0)
    with pytest.raises(ValueError):
        mel_models(GAMMA, None, 0)
    with pytest.raises(ValueError):
        enumerate_models(GAMMA, ["red"], 1)
    with pytest.raises(ValueError):
        models(GAMMA, None, 1, "mht", engine="magic")


def test_cap():
    with pytest.raises(CapExceeded):
        enumerate_models(GAMMA, None, 3, "mht", cap=1000)
    with pytest.raises(CapExceeded):
        bounded_tautology(Or(Atom("p"), TOP), None, 4, cap=10)


def test_modelset_sorted_and_deduplicated():
    a, b = total({"q"}), total({"p"})
    s = ModelSet("mtl", ("q", "p"), 1, (a, b, a))
    assert s.traces == (b, a) and s.alphabet == ("p", "q")
    assert T({"p"}) in s


def test_excluded_middle():
    em = Always(Or(Atom("p"), Not(Atom("p"))))
    v = bounded_tautology(em, None, 3, "mht")
    assert not v and v.counterexample == ht([()], [{"p"}]) and v.k == 0
    assert bounded_tautology(em, None, 3, "mtl")


def test_validity_examples():
    assert bounded_tautology(TOP, [], 3, "mht") and bounded_tautology(TOP, [], 3, "mtl")
    p, q = Atom("p"), Atom("q")
    for op in ("until", "release", "since", "trigger"):
        f = derive("iff", derive(op, p, q, bound=1), q)
        assert bounded_tautology(f, None, 4, "mht")


def test_equivalence_examples():
    clean = Atom("clean")
    assert bounded_equiv(parse_formula("F[5] clean"), parse_formula("clean | X F[4] clean"), max_length=4)
    assert bounded_equiv(Until(0, TOP, clean), BOT, max_length=4)
    v = bounded_equiv(Atom("p"), Atom("q"), max_length=2)
    assert not v and v.counterexample == total({"p"}) and v.k == 0


theories = st.lists(formulas(max_depth=2), min_size=1, max_size=2).map(lambda fs: Theory(tuple(fs)))


@given(theories, st.integers(1, 2))
def test_model_set_inclusions(th, length):
    a = ("p", "q")
    mht = enumerate_models(th, a, length, "mht")
    mtl = enumerate_models(th, a, length, "mtl")
    mel = mel_models(th, a, length)
    assert mel.keys() <= mtl.keys()
    assert mtl.keys() == {m.key() for m in mht if m.is_total}
    for m in mel:
        assert find_smaller_model(m.there, th, a) is None


@given(theories)
@settings(max_examples=40)
def test_excluded_middle_characterisation(th):
    a = ("p", "q")
    em = Theory(tuple(Always(Or(Atom(x), Not(Atom(x)))) for x in a))
    for length in (1, 2, 3):
        mtl = enumerate_models(th, a, length, "mtl")
        with_em = enumerate_models(th + em, a, length, "mht")
        assert mtl.keys() == {m.key() for m in with_em if m.is_total}
        # excluded middle leaves no non-total models at all
        assert all(m.is_total for m in with_em)


@given(theories)
@settings(max_examples=20)
def test_models_match_scalar_check(th):
    a = ("p", "q")
    found = enumerate_models(th, a, 2, "mht").keys()
    expected = {m.key() for m in all_ht_traces(a, 2) if holds_theory(m, th)}
    assert found == expected


def test_worker_count_does_not_change_output():
    for logic in ("mht", "mtl", "mel"):
        one = models(GAMMA, None, 3, logic, workers=1)
        three = models(GAMMA, None, 3, logic, workers=3)
        assert one.traces == three.traces


def test_lengths_partition_equilibria():
    per_length = [mel_models(GAMMA_PUSH, None, n) for n in (1, 2, 3, 4)]
    seen = set()
    for s in per_length:
        assert not seen & s.keys()
        assert all(len(m) == s.length for m in s)
        seen |= s.keys()


@given(formulas(max_depth=3))
@settings(max_examples=60)
def test_temporal_duality(f):
    a = ("p", "q")
    assert bool(bounded_tautology(f, a, 3)) == bool(bounded_tautology(swap_time(f), a, 3))


@given(formulas(max_depth=2, implications=False), formulas(max_depth=2, implications=False))
@settings(max_examples=60)
def test_boolean_duality(f, g):
    a = ("p", "q")
    assert bool(bounded_equiv(f, g, a, 3)) == bool(bounded_equiv(boolean_dual(f), boolean_dual(g), a, 3))
