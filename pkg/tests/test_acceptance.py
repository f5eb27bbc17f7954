"""Acceptance criteria 1-9, one test each.

Every test records one PASS/FAIL line, printed in the terminal summary.
Random inputs come from fixed seeds.
"""

import random
import time

from mht.formula import (
    BOT,
    TOP,
    Always,
    Atom,
    Iff,
    Not,
    Or,
    Release,
    Since,
    Theory,
    Trigger,
    Until,
    alphabet,
    has_implication,
    max_subindex,
    size,
)
from mht.generate import FormulaConfig, all_formulas, all_ht_traces, random_formula, random_ht_trace
from mht.models import bounded_equiv, bounded_tautology, enumerate_models, mel_models
from mht.parser import parse_formula, parse_theory, print_formula
from mht.search import search_models
from mht.semantics import FALSE, THERE, TRUE, Evaluator
from mht.trace import HTTrace, Trace, reverse
from mht.transform import closure, display_form, eta, labeled_closure, swap_time, boolean_dual, tau, upsilon

from test_transform import TABLE

GAMMA = parse_theory("G (red & green -> #false)\nG (~green -> red)\nG (push -> F[3] G[4] green)")
GAMMA_PUSH = GAMMA + Theory((parse_formula("X push"),))
RULE4 = parse_formula("G (push -> F[3] G[4] green)")
ATOMS = ("p", "q")
CONFIG = FormulaConfig(atoms=ATOMS, max_depth=3, max_bound=3)


def run(criterion, number, body):
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as e:  # recorded, then re-raised
        criterion(number, False, f"{type(e).__name__}: {e}")
        raise
    criterion(number, ok, f"{detail} [{time.perf_counter() - start:.2f} s]")
    assert ok, detail


def total(*states):
    return HTTrace.total(Trace(tuple(frozenset(s) for s in states)))


def ht(here, there):
    return HTTrace(Trace(tuple(map(frozenset, here))), Trace(tuple(map(frozenset, there))))


def sample(seed, n, cfg=CONFIG):
    rng = random.Random(seed)
    return [random_formula(rng, cfg) for _ in range(n)]


def test_criterion_1_traffic_light(criterion):
    def body():
        start = time.perf_counter()
        mtl = enumerate_models(GAMMA, None, 1, "mtl")
        mht = enumerate_models(GAMMA, None, 1, "mht")
        mel = mel_models(GAMMA, None, 1)
        elapsed = time.perf_counter() - start
        want_mtl = {m.key() for m in (total({"red"}), total({"green"}), total({"green", "push"}))}
        extra = {m.key() for m in (ht([()], [{"green"}]), ht([()], [{"green", "push"}]), ht([{"green"}], [{"green", "push"}]))}
        ok = (
            mtl.keys() == want_mtl
            and mht.keys() == want_mtl | extra
            and mel.keys() == {total({"red"}).key()}
            and elapsed < 1.0
        )
        return ok, f"|MTL|={len(mtl)} |MHT|={len(mht)} MEL={[str(m) for m in mel]} in {elapsed:.3f} s (< 1 s)"

    run(criterion, 1, body)


def test_criterion_2_unique_equilibrium(criterion):
    def body():
        start = time.perf_counter()
        mel = mel_models(GAMMA_PUSH, None, 3)
        elapsed = time.perf_counter() - start
        want = total({"red"}, {"red", "push"}, {"green"})
        ok = mel.keys() == {want.key()} and elapsed < 5.0
        return ok, f"MEL={[str(m) for m in mel]} in {elapsed:.3f} s (< 5 s)"

    run(criterion, 2, body)


def _green_block(m):
    t = m.there
    if t[0] != {"red"} or [k for k in range(len(t)) if "push" in t[k]] != [1]:
        return None
    greens = [k for k in range(len(t)) if "green" in t[k]]
    if len(greens) != 4 or greens != list(range(greens[0], greens[0] + 4)):
        return None
    for k in range(len(t)):
        want = {"green"} if k in greens else {"red"}
        if k == 1:
            want = want | {"push"}
        if t[k] != want:
            return None
    return greens[0]


def test_criterion_3_three_equilibria(criterion):
    def body():
        start = time.perf_counter()
        mel = mel_models(GAMMA_PUSH, None, 7, workers=4)
        elapsed = time.perf_counter() - start
        starts = sorted(_green_block(m) or -1 for m in mel)
        ok = len(mel) == 3 and starts == [1, 2, 3] and elapsed < 300
        return ok, f"{len(mel)} models, green blocks start at {starts}, {elapsed:.2f} s with 4 workers (< 300 s)"

    run(criterion, 3, body)


def test_criterion_4_three_valued_agreement(criterion):
    def body():
        fs = all_formulas(ATOMS, 1) + sample(4, 300)
        cases = failures = 0
        for length in (1, 2, 3):
            for m in all_ht_traces(ATOMS, length):
                ev = Evaluator(m)
                for f in fs:
                    for k in range(length):
                        v = ev.value(k, f)
                        cases += 1
                        if ev.holds(k, f) != (v == TRUE) or ev.holds(k, f, THERE) != (v != FALSE):
                            failures += 1
        ok = failures == 0 and cases >= 10**4
        return ok, f"{cases} cases over {len(fs)} formulas and all HT-traces (|A|=2, length<=3), {failures} failures"

    run(criterion, 4, body)


def test_criterion_5_translations_faithful(criterion):
    def body():
        fs = sample(5, 500)
        failures = 0
        for f in fs:
            theory, _ = upsilon(f)
            extended = tuple(sorted(set(alphabet(theory)) | set(ATOMS)))
            g = tau(f)
            for length in (1, 2, 3):
                for logic in ("mht", "mtl"):
                    direct = enumerate_models([f], ATOMS, length, logic)
                    via_tau = enumerate_models([g], ATOMS, length, logic)
                    via_ups = search_models(theory, extended, length, logic, project=ATOMS)
                    if not direct.traces == via_tau.traces == via_ups.traces:
                        failures += 1
        flat = "(green & wX green & wX wX green & wX wX wX green)"
        displayed = parse_formula(f"G (push -> ({flat} | X {flat} | X X {flat}))")
        display_ok = display_form(tau(RULE4)) == display_form(displayed)
        ok = failures == 0 and display_ok
        return ok, (
            f"{len(fs)} formulas x lengths 1-3 x (MHT, MTL): {failures} failures; "
            f"tau(rule 4) matches the displayed expansion: {display_ok}"
        )

    run(criterion, 5, body)


def test_criterion_6_closure_and_labels(criterion):
    def body():
        theory, table = upsilon(RULE4)
        labeled = labeled_closure(RULE4)
        rows_ok = [print_formula(f) for f in labeled] == [r[0] for r in TABLE] and all(
            eta(f, table) == [parse_formula(x) for x in rows] for f, (_, rows) in zip(labeled, TABLE)
        )
        cfg = FormulaConfig(atoms=ATOMS, max_depth=4, max_bound=6, min_bound=-1)
        fs = sample(6, 1000, cfg)
        violations = sum(len(closure(f)) > 2 * max_subindex(f) * size(f) for f in fs)
        ok = len(labeled) == 15 and rows_ok and violations == 0
        return ok, (
            f"{len(labeled)} labeled closure members ({len(closure(RULE4))} with atoms and constants), "
            f"table rows match: {rows_ok}; size bound violated on {violations} of {len(fs)} formulas"
        )

    run(criterion, 6, body)


def test_criterion_7_dualities(criterion):
    def body():
        fs = sample(7, 150) + [Iff(f, tau(f)) for f in sample(70, 150)]
        verdicts = [(bool(bounded_tautology(f, ATOMS, 3)), bool(bounded_tautology(swap_time(f), ATOMS, 3))) for f in fs]
        sigma_bad = sum(a != b for a, b in verdicts)
        valid = sum(a for a, _ in verdicts)
        free = FormulaConfig(atoms=ATOMS, max_depth=3, max_bound=3, implications=False)
        rng = random.Random(71)
        pairs = [(random_formula(rng, free), random_formula(rng, free)) for _ in range(150)]
        pairs += [(f, tau(f)) for f in sample(72, 150, free)]
        assert not any(has_implication(a) or has_implication(b) for a, b in pairs)
        equiv = [
            (bool(bounded_equiv(a, b, ATOMS, 3)), bool(bounded_equiv(boolean_dual(a), boolean_dual(b), ATOMS, 3)))
            for a, b in pairs
        ]
        delta_bad = sum(x != y for x, y in equiv)
        equivalent = sum(x for x, _ in equiv)
        rng = random.Random(73)
        cfg4 = FormulaConfig(atoms=ATOMS, max_depth=4, max_bound=3)
        reversal_bad = 0
        for _ in range(500):
            f = random_formula(rng, cfg4)
            m = random_ht_trace(rng, ATOMS, rng.randint(1, 4))
            k = rng.randrange(len(m))
            reversal_bad += Evaluator(m).holds(k, f) != Evaluator(reverse(m)).holds(len(m) - 1 - k, swap_time(f))
        ok = sigma_bad == delta_bad == reversal_bad == 0
        return ok, (
            f"swapped time: {sigma_bad}/{len(fs)} mismatches ({valid} valid); "
            f"boolean dual: {delta_bad}/{len(pairs)} ({equivalent} equivalent pairs); "
            f"reversal witness: {reversal_bad}/500"
        )

    run(criterion, 7, body)


def _unfolding_cases():
    p, q = Atom("p"), Atom("q")
    nxt = {Until: "X", Release: "wX", Since: "Y", Trigger: "wY"}
    sym = {Until: "U", Release: "R", Since: "S", Trigger: "T"}
    for op in (Until, Release, Since, Trigger):
        o, s = nxt[op], sym[op]
        existential = op in (Until, Since)
        for n in (1, 2, 3, 4, 5):
            if existential:
                rhs = f"q | p & {o} (p {s}[{n - 1}] q)"
            else:
                rhs = f"q & (p | {o} (p {s}[{n - 1}] q))"
            yield f"p {s}[{n}] q", rhs
        rhs = f"q | p & {o} (p {s} q)" if existential else f"q & (p | {o} (p {s} q))"
        yield f"p {s} q", rhs
        for n in (0, -1, -3):
            yield op(n, p, q), BOT if existential else TOP
    yield "F[1] clean", "clean"
    yield "F[0] clean", "#false"


def test_criterion_8_unfoldings(criterion):
    def body():
        cases = [
            (parse_formula(a) if isinstance(a, str) else a, parse_formula(b) if isinstance(b, str) else b)
            for a, b in _unfolding_cases()
        ]
        bad = [print_formula(a) for a, b in cases if not bounded_equiv(a, b, max_length=4)]
        return not bad, f"{len(cases) - len(bad)}/{len(cases)} equivalences hold up to length 4 {bad or ''}"

    run(criterion, 8, body)


def test_criterion_9_excluded_middle_and_persistence(criterion):
    def body():
        rng = random.Random(9)
        small = FormulaConfig(atoms=ATOMS, max_depth=2, max_bound=3)
        em = Theory(tuple(Always(Or(Atom(a), Not(Atom(a)))) for a in ATOMS))
        em_bad = 0
        theories = [Theory(tuple(random_formula(rng, small) for _ in range(rng.randint(1, 2)))) for _ in range(200)]
        for th in theories:
            for length in (1, 2, 3):
                mtl = enumerate_models(th, ATOMS, length, "mtl").keys()
                with_em = enumerate_models(th + em, ATOMS, length, "mht")
                em_bad += mtl != {m.key() for m in with_em if m.is_total}
        fs = all_formulas(ATOMS, 1) + sample(90, 200)
        pers_bad = cases = 0
        for length in (1, 2, 3):
            for m in all_ht_traces(ATOMS, length):
                ev, tv = Evaluator(m), Evaluator(HTTrace.total(m.there))
                for f in fs:
                    neg = Not(f)
                    for k in range(length):
                        cases += 1
                        t = tv.holds(k, f)
                        pers_bad += (ev.holds(k, f) and not t) or (ev.holds(k, neg) == t)
        ok = em_bad == 0 and pers_bad == 0
        return ok, (
            f"excluded middle: {em_bad} mismatches over {len(theories)} theories x lengths 1-3; "
            f"persistence: {pers_bad} failures in {cases} cases"
        )

    run(criterion, 9, body)
