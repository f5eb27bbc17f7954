"""Model search by grounding into three-valued propositional constraints.

At a fixed length every formula evaluated at a time point unrolls into a
propositional Goedel G3 expression over variables ``(atom, step)`` with
values 0 (false), 1 (there only) and 2 (here).  A theory holds at an
HT-trace iff each grounded formula at step 0 has value 2.  The solver is a
depth-first search with forward checking and interval bounds, branching on
the projection variables first; once those are fixed it only looks for one
completion.  This is what makes label-extended theories tractable, whose
brute-force candidate spaces are far beyond any cap.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from mht.formula import (
    And,
    Atom,
    Falsum,
    Formula,
    Implies,
    Next,
    Or,
    Prev,
    Release,
    Since,
    Trigger,
    Until,
    Verum,
    WeakNext,
    WeakPrev,
    resolve,
)
from mht.models import ModelSet, _as_theory, _check_length, _resolve_alphabet
from mht.trace import HTTrace, Trace

C0, C1, C2 = ("c", 0), ("c", 1), ("c", 2)

# domains are bitmasks over {0, 1, 2}
_LO = [None, 0, 1, 0, 2, 0, 1, 0]
_HI = [None, 0, 1, 1, 2, 2, 2, 2]
_SINGLE = [False, True, True, False, True, False, False, False]
_VALUES = [tuple(v for v in range(3) if m >> v & 1) for m in range(8)]
_DOMAIN = {"mht": 0b111, "mtl": 0b101}


def _mk_junction(tag: str, parts: Iterable[tuple]) -> tuple:
    unit, zero = (C2, C0) if tag == "and" else (C0, C2)
    out: list[tuple] = []
    seen = set()
    for p in parts:
        if p[0] == tag:
            items = p[1]
        else:
            items = (p,)
        for q in items:
            if q == zero:
                return zero
            if q == unit or q in seen:
                continue
            seen.add(q)
            out.append(q)
    if not out:
        return unit
    if len(out) == 1:
        return out[0]
    return (tag, tuple(out))


def _mk_imp(a: tuple, b: tuple) -> tuple:
    if a == C0 or b == C2 or a == b:
        return C2
    if a == C2:
        return b
    return ("imp", a, b)


class Grounder:
    """Ground formulas at time points of one trace length."""

    def __init__(self, alphabet: Sequence[str], length: int):
        self.alphabet = tuple(alphabet)
        self.index = {a: i for i, a in enumerate(self.alphabet)}
        self.width = len(self.alphabet)
        self.length = length
        self._memo: dict[tuple[Formula, int], tuple] = {}

    def var(self, name: str, k: int) -> tuple:
        i = self.index.get(name)
        return C0 if i is None else ("v", k * self.width + i)

    def ground(self, f: Formula, k: int) -> tuple:
        key = (f, k)
        r = self._memo.get(key)
        if r is None:
            r = self._ground(f, k)
            self._memo[key] = r
        return r

    def _ground(self, f: Formula, k: int) -> tuple:
        g, n = self.ground, self.length
        if isinstance(f, Atom):
            return self.var(f.name, k)
        if isinstance(f, Verum):
            return C2
        if isinstance(f, Falsum):
            return C0
        if isinstance(f, And):
            return _mk_junction("and", (g(f.left, k), g(f.right, k)))
        if isinstance(f, Or):
            return _mk_junction("or", (g(f.left, k), g(f.right, k)))
        if isinstance(f, Implies):
            return _mk_imp(g(f.left, k), g(f.right, k))
        if isinstance(f, Next):
            return g(f.arg, k + 1) if k + 1 < n else C0
        if isinstance(f, WeakNext):
            return g(f.arg, k + 1) if k + 1 < n else C2
        if isinstance(f, Prev):
            return g(f.arg, k - 1) if k > 0 else C0
        if isinstance(f, WeakPrev):
            return g(f.arg, k - 1) if k > 0 else C2
        bound = resolve(f.bound, n)
        if isinstance(f, (Until, Release)):
            pts = [k + i for i in range(bound) if k + i < n]
            prefix = lambda p: range(k, p)  # noqa: E731
        elif isinstance(f, (Since, Trigger)):
            pts = [k - i for i in range(bound) if k - i >= 0]
            prefix = lambda p: range(p + 1, k + 1)  # noqa: E731
        else:
            raise TypeError(f"not a formula: {f!r}")
        if isinstance(f, (Until, Since)):
            return _mk_junction(
                "or",
                (_mk_junction("and", [g(f.right, p)] + [g(f.left, j) for j in prefix(p)]) for p in pts),
            )
        return _mk_junction(
            "and",
            (_mk_junction("or", [g(f.right, p)] + [g(f.left, j) for j in prefix(p)]) for p in pts),
        )


def _interval(node: tuple, dom: list[int]) -> tuple[int, int]:
    tag = node[0]
    if tag == "v":
        m = dom[node[1]]
        return _LO[m], _HI[m]
    if tag == "c":
        return node[1], node[1]
    if tag == "imp":
        la, ha = _interval(node[1], dom)
        lb, hb = _interval(node[2], dom)
        if ha <= lb:
            return 2, 2
        return lb, (2 if la <= hb else hb)
    if tag == "and":
        lo = hi = 2
        for c in node[1]:
            l, h = _interval(c, dom)
            if l < lo:
                lo = l
            if h < hi:
                hi = h
                if hi == 0:
                    break
        return lo, hi
    lo = hi = 0
    for c in node[1]:
        l, h = _interval(c, dom)
        if h > hi:
            hi = h
        if l > lo:
            lo = l
            if lo == 2:
                break
    return lo, hi


def _variables(node: tuple, out: set[int]) -> set[int]:
    tag = node[0]
    if tag == "v":
        out.add(node[1])
    elif tag == "imp":
        _variables(node[1], out)
        _variables(node[2], out)
    elif tag in ("and", "or"):
        for c in node[1]:
            _variables(c, out)
    return out


class Unsatisfiable(Exception):
    pass


class ConstraintSystem:
    """Each constraint is a grounded expression that must take value 2."""

    def __init__(self, nvars: int, domain: int):
        self.domains = [domain] * nvars
        self.constraints: list[tuple] = []
        self.scope: list[tuple[int, ...]] = []
        self.watch: list[list[int]] = [[] for _ in range(nvars)]
        self.unsat = False

    def require(self, node: tuple) -> None:
        tag = node[0]
        if node == C2:
            return
        if tag == "c":
            self.unsat = True
        elif tag == "and":
            for c in node[1]:
                self.require(c)
        elif tag == "v":
            self.domains[node[1]] &= 0b100
            self.unsat |= self.domains[node[1]] == 0
        else:
            self._add(node)

    def _add(self, node: tuple) -> None:
        cid = len(self.constraints)
        vs = tuple(sorted(_variables(node, set())))
        self.constraints.append(node)
        self.scope.append(vs)
        for v in vs:
            self.watch[v].append(cid)

    def propagate(self, dom: list[int], pending: set[int]) -> bool:
        cons, scope, watch = self.constraints, self.scope, self.watch
        while pending:
            cid = pending.pop()
            node = cons[cid]
            open_ = [v for v in scope[cid] if not _SINGLE[dom[v]]]
            if len(open_) == 1:
                v = open_[0]
                old = dom[v]
                keep = 0
                for val in _VALUES[old]:
                    dom[v] = 1 << val
                    if _interval(node, dom)[0] == 2:
                        keep |= 1 << val
                dom[v] = keep
                if not keep:
                    return False
                if keep != old:
                    pending.update(watch[v])
            else:
                lo, hi = _interval(node, dom)
                if hi < 2:
                    return False
        return True

    def solutions(self, order: Sequence[int], project: int | None = None) -> Iterator[list[int]]:
        """Solutions as value lists.

        ``order`` lists the branching priority.  With ``project`` set, only the
        first ``project`` variables of ``order`` are enumerated exhaustively;
        one completion is reported per projected assignment.
        """
        if self.unsat:
            return
        dom = list(self.domains)
        if not self.propagate(dom, set(range(len(self.constraints)))):
            return
        head = list(order[:project]) if project is not None else list(order)
        rest = [v for v in range(len(dom)) if v not in set(head)]
        yield from self._search(dom, head, rest, project is not None)

    def _pick(self, dom, candidates):
        best, size = None, 4
        for v in candidates:
            s = len(_VALUES[dom[v]])
            if 1 < s < size:
                best, size = v, s
                if s == 2:
                    break
        return best

    def _search(self, dom, head, rest, first_only_tail):
        v = next((v for v in head if not _SINGLE[dom[v]]), None)
        if v is None:
            if first_only_tail:
                sol = next(self._complete(dom, rest), None)
                if sol is not None:
                    yield sol
                return
            yield from self._complete(dom, rest)
            return
        for val in _VALUES[dom[v]]:
            child = list(dom)
            child[v] = 1 << val
            if self.propagate(child, set(self.watch[v])):
                yield from self._search(child, head, rest, first_only_tail)

    def _complete(self, dom, rest):
        v = self._pick(dom, rest)
        if v is None:
            yield [_LO[m] for m in dom]
            return
        for val in _VALUES[dom[v]]:
            child = list(dom)
            child[v] = 1 << val
            if self.propagate(child, set(self.watch[v])):
                yield from self._complete(child, rest)


def build(theory, alphabet: Sequence[str], length: int, logic: str) -> tuple[ConstraintSystem, Grounder]:
    g = Grounder(alphabet, length)
    cs = ConstraintSystem(length * len(alphabet), _DOMAIN[logic])
    for f in theory:
        cs.require(g.ground(f, 0))
    return cs, g


def _trace(values: Sequence[int], alphabet: Sequence[str], length: int, project) -> HTTrace:
    w = len(alphabet)
    here, there = [], []
    for k in range(length):
        row = values[k * w:(k + 1) * w]
        here.append(frozenset(a for a, v in zip(alphabet, row) if v == 2 and a in project))
        there.append(frozenset(a for a, v in zip(alphabet, row) if v >= 1 and a in project))
    return HTTrace(Trace(tuple(here)), Trace(tuple(there)))


def _order(alphabet, length, project) -> list[int]:
    w = len(alphabet)
    first = [k * w + i for k in range(length) for i, a in enumerate(alphabet) if a in project]
    return first + [k * w + i for k in range(length) for i, a in enumerate(alphabet) if a not in project]


def search_models(
    theory,
    alphabet: Iterable[str] | None = None,
    length: int = 1,
    logic: str = "mht",
    *,
    project: Iterable[str] | None = None,
) -> ModelSet:
    """MHT or MTL models, optionally projected onto a sub-alphabet.

    Projection is existential: a projected trace is reported iff some
    extension over the full alphabet is a model.
    """
    _check_length(length)
    if logic not in _DOMAIN:
        raise ValueError(f"search_models handles 'mht' and 'mtl', not {logic!r}")
    theory = _as_theory(theory)
    alpha = _resolve_alphabet(theory, alphabet)
    keep = set(alpha) if project is None else set(project)
    if not keep <= set(alpha):
        raise ValueError(f"projection atoms {sorted(keep - set(alpha))} are not in the alphabet")
    cs, _ = build(theory, alpha, length, logic)
    order = _order(alpha, length, keep)
    nproj = len(keep) * length
    sols = cs.solutions(order, nproj if project is not None else None)
    traces = tuple(_trace(s, alpha, length, keep) for s in sols)
    return ModelSet(logic, tuple(sorted(keep)), length, traces)


def smaller_model(t: Trace, theory, alphabet: Sequence[str]) -> HTTrace | None:
    """Some ``<H,T>`` model with ``H < T``, found by search, or ``None``."""
    theory = _as_theory(theory)
    alpha = tuple(alphabet)
    length = len(t)
    cs, g = build(theory, alpha, length, "mht")
    inside = []
    for k in range(length):
        for i, a in enumerate(alpha):
            v = k * len(alpha) + i
            if a in t[k]:
                cs.domains[v] &= 0b110
                inside.append(v)
            else:
                cs.domains[v] &= 0b001
    if not inside or any(d == 0 for d in cs.domains):
        return None
    # some variable of T must drop to "there only"
    cs.require(_mk_junction("or", (_mk_imp(("v", v), C1) for v in inside)))
    sol = next(cs.solutions(inside), None)
    if sol is None:
        return None
    return _trace(sol, alpha, length, set(alpha))


def search_mel(
    theory,
    alphabet: Iterable[str] | None = None,
    length: int = 1,
    *,
    project: Iterable[str] | None = None,
) -> ModelSet:
    """Equilibrium models over the full alphabet, then projected."""
    theory = _as_theory(theory)
    alpha = _resolve_alphabet(theory, alphabet)
    totals = search_models(theory, alpha, length, "mtl").totals()
    stable = [t for t in totals if smaller_model(t, theory, alpha) is None]
    keep = set(alpha) if project is None else set(project)
    traces = tuple(_trace_restrict(t, keep) for t in stable)
    return ModelSet("mel", tuple(sorted(keep)), length, traces)


def _trace_restrict(t: Trace, keep: set[str]) -> HTTrace:
    return HTTrace.total(Trace(tuple(s & keep for s in t)))
