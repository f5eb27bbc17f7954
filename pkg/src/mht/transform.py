"""Syntactic transformations and the two metric-to-temporal translations.

``tau`` unfolds numeral bounds into nested one-step operators and keeps the
alphabet; ``upsilon`` introduces one label atom per closure member and
defines it with a handful of equivalences, which keeps the output linear in
the closure size.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from mht.formula import (
    BOT,
    ELL,
    FINAL,
    TOP,
    And,
    Always,
    Atom,
    Falsum,
    Formula,
    Iff,
    Implies,
    Metric,
    Next,
    Not,
    Or,
    Prev,
    Release,
    Since,
    Theory,
    Trigger,
    Until,
    Verum,
    WeakNext,
    WeakPrev,
    alphabet,
)
from mht.models import ModelSet
from mht.trace import restrict


def _rebuild(f: Formula, fn) -> Formula:
    """Apply ``fn`` to the children of ``f`` and rebuild the same connective."""
    if isinstance(f, Metric):
        return type(f)(f.bound, fn(f.left), fn(f.right))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(fn(f.left), fn(f.right))
    if isinstance(f, (Next, WeakNext, Prev, WeakPrev)):
        return type(f)(fn(f.arg))
    return f


# -- dualities --------------------------------------------------------------

_SWAP_TIME = {
    Next: Prev,
    Prev: Next,
    WeakNext: WeakPrev,
    WeakPrev: WeakNext,
    Until: Since,
    Since: Until,
    Release: Trigger,
    Trigger: Release,
}


def swap_time(f: Formula) -> Formula:
    """Replace every temporal connective by its past/future mirror image."""
    cls = _SWAP_TIME.get(type(f))
    if cls is None:
        return _rebuild(f, swap_time)
    if isinstance(f, Metric):
        return cls(f.bound, swap_time(f.left), swap_time(f.right))
    return cls(swap_time(f.arg))


class ImplicationPresent(ValueError):
    def __init__(self, subformula: Formula):
        super().__init__(f"boolean dual undefined: formula contains the implication {subformula}")
        self.subformula = subformula


_BOOLEAN_DUAL = {
    And: Or,
    Or: And,
    Until: Release,
    Release: Until,
    Since: Trigger,
    Trigger: Since,
    Next: WeakNext,
    WeakNext: Next,
    Prev: WeakPrev,
    WeakPrev: Prev,
}


def boolean_dual(f: Formula) -> Formula:
    """Swap each connective with its dual; implications are rejected."""
    if isinstance(f, Implies):
        raise ImplicationPresent(f)
    if isinstance(f, Verum):
        return BOT
    if isinstance(f, Falsum):
        return TOP
    cls = _BOOLEAN_DUAL.get(type(f))
    if cls is None:
        return f
    if isinstance(f, Metric):
        return cls(f.bound, boolean_dual(f.left), boolean_dual(f.right))
    if isinstance(f, (And, Or)):
        return cls(boolean_dual(f.left), boolean_dual(f.right))
    return cls(boolean_dual(f.arg))


# -- unfolding --------------------------------------------------------------

# operator -> (one-step operator used in the recursion, existential?)
_STEP = {Until: (Next, True), Release: (WeakNext, False), Since: (Prev, True), Trigger: (WeakPrev, False)}


def _and(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Verum):
        return b
    if isinstance(b, Verum):
        return a
    return And(a, b)


def _or(a: Formula, b: Formula) -> Formula:
    if isinstance(a, Falsum):
        return b
    if isinstance(b, Falsum):
        return a
    return Or(a, b)


def _step_rhs(f: Metric, inner: Formula, *, simplify: bool) -> Formula:
    """``psi | (phi & X inner)`` or ``psi & (phi | wX inner)`` and past mirrors."""
    step, existential = _STEP[type(f)]
    conj, disj = (_and, _or) if simplify else (And, Or)
    if existential:
        return disj(f.right, conj(f.left, step(inner)))
    return conj(f.right, disj(f.left, step(inner)))


def unfold_step(f: Formula, *, simplify: bool = False) -> Formula:
    """One unfolding of a U/R/S/T formula.

    Nonpositive numeral bounds collapse to a truth constant, positive ones
    decrement, and trace-length bounds unfold into the same operator.
    """
    if not isinstance(f, Metric):
        raise ValueError(f"unfold_step needs a U/R/S/T formula, got {f}")
    existential = _STEP[type(f)][1]
    if f.bound is ELL:
        return _step_rhs(f, f, simplify=simplify)
    if f.bound <= 0:
        return BOT if existential else TOP
    return _step_rhs(f, f.with_bound(f.bound - 1), simplify=simplify)


def simplify_units(f: Formula) -> Formula:
    """Bottom-up ``TOP & x -> x``, ``x & TOP -> x``, ``BOT | x -> x``, ``x | BOT -> x``."""
    f = _rebuild(f, simplify_units)
    if isinstance(f, And):
        return _and(f.left, f.right)
    if isinstance(f, Or):
        return _or(f.left, f.right)
    return f


def tau(f: Formula) -> Formula:
    """Language-preserving translation: expand every numeral-bounded U/R/S/T.

    Trace-length bounds are kept.  Exponential in the worst case.
    """
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        r = memo.get(g)
        if r is None:
            r = _tau(g)
            memo[g] = r
        return r

    def _tau(g: Formula) -> Formula:
        if not isinstance(g, Metric) or g.bound is ELL:
            return _rebuild(g, go)
        if g.bound <= 0:
            return BOT if _STEP[type(g)][1] else TOP
        if g.bound == 1:
            return go(g.right)
        step, existential = _STEP[type(g)]
        rest = go(g.with_bound(g.bound - 1))
        left, right = go(g.left), go(g.right)
        if existential:
            return _or(right, _and(left, step(rest)))
        return _and(right, _or(left, step(rest)))

    return go(f)


# -- normal form used to compare against hand-written expansions -------------


def distribute_steps(f: Formula) -> Formula:
    """Push one-step operators through conjunctions and disjunctions."""
    f = _rebuild(f, distribute_steps)
    if isinstance(f, (Next, WeakNext, Prev, WeakPrev)) and isinstance(f.arg, (And, Or)):
        op = type(f)
        return type(f.arg)(distribute_steps(op(f.arg.left)), distribute_steps(op(f.arg.right)))
    return f


def flatten_chains(f: Formula) -> Formula:
    """Re-associate every conjunction and disjunction chain to the left."""
    if isinstance(f, (And, Or)):
        cls = type(f)
        parts: list[Formula] = []
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, cls):
                stack.append(g.right)
                stack.append(g.left)
            else:
                parts.append(flatten_chains(g))
        out = parts[0]
        for p in parts[1:]:
            out = cls(out, p)
        return out
    return _rebuild(f, flatten_chains)


def display_form(f: Formula) -> Formula:
    return flatten_chains(distribute_steps(simplify_units(f)))


# -- closure ----------------------------------------------------------------


def _unfold_member(f: Metric) -> Formula | None:
    step = _STEP[type(f)][0]
    if f.bound is ELL:
        return step(f)
    if f.bound > 1:
        return step(f.with_bound(f.bound - 1))
    return None


def _successors(f: Formula) -> list[Formula]:
    if isinstance(f, Metric):
        nxt = _unfold_member(f)
        return ([nxt] if nxt is not None else []) + [f.left, f.right]
    return list(f.children)


def closure(f: Formula) -> list[Formula]:
    """Least closed set containing ``f``, in depth-first pre-order.

    Successors of a U/R/S/T member are its one-step unfolding (bound
    decremented, or the same formula for trace-length bounds), then its
    left and right arguments.
    """
    seen: set[Formula] = set()
    out: list[Formula] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        out.append(g)
        stack.extend(reversed(_successors(g)))
    return out


def is_trivial(f: Formula) -> bool:
    """Atoms and truth constants are their own labels."""
    return isinstance(f, (Atom, Verum, Falsum))


def labeled_closure(f: Formula) -> list[Formula]:
    return [g for g in closure(f) if not is_trivial(g)]


# -- labelled translation ---------------------------------------------------

LABEL_PREFIX = "__l"
_LABEL_RE = re.compile(r"__l[0-9]+")


@dataclass
class LabelTable:
    """Bijection between closure members and fresh label atoms."""

    entries: dict[Formula, str] = field(default_factory=dict)
    roots: list[Formula] = field(default_factory=list)

    def label(self, f: Formula) -> Formula:
        if is_trivial(f):
            return f
        return Atom(self.entries[f])

    def add(self, f: Formula) -> bool:
        if is_trivial(f) or f in self.entries:
            return False
        self.entries[f] = f"{LABEL_PREFIX}{len(self.entries) + 1}"
        return True

    @property
    def root(self) -> Formula:
        if len(self.roots) != 1:
            raise ValueError("table has several roots")
        return self.label(self.roots[0])

    def names(self) -> list[str]:
        return list(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)

    def format(self) -> str:
        from mht.parser import print_formula

        return "".join(f"{name}\t{print_formula(f)}\n" for f, name in self.entries.items())


def eta(mu: Formula, table: LabelTable) -> list[Formula]:
    """Formulas fixing the truth value of the label of ``mu``."""
    if is_trivial(mu):
        return []
    lab = table.label
    L = lab(mu)
    if isinstance(mu, (Next, WeakNext)):
        last = Not(L) if isinstance(mu, Next) else L
        return [WeakNext(Always(Iff(Prev(L), lab(mu.arg)))), Always(Implies(FINAL, last))]
    if isinstance(mu, (Prev, WeakPrev)):
        first = Not(L) if isinstance(mu, Prev) else L
        return [WeakNext(Always(Iff(L, Prev(lab(mu.arg))))), first]
    if isinstance(mu, Metric):
        existential = _STEP[type(mu)][1]
        if mu.bound is not ELL and mu.bound <= 0:
            return [Always(Iff(L, BOT if existential else TOP))]
        if mu.bound is not ELL and mu.bound == 1:
            return [Always(Iff(L, lab(mu.right)))]
        la, lb, lnext = lab(mu.left), lab(mu.right), lab(_unfold_member(mu))
        rhs = _or(lb, _and(la, lnext)) if existential else _and(lb, _or(la, lnext))
        return [Always(Iff(L, rhs))]
    # Boolean connective: the label mirrors the connective over child labels
    la, lb = lab(mu.left), lab(mu.right)
    rhs = {And: _and, Or: _or, Implies: Implies}[type(mu)](la, lb)
    return [Always(Iff(L, rhs))]


def upsilon_theory(theory) -> tuple[Theory, LabelTable]:
    """Labelled translation of a theory with one shared label table."""
    if isinstance(theory, Formula):
        theory = (theory,)
    clash = [a for a in alphabet(theory) if _LABEL_RE.fullmatch(a)]
    if clash:
        raise ValueError(f"atoms {clash} collide with translation labels")
    table = LabelTable()
    members: list[Formula] = []
    for f in theory:
        table.roots.append(f)
        for mu in closure(f):
            if table.add(mu):
                members.append(mu)
    out = [table.label(f) for f in theory]
    for mu in members:
        out.extend(eta(mu, table))
    return Theory(tuple(out)), table


def upsilon(f: Formula) -> tuple[Theory, LabelTable]:
    return upsilon_theory((f,))


def restrict_modelset(s: ModelSet, alphabet_) -> ModelSet:
    a = tuple(sorted(set(alphabet_)))
    return ModelSet(s.logic, a, s.length, tuple(restrict(m, a) for m in s.traces))
