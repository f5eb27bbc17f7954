"""Satisfaction and three-valued valuation on HT-traces.

:class:`Evaluator` follows the satisfaction clauses literally: every bound
is resolved against the trace length, and the until/release/since/trigger
loops run over ``j`` in ``[0, n)`` with the inner ``i`` strictly below ``j``.
Results are memoised per evaluator, so reuse one evaluator when checking
many formulas or time points on the same trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from mht.formula import (
    ELL,
    And,
    Atom,
    Bound,
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
from mht.trace import HTTrace

HERE, THERE = 0, 1

# three-valued truth values
FALSE, UNDECIDED, TRUE = 0, 1, 2


class Evaluator:
    """Memoised satisfaction and valuation for one HT-trace."""

    def __init__(self, m: HTTrace):
        self.m = m
        self.length = len(m)
        self._worlds = (m.here.states, m.there.states)
        self._sat = ({}, {})
        self._val = {}

    def _check_k(self, k: int) -> None:
        if not 0 <= k < self.length:
            raise IndexError(f"time point {k} outside [0, {self.length})")

    # -- two-valued ----------------------------------------------------------

    def holds(self, k: int, f: Formula, world: int = HERE) -> bool:
        """``M, k |= f`` (``world=THERE`` evaluates on the total trace <T,T>)."""
        self._check_k(k)
        return self._holds(world, k, f)

    def _holds(self, w: int, k: int, f: Formula) -> bool:
        memo = self._sat[w]
        key = (k, f)
        r = memo.get(key)
        if r is None:
            r = self._compute(w, k, f)
            memo[key] = r
        return r

    def _compute(self, w: int, k: int, f: Formula) -> bool:
        n = self.length
        sat = self._holds
        if isinstance(f, Atom):
            return f.name in self._worlds[w][k]
        if isinstance(f, Falsum):
            return False
        if isinstance(f, Verum):
            return True
        if isinstance(f, And):
            return sat(w, k, f.left) and sat(w, k, f.right)
        if isinstance(f, Or):
            return sat(w, k, f.left) or sat(w, k, f.right)
        if isinstance(f, Implies):
            # checked in every world at or above w
            return all(not sat(v, k, f.left) or sat(v, k, f.right) for v in range(w, 2))
        if isinstance(f, Next):
            return k + 1 < n and sat(w, k + 1, f.arg)
        if isinstance(f, WeakNext):
            return k + 1 == n or sat(w, k + 1, f.arg)
        if isinstance(f, Prev):
            return k > 0 and sat(w, k - 1, f.arg)
        if isinstance(f, WeakPrev):
            return k == 0 or sat(w, k - 1, f.arg)
        if isinstance(f, (Until, Release)):
            steps = [j for j in range(resolve(f.bound, n)) if 0 <= k + j < n]
            sign = 1
        elif isinstance(f, (Since, Trigger)):
            steps = [j for j in range(resolve(f.bound, n)) if 0 <= k - j < n]
            sign = -1
        else:
            raise TypeError(f"not a formula: {f!r}")
        phi, psi = f.left, f.right
        if isinstance(f, (Until, Since)):
            return any(
                sat(w, k + sign * j, psi) and all(sat(w, k + sign * i, phi) for i in range(j))
                for j in steps
            )
        return all(
            sat(w, k + sign * j, psi) or any(sat(w, k + sign * i, phi) for i in range(j))
            for j in steps
        )

    # -- three-valued --------------------------------------------------------

    def value(self, k: int, f: Formula) -> int:
        """Truth value in {0, 1, 2} (Goedel G3 on the propositional part)."""
        self._check_k(k)
        return self._value(k, f)

    def _value(self, k: int, f: Formula) -> int:
        key = (k, f)
        r = self._val.get(key)
        if r is None:
            r = self._compute_value(k, f)
            self._val[key] = r
        return r

    def _compute_value(self, k: int, f: Formula) -> int:
        n = self.length
        val = self._value
        if isinstance(f, Falsum):
            return FALSE
        if isinstance(f, Verum):
            return TRUE
        if isinstance(f, Atom):
            if f.name in self.m.here[k]:
                return TRUE
            return UNDECIDED if f.name in self.m.there[k] else FALSE
        if isinstance(f, And):
            return min(val(k, f.left), val(k, f.right))
        if isinstance(f, Or):
            return max(val(k, f.left), val(k, f.right))
        if isinstance(f, Implies):
            a, b = val(k, f.left), val(k, f.right)
            return TRUE if a <= b else b
        if isinstance(f, Next):
            return FALSE if k + 1 == n else val(k + 1, f.arg)
        if isinstance(f, WeakNext):
            return TRUE if k + 1 == n else val(k + 1, f.arg)
        if isinstance(f, Prev):
            return FALSE if k == 0 else val(k - 1, f.arg)
        if isinstance(f, WeakPrev):
            return TRUE if k == 0 else val(k - 1, f.arg)
        bound = resolve(f.bound, n)
        if isinstance(f, (Until, Release)):
            idx = [k + i for i in range(bound) if k + i < n]
            prefix = lambda i: range(k, i)  # noqa: E731
        else:
            idx = [k - i for i in range(bound) if k - i >= 0]
            prefix = lambda i: range(i + 1, k + 1)  # noqa: E731
        if isinstance(f, (Until, Since)):
            return max(
                (min([val(i, f.right)] + [val(j, f.left) for j in prefix(i)]) for i in idx),
                default=FALSE,
            )
        return min(
            (max([val(i, f.right)] + [val(j, f.left) for j in prefix(i)]) for i in idx),
            default=TRUE,
        )


def holds(m: HTTrace, k: int, f: Formula) -> bool:
    return Evaluator(m).holds(k, f)


def holds_theory(m: HTTrace, theory) -> bool:
    ev = Evaluator(m)
    return all(ev.holds(0, f) for f in theory)


def valuation(m: HTTrace, k: int, f: Formula) -> int:
    return Evaluator(m).value(k, f)


# -- derived-operator oracles -----------------------------------------------


@dataclass(frozen=True)
class DerivedOp:
    """A derived operator evaluated by its own quantifier conditions.

    ``name`` is one of ``initial``, ``final``, ``weak_next``, ``weak_prev``,
    ``eventually``, ``always``, ``once``, ``historically`` (with optional
    ``bound`` and window ``lower``) or ``until``, ``release``, ``since``,
    ``trigger`` (trace-length bound only).
    """

    name: str
    args: tuple[Formula, ...] = ()
    bound: Bound = ELL
    lower: int | None = None


def _oracle_initial(ev, k, op):
    return k == 0


def _oracle_final(ev, k, op):
    return k + 1 == ev.length


def _oracle_weak_next(ev, k, op):
    return k + 1 == ev.length or ev.holds(k + 1, op.args[0])


def _oracle_weak_prev(ev, k, op):
    return k == 0 or ev.holds(k - 1, op.args[0])


def _window(ev, k, op, direction):
    n = ev.length
    lo = 0 if op.lower is None else op.lower
    hi = resolve(op.bound, n)
    pts = (k + direction * j for j in range(lo, hi))
    return [p for p in pts if 0 <= p < n]


def _oracle_eventually(ev, k, op):
    return any(ev.holds(p, op.args[0]) for p in _window(ev, k, op, 1))


def _oracle_always(ev, k, op):
    return all(ev.holds(p, op.args[0]) for p in _window(ev, k, op, 1))


def _oracle_once(ev, k, op):
    return any(ev.holds(p, op.args[0]) for p in _window(ev, k, op, -1))


def _oracle_historically(ev, k, op):
    return all(ev.holds(p, op.args[0]) for p in _window(ev, k, op, -1))


def _temporal_only(op):
    if op.bound is not ELL or op.lower is not None:
        raise ValueError(f"oracle for {op.name} covers the trace-length bound only")


def _oracle_until(ev, k, op):
    _temporal_only(op)
    phi, psi = op.args
    return any(
        ev.holds(j, psi) and all(ev.holds(i, phi) for i in range(k, j)) for j in range(k, ev.length)
    )


def _oracle_release(ev, k, op):
    _temporal_only(op)
    phi, psi = op.args
    return all(
        ev.holds(j, psi) or any(ev.holds(i, phi) for i in range(k, j)) for j in range(k, ev.length)
    )


def _oracle_since(ev, k, op):
    _temporal_only(op)
    phi, psi = op.args
    return any(
        ev.holds(j, psi) and all(ev.holds(i, phi) for i in range(j + 1, k + 1))
        for j in range(0, k + 1)
    )


def _oracle_trigger(ev, k, op):
    _temporal_only(op)
    phi, psi = op.args
    return all(
        ev.holds(j, psi) or any(ev.holds(i, phi) for i in range(j + 1, k + 1))
        for j in range(0, k + 1)
    )


_ORACLES: dict[str, Callable] = {
    "initial": _oracle_initial,
    "final": _oracle_final,
    "weak_next": _oracle_weak_next,
    "weak_prev": _oracle_weak_prev,
    "eventually": _oracle_eventually,
    "always": _oracle_always,
    "once": _oracle_once,
    "historically": _oracle_historically,
    "until": _oracle_until,
    "release": _oracle_release,
    "since": _oracle_since,
    "trigger": _oracle_trigger,
}


def oracle_holds(m: HTTrace | Evaluator, k: int, op: DerivedOp) -> bool:
    """Evaluate a derived operator through its explicit quantifier conditions.

    Only meant as an independent reference for differential tests.
    """
    ev = m if isinstance(m, Evaluator) else Evaluator(m)
    ev._check_k(k)
    try:
        fn = _ORACLES[op.name]
    except KeyError:
        raise ValueError(f"no oracle for derived operator {op.name!r}") from None
    return fn(ev, k, op)
