"""Vectorised satisfaction over many HT-traces of one length.

Traces are boolean arrays of shape ``(N, length, |alphabet|)``.  The result
for a formula is a pair of ``(N, length)`` arrays: satisfaction at
``<H,T>`` and at ``<T,T>``.  This is the enumeration workhorse; the tests
check it against :class:`mht.semantics.Evaluator` trace by trace.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

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


class BatchEvaluator:
    def __init__(self, here: np.ndarray, there: np.ndarray, alphabet: Sequence[str]):
        if here.shape != there.shape:
            raise ValueError("here and there arrays differ in shape")
        self.here = here
        self.there = there
        self.total = here is there
        self.n, self.length = there.shape[:2]
        self.index = {a: i for i, a in enumerate(alphabet)}
        self._memo: dict[Formula, tuple[np.ndarray, np.ndarray]] = {}

    def sat(self, f: Formula) -> tuple[np.ndarray, np.ndarray]:
        r = self._memo.get(f)
        if r is None:
            r = self._compute(f)
            self._memo[f] = r
        return r

    def holds_at(self, f: Formula, k: int = 0) -> np.ndarray:
        return self.sat(f)[0][:, k]

    def models(self, theory) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        for f in theory:
            mask &= self.holds_at(f, 0)
        return mask

    def _const(self, value: bool) -> tuple[np.ndarray, np.ndarray]:
        a = np.full((self.n, self.length), value, dtype=bool)
        return a, a

    def _both(self, fn, *parts):
        """Apply a world-local operation to each world."""
        h = fn(*(p[0] for p in parts))
        t = h if self.total else fn(*(p[1] for p in parts))
        return h, t

    def _compute(self, f: Formula):
        if isinstance(f, Atom):
            i = self.index.get(f.name)
            if i is None:
                return self._const(False)
            return self.here[:, :, i], self.there[:, :, i]
        if isinstance(f, Falsum):
            return self._const(False)
        if isinstance(f, Verum):
            return self._const(True)
        if isinstance(f, And):
            return self._both(np.logical_and, self.sat(f.left), self.sat(f.right))
        if isinstance(f, Or):
            return self._both(np.logical_or, self.sat(f.left), self.sat(f.right))
        if isinstance(f, Implies):
            (hl, tl), (hr, tr) = self.sat(f.left), self.sat(f.right)
            t = ~tl | tr
            return ((~hl | hr) & t if not self.total else t), t
        if isinstance(f, (Next, WeakNext, Prev, WeakPrev)):
            return self._both(lambda x: _shift(x, f), self.sat(f.arg))
        if isinstance(f, (Until, Release, Since, Trigger)):
            bound = resolve(f.bound, self.length)
            return self._both(lambda a, b: _window(a, b, f, bound), self.sat(f.left), self.sat(f.right))
        raise TypeError(f"not a formula: {f!r}")


def _shift(x: np.ndarray, f: Formula) -> np.ndarray:
    out = np.empty_like(x)
    if isinstance(f, (Next, WeakNext)):
        out[:, :-1] = x[:, 1:]
        out[:, -1] = isinstance(f, WeakNext)
    else:
        out[:, 1:] = x[:, :-1]
        out[:, 0] = isinstance(f, WeakPrev)
    return out


def _window(phi: np.ndarray, psi: np.ndarray, f: Formula, bound: int) -> np.ndarray:
    n, length = phi.shape
    future = isinstance(f, (Until, Release))
    existential = isinstance(f, (Until, Since))
    out = np.empty_like(phi)
    for k in range(length):
        steps = range(max(0, min(bound, length - k if future else k + 1)))
        acc = np.full(n, existential, dtype=bool)  # running prefix condition on phi
        res = np.full(n, not existential, dtype=bool)
        for j in steps:
            p = k + j if future else k - j
            if existential:
                res |= acc & psi[:, p]
                acc &= phi[:, p]
            else:
                res &= psi[:, p] | acc
                acc |= phi[:, p]
        out[:, k] = res
    return out
