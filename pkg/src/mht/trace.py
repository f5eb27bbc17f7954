"""Finite traces and here-and-there traces.

Text format, one time point per line (earliest first)::

    red,push          total state
    -                 empty total state
    - | green,push    here-side | there-side

``%`` starts a comment.  Emission sorts atoms and puts one space on each
side of ``|``; a trace whose steps are all total is written without ``|``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*|__l[0-9]+")


class TraceError(ValueError):
    pass


def _state(atoms: Iterable[str]) -> frozenset[str]:
    if isinstance(atoms, str):
        raise TypeError("a state is a collection of atom names, not a string")
    return frozenset(atoms)


@dataclass(frozen=True)
class Trace:
    states: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        states = tuple(_state(s) for s in self.states)
        if not states:
            raise TraceError("traces have length >= 1")
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i: int) -> frozenset[str]:
        return self.states[i]

    def __iter__(self):
        return iter(self.states)

    def atoms(self) -> set[str]:
        return set().union(*self.states)

    def key(self) -> tuple:
        return tuple(tuple(sorted(s)) for s in self.states)

    def __le__(self, other: Trace) -> bool:
        return le(self, other)

    def __lt__(self, other: Trace) -> bool:
        return lt(self, other)

    def __str__(self) -> str:
        return " / ".join(_fmt_state(s) for s in self.states)


@dataclass(frozen=True)
class HTTrace:
    here: Trace
    there: Trace

    def __post_init__(self) -> None:
        if len(self.here) != len(self.there):
            raise TraceError("here and there traces differ in length")
        for i, (h, t) in enumerate(zip(self.here, self.there)):
            if not h <= t:
                raise TraceError(f"step {i}: here-state {sorted(h)} is not a subset of {sorted(t)}")

    @classmethod
    def total(cls, t: Trace | Iterable[Iterable[str]]) -> HTTrace:
        if not isinstance(t, Trace):
            t = Trace(tuple(t))
        return cls(t, t)

    @classmethod
    def from_steps(cls, steps: Iterable[tuple[Iterable[str], Iterable[str]]]) -> HTTrace:
        steps = list(steps)
        return cls(Trace(tuple(h for h, _ in steps)), Trace(tuple(t for _, t in steps)))

    def __len__(self) -> int:
        return len(self.there)

    @property
    def is_total(self) -> bool:
        return self.here == self.there

    def key(self) -> tuple:
        return (self.there.key(), self.here.key())

    def atoms(self) -> set[str]:
        return self.there.atoms()

    def __str__(self) -> str:
        if self.is_total:
            return str(self.there)
        return " / ".join(f"{_fmt_state(h)}|{_fmt_state(t)}" for h, t in zip(self.here, self.there))


def _fmt_state(s) -> str:
    return ",".join(sorted(s)) if s else "-"


def le(a: Trace, b: Trace) -> bool:
    """Pointwise inclusion of equal-length traces."""
    if len(a) != len(b):
        raise TraceError(f"cannot compare traces of lengths {len(a)} and {len(b)}")
    return all(x <= y for x, y in zip(a, b))


def lt(a: Trace, b: Trace) -> bool:
    return le(a, b) and a != b


def is_total(m: HTTrace) -> bool:
    return m.is_total


def restrict(m: HTTrace, alphabet: Iterable[str]) -> HTTrace:
    a = frozenset(alphabet)
    return HTTrace(
        Trace(tuple(h & a for h in m.here)),
        Trace(tuple(t & a for t in m.there)),
    )


def reverse(m: HTTrace) -> HTTrace:
    return HTTrace(Trace(m.here.states[::-1]), Trace(m.there.states[::-1]))


# -- text format ------------------------------------------------------------


def _parse_side(text: str, lineno: int) -> frozenset[str]:
    text = text.strip()
    if text == "-":
        return frozenset()
    if not text:
        raise TraceError(f"line {lineno}: empty state (use '-')")
    names = [a.strip() for a in text.split(",")]
    for a in names:
        if not _valid_atom(a):
            raise TraceError(f"line {lineno}: bad atom name {a!r}")
    return frozenset(names)


def _valid_atom(a: str) -> bool:
    return _ATOM_RE.fullmatch(a) is not None


def parse_trace(text: str) -> HTTrace:
    here, there = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if "|" in line:
            h_text, _, t_text = line.partition("|")
            h, t = _parse_side(h_text, lineno), _parse_side(t_text, lineno)
            if not h <= t:
                raise TraceError(f"line {lineno}: here-side is not a subset of there-side")
        else:
            h = t = _parse_side(line, lineno)
        here.append(h)
        there.append(t)
    if not there:
        raise TraceError("trace file has no time points")
    return HTTrace(Trace(tuple(here)), Trace(tuple(there)))


def format_trace(m: HTTrace | Trace) -> str:
    if isinstance(m, Trace):
        m = HTTrace.total(m)
    if m.is_total:
        return "".join(_fmt_state(t) + "\n" for t in m.there)
    return "".join(f"{_fmt_state(h)} | {_fmt_state(t)}\n" for h, t in zip(m.here, m.there))
