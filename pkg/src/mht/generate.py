"""Random and exhaustive generation of formulas and traces for experiments."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from mht.formula import (
    BOT,
    ELL,
    TOP,
    And,
    Atom,
    Formula,
    Implies,
    Next,
    Or,
    Prev,
    Release,
    Since,
    Trigger,
    Until,
    WeakNext,
    WeakPrev,
)
from mht.trace import HTTrace, Trace

UNARY = (Next, WeakNext, Prev, WeakPrev)
BOOLEAN = (And, Or, Implies)
METRIC = (Until, Release, Since, Trigger)


@dataclass(frozen=True)
class FormulaConfig:
    atoms: tuple[str, ...] = ("p", "q")
    max_depth: int = 3
    max_bound: int = 3
    min_bound: int = 0
    implications: bool = True
    constants: bool = True
    ell_weight: float = 0.2
    leaf_weight: float = 0.3


def random_formula(rng: random.Random, cfg: FormulaConfig = FormulaConfig(), depth: int | None = None) -> Formula:
    depth = cfg.max_depth if depth is None else depth
    if depth == 0 or rng.random() < cfg.leaf_weight:
        leaves: list[Formula] = [Atom(a) for a in cfg.atoms]
        if cfg.constants and rng.random() < 0.15:
            leaves = [TOP, BOT]
        return rng.choice(leaves)
    kinds = list(BOOLEAN if cfg.implications else BOOLEAN[:2]) + list(UNARY) + list(METRIC)
    cls = rng.choice(kinds)
    sub = lambda: random_formula(rng, cfg, depth - 1)  # noqa: E731
    if cls in UNARY:
        return cls(sub())
    if cls in METRIC:
        bound = ELL if rng.random() < cfg.ell_weight else rng.randint(cfg.min_bound, cfg.max_bound)
        return cls(bound, sub(), sub())
    return cls(sub(), sub())


def random_trace(rng: random.Random, atoms: Sequence[str], length: int, p: float = 0.5) -> Trace:
    return Trace(tuple(frozenset(a for a in atoms if rng.random() < p) for _ in range(length)))


def random_ht_trace(rng: random.Random, atoms: Sequence[str], length: int) -> HTTrace:
    here, there = [], []
    for _ in range(length):
        digits = [rng.randrange(3) for _ in atoms]
        here.append(frozenset(a for a, d in zip(atoms, digits) if d == 2))
        there.append(frozenset(a for a, d in zip(atoms, digits) if d >= 1))
    return HTTrace(Trace(tuple(here)), Trace(tuple(there)))


def all_ht_traces(atoms: Sequence[str], length: int) -> Iterator[HTTrace]:
    """Every HT-trace of the given length, each atom-step taking 3 states."""
    cells = len(atoms) * length
    for digits in itertools.product(range(3), repeat=cells):
        here, there = [], []
        for k in range(length):
            row = digits[k * len(atoms):(k + 1) * len(atoms)]
            here.append(frozenset(a for a, d in zip(atoms, row) if d == 2))
            there.append(frozenset(a for a, d in zip(atoms, row) if d >= 1))
        yield HTTrace(Trace(tuple(here)), Trace(tuple(there)))


def all_traces(atoms: Sequence[str], length: int) -> Iterator[Trace]:
    subsets = [frozenset(c) for r in range(len(atoms) + 1) for c in itertools.combinations(atoms, r)]
    for states in itertools.product(subsets, repeat=length):
        yield Trace(states)


def all_formulas(atoms: Sequence[str], depth: int, bounds: Sequence = (0, 1, 2, 3, ELL)) -> list[Formula]:
    """Every formula of depth at most ``depth`` over the atoms and constants."""
    layers: list[Formula] = [Atom(a) for a in atoms] + [TOP, BOT]
    for _ in range(depth):
        prev = layers
        nxt = list(prev)
        nxt += [cls(f) for cls in UNARY for f in prev]
        pairs = list(itertools.product(prev, repeat=2))
        nxt += [cls(a, b) for cls in BOOLEAN for a, b in pairs]
        nxt += [cls(n, a, b) for cls in METRIC for n in bounds for a, b in pairs]
        layers = list(dict.fromkeys(nxt))
    return layers
