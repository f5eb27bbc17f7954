"""Exhaustive model enumeration at a fixed trace length.

Candidates are numbered: an MTL candidate is a bit vector with bit
``step * |A| + atom`` set when the atom is in ``T_step``; an MHT candidate
uses the base-3 digit at the same position (0 = absent, 1 = there only,
2 = here).  Enumeration scans contiguous index ranges in fixed-size
chunks, optionally across worker processes, and the merged result is
sorted, so the output never depends on the worker count.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from mht.batch import BatchEvaluator
from mht.formula import Formula, Iff, Theory, alphabet as syntactic_alphabet
from mht.trace import HTTrace, Trace

log = logging.getLogger(__name__)

DEFAULT_CAP = 2**26
CHUNK = 2**15
LOGICS = ("mht", "mtl", "mel")
ENGINES = ("brute", "search")


class CapExceeded(RuntimeError):
    """The candidate space is larger than the configured safety cap."""


class NotAModel(ValueError):
    pass


@dataclass(frozen=True)
class ModelSet:
    logic: str
    alphabet: tuple[str, ...]
    length: int
    traces: tuple[HTTrace, ...] = field(default=())

    def __post_init__(self) -> None:
        uniq = {m.key(): m for m in self.traces}
        object.__setattr__(self, "traces", tuple(uniq[k] for k in sorted(uniq)))
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __contains__(self, m) -> bool:
        if isinstance(m, Trace):
            m = HTTrace.total(m)
        return any(m == x for x in self.traces)

    def totals(self) -> list[Trace]:
        """The there-components of the total members."""
        return [m.there for m in self.traces if m.is_total]

    def keys(self) -> set:
        return {m.key() for m in self.traces}


@dataclass(frozen=True)
class Verdict:
    valid: bool
    max_length: int
    counterexample: HTTrace | None = None
    k: int | None = None

    def __bool__(self) -> bool:
        return self.valid


def _check_length(length: int) -> None:
    if length < 1:
        raise ValueError("trace length must be >= 1 (length-0 traces have no time point 0)")


def _check_engine(engine: str) -> None:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def _resolve_alphabet(theory, alphabet) -> tuple[str, ...]:
    names = set(syntactic_alphabet(theory))
    if alphabet is None:
        return tuple(sorted(names))
    alphabet = tuple(sorted(set(alphabet)))
    missing = names - set(alphabet)
    if missing:
        raise ValueError(f"alphabet is missing atoms of the theory: {sorted(missing)}")
    return alphabet


def _as_theory(theory) -> Theory:
    if isinstance(theory, Formula):
        return Theory((theory,))
    return theory if isinstance(theory, Theory) else Theory(tuple(theory))


# -- candidate decoding -----------------------------------------------------


def decode_total(idx: np.ndarray, length: int, width: int) -> np.ndarray:
    bits = (idx[:, None] >> np.arange(length * width, dtype=np.int64)) & 1
    return bits.astype(bool).reshape(len(idx), length, width)


def decode_ht(idx: np.ndarray, length: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    powers = 3 ** np.arange(length * width, dtype=np.int64)
    digits = (idx[:, None] // powers) % 3
    digits = digits.reshape(len(idx), length, width)
    return digits == 2, digits >= 1


def _to_trace(row: np.ndarray, alphabet: Sequence[str]) -> Trace:
    return Trace(tuple(frozenset(a for a, v in zip(alphabet, step) if v) for step in row))


def to_ht(h: np.ndarray, t: np.ndarray, alphabet: Sequence[str]) -> HTTrace:
    return HTTrace(_to_trace(h, alphabet), _to_trace(t, alphabet))


def encode(traces: Sequence[Trace], alphabet: Sequence[str]) -> np.ndarray:
    pos = {a: i for i, a in enumerate(alphabet)}
    out = np.zeros((len(traces), len(traces[0]) if traces else 0, len(alphabet)), dtype=bool)
    for n, tr in enumerate(traces):
        for k, state in enumerate(tr):
            for a in state:
                out[n, k, pos[a]] = True
    return out


def candidate_count(logic: str, width: int, length: int) -> int:
    return (3 if logic == "mht" else 2) ** (width * length)


def _decode(logic, idx, length, width):
    if logic == "mht":
        return decode_ht(idx, length, width)
    t = decode_total(idx, length, width)
    return t, t


def _scan(args) -> list[int]:
    """Indices in ``[lo, hi)`` whose candidates model the theory."""
    logic, formulas, alphabet, length, lo, hi = args
    hits = []
    for start in range(lo, hi, CHUNK):
        idx = np.arange(start, min(hi, start + CHUNK), dtype=np.int64)
        h, t = _decode(logic, idx, length, len(alphabet))
        mask = BatchEvaluator(h, t, alphabet).models(formulas)
        hits.extend(int(i) for i in idx[mask])
    return hits


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // parts)
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def enumerate_models(
    theory,
    alphabet: Iterable[str] | None = None,
    length: int = 1,
    logic: str = "mht",
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    engine: str = "brute",
) -> ModelSet:
    """All MHT (HT-trace) or MTL (total) models of the given length.

    ``engine="search"`` uses the constraint solver instead of scanning the
    candidate space; the cap and worker count then do not apply.
    """
    _check_length(length)
    if logic not in ("mht", "mtl"):
        raise ValueError(f"enumerate_models handles 'mht' and 'mtl', not {logic!r}")
    if engine == "search":
        from mht.search import search_models

        return search_models(theory, alphabet, length, logic)
    _check_engine(engine)
    theory = _as_theory(theory)
    alpha = _resolve_alphabet(theory, alphabet)
    total = candidate_count(logic, len(alpha), length)
    if total > cap:
        raise CapExceeded(f"{total} candidates exceed the cap of {cap}")
    formulas = tuple(theory)
    jobs = [(logic, formulas, alpha, length, lo, hi) for lo, hi in _split(total, max(1, workers))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = [i for part in pool.map(_scan, jobs) for i in part]
    else:
        hits = [i for job in jobs for i in _scan(job)]
    idx = np.array(hits, dtype=np.int64)
    h, t = _decode(logic, idx, length, len(alpha))
    traces = tuple(to_ht(h[i], t[i], alpha) for i in range(len(idx)))
    return ModelSet(logic, alpha, length, traces)


# -- equilibrium ------------------------------------------------------------


def _removal_batches(positions: int, batch: int = 4096):
    """Removal sets ordered by size, then lexicographically by position."""
    for r in range(1, positions + 1):
        combos = itertools.combinations(range(positions), r)
        while True:
            chunk = list(itertools.islice(combos, batch))
            if not chunk:
                break
            yield chunk


def find_smaller_model(t: Trace, theory, alphabet: Sequence[str] | None = None, *, cap: int = DEFAULT_CAP):
    """First ``<H,T>`` model of the theory with ``H < T``, or ``None``.

    Candidates remove atoms from ``T``: single removals first, in (step,
    atom) order, then pairs, and so on.
    """
    theory = _as_theory(theory)
    alpha = tuple(sorted(set(alphabet if alphabet is not None else syntactic_alphabet(theory)) | t.atoms()))
    there = encode([t], alpha)[0]
    positions = [(k, a) for k in range(len(t)) for a in range(len(alpha)) if there[k, a]]
    if 2 ** len(positions) - 1 > cap:
        raise CapExceeded(f"{2 ** len(positions) - 1} here-candidates exceed the cap of {cap}")
    formulas = tuple(theory)
    for chunk in _removal_batches(len(positions)):
        h = np.repeat(there[None], len(chunk), axis=0)
        for row, combo in enumerate(chunk):
            for p in combo:
                k, a = positions[p]
                h[row, k, a] = False
        tt = np.broadcast_to(there, h.shape)
        mask = BatchEvaluator(h, tt, alpha).models(formulas)
        hit = np.flatnonzero(mask)
        if hit.size:
            return to_ht(h[hit[0]], there, alpha)
    return None


def is_equilibrium(t: Trace, theory, alphabet: Sequence[str] | None = None, *, cap: int = DEFAULT_CAP) -> bool:
    """True iff ``<T,T>`` models the theory and no ``<H,T>`` with ``H < T`` does."""
    theory = _as_theory(theory)
    alpha = tuple(sorted(set(alphabet if alphabet is not None else syntactic_alphabet(theory)) | t.atoms()))
    there = encode([t], alpha)
    if not BatchEvaluator(there, there, alpha).models(tuple(theory))[0]:
        raise NotAModel(f"<T,T> with T = {t} is not a model of the theory")
    return find_smaller_model(t, theory, alpha, cap=cap) is None


def _equilibria(args) -> list[bool]:
    traces, formulas, alpha, cap = args
    return [find_smaller_model(t, formulas, alpha, cap=cap) is None for t in traces]


def mel_models(
    theory,
    alphabet: Iterable[str] | None = None,
    length: int = 1,
    *,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    engine: str = "brute",
) -> ModelSet:
    """Equilibrium (temporal stable) models of the given length."""
    _check_length(length)
    if engine == "search":
        from mht.search import search_mel

        return search_mel(theory, alphabet, length)
    _check_engine(engine)
    theory = _as_theory(theory)
    mtl = enumerate_models(theory, alphabet, length, "mtl", cap=cap, workers=workers)
    totals = mtl.totals()
    log.debug("checking minimality of %d total models", len(totals))
    formulas = tuple(theory)
    if workers > 1 and len(totals) > 1:
        jobs = [(totals[lo:hi], formulas, mtl.alphabet, cap) for lo, hi in _split(len(totals), workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flags = [f for part in pool.map(_equilibria, jobs) for f in part]
    else:
        flags = _equilibria((totals, formulas, mtl.alphabet, cap))
    stable = tuple(HTTrace.total(t) for t, ok in zip(totals, flags) if ok)
    return ModelSet("mel", mtl.alphabet, length, stable)


def models(theory, alphabet=None, length: int = 1, logic: str = "mht", **kw) -> ModelSet:
    if logic == "mel":
        return mel_models(theory, alphabet, length, **kw)
    return enumerate_models(theory, alphabet, length, logic, **kw)


# -- bounded validity -------------------------------------------------------


def bounded_tautology(
    f: Formula,
    alphabet: Iterable[str] | None = None,
    max_length: int = 3,
    logic: str = "mht",
    *,
    cap: int = DEFAULT_CAP,
) -> Verdict:
    """Check ``f`` at every time point of every trace of length 1..max_length.

    Only a finite approximation of validity: nothing is claimed about longer
    or infinite traces.
    """
    _check_length(max_length)
    if logic not in ("mht", "mtl"):
        raise ValueError(f"validity is checked in 'mht' or 'mtl', not {logic!r}")
    alpha = _resolve_alphabet([f], alphabet)
    # total traces first, so a classical counterexample is preferred
    spaces = ("mtl", "mht") if logic == "mht" else ("mtl",)
    for length in range(1, max_length + 1):
        if candidate_count(logic, len(alpha), length) > cap:
            raise CapExceeded(f"{candidate_count(logic, len(alpha), length)} candidates exceed the cap of {cap}")
        for space in spaces:
            total = candidate_count(space, len(alpha), length)
            for start in range(0, total, CHUNK):
                idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
                h, t = _decode(space, idx, length, len(alpha))
                sat = BatchEvaluator(h, t, alpha).sat(f)[0]
                bad = np.argwhere(~sat)
                if bad.size:
                    row, k = (int(x) for x in bad[0])
                    return Verdict(False, max_length, to_ht(h[row], t[row], alpha), k)
    return Verdict(True, max_length)


def bounded_equiv(
    f: Formula,
    g: Formula,
    alphabet: Iterable[str] | None = None,
    max_length: int = 3,
    logic: str = "mht",
    *,
    cap: int = DEFAULT_CAP,
) -> Verdict:
    return bounded_tautology(Iff(f, g), alphabet, max_length, logic, cap=cap)
