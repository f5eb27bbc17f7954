"""Metric formula AST.

Formulas are immutable trees.  Sugar (negation, equivalence, eventually,
always, once, historically, initial, final, intervals) is expanded eagerly
into the primitive connectives, so two formulas built from the same sugar
are structurally equal.

Bounds are plain ``int`` numerals or the trace-length constant :data:`ELL`,
which evaluates to the length of whatever trace the formula is checked on.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Union


class TraceLength:
    """The symbolic bound that stands for the length of the trace."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ELL"

    def __reduce__(self):
        return (TraceLength, ())


ELL = TraceLength()
Bound = Union[int, TraceLength]


def resolve(bound: Bound, length: int) -> int:
    """Integer value of ``bound`` on a trace of the given length."""
    return length if bound is ELL else bound


def _bound_key(bound: Bound) -> tuple:
    return (1, 0) if bound is ELL else (0, bound)


def _check_bound(bound) -> None:
    if bound is ELL:
        return
    if isinstance(bound, bool) or not isinstance(bound, int):
        raise TypeError(f"bound must be an int or ELL, got {bound!r}")


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()
    tag: int = -1

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.tag,) + self._fields()))

    def _fields(self) -> tuple:
        return ()

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        # cached hashes are process-local (string hash seeds differ)
        return (type(self), tuple(getattr(self, f.name) for f in fields(self) if f.init))

    @property
    def children(self) -> tuple[Formula, ...]:
        return ()

    def key(self) -> tuple:
        """Total structural ordering key (tag, bound, children)."""
        k = self.__dict__.get("_key")
        if k is None:
            k = self._make_key()
            object.__setattr__(self, "_key", k)
        return k

    def _make_key(self) -> tuple:
        return (self.tag,)

    def __lt__(self, other: Formula) -> bool:
        return self.key() < other.key()

    def __le__(self, other: Formula) -> bool:
        return self.key() <= other.key()

    def __gt__(self, other: Formula) -> bool:
        return self.key() > other.key()

    def __ge__(self, other: Formula) -> bool:
        return self.key() >= other.key()

    def __str__(self) -> str:
        from mht.parser import print_formula

        return print_formula(self)


def _node(cls):
    cls = dataclass(frozen=True)(cls)
    # dataclass installs its own field-tuple hash; keep the cached one
    cls.__hash__ = Formula.__hash__
    return cls


@_node
class Falsum(Formula):
    tag = 0
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __repr__(self) -> str:
        return "BOT"


@_node
class Verum(Formula):
    tag = 1
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __repr__(self) -> str:
        return "TOP"


@_node
class Atom(Formula):
    name: str
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 2

    def _fields(self) -> tuple:
        return (self.name,)

    def _make_key(self) -> tuple:
        return (self.tag, self.name)

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


class Unary(Formula):
    __slots__ = ()

    def _fields(self) -> tuple:
        return (self.arg,)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.arg,)

    def _make_key(self) -> tuple:
        return (self.tag, self.arg.key())


class Binary(Formula):
    __slots__ = ()

    def _fields(self) -> tuple:
        return (self.left, self.right)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def _make_key(self) -> tuple:
        return (self.tag, self.left.key(), self.right.key())


class Metric(Formula):
    """Bounded binary temporal operator (U, R, S, T)."""

    __slots__ = ()

    def __post_init__(self) -> None:
        _check_bound(self.bound)
        super().__post_init__()

    def _fields(self) -> tuple:
        return (_bound_key(self.bound), self.left, self.right)

    @property
    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def _make_key(self) -> tuple:
        return (self.tag, _bound_key(self.bound), self.left.key(), self.right.key())

    def with_bound(self, bound: Bound) -> Metric:
        return type(self)(bound, self.left, self.right)


@_node
class And(Binary):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 3


@_node
class Or(Binary):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 4


@_node
class Implies(Binary):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 5


@_node
class Next(Unary):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 6


@_node
class WeakNext(Unary):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 7


@_node
class Prev(Unary):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 8


@_node
class WeakPrev(Unary):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 9


@_node
class Until(Metric):
    bound: Bound
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 10


@_node
class Release(Metric):
    bound: Bound
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 11


@_node
class Since(Metric):
    bound: Bound
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 12


@_node
class Trigger(Metric):
    bound: Bound
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    tag = 13


BOT = Falsum()
TOP = Verum()

UNARY_TYPES = (Next, WeakNext, Prev, WeakPrev)
BOOLEAN_TYPES = (And, Or, Implies)
METRIC_TYPES = (Until, Release, Since, Trigger)


@dataclass(frozen=True)
class Theory:
    """Ordered collection of formulas; order only affects output labelling."""

    formulas: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "formulas", tuple(self.formulas))

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.formulas)

    def __len__(self) -> int:
        return len(self.formulas)

    def __getitem__(self, i):
        return self.formulas[i]

    def __add__(self, other) -> Theory:
        return Theory(self.formulas + tuple(other))


# -- derived operators ------------------------------------------------------


def Not(f: Formula) -> Formula:
    return Implies(f, BOT)


def Iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def Eventually(f: Formula, bound: Bound = ELL) -> Formula:
    return Until(bound, TOP, f)


def Always(f: Formula, bound: Bound = ELL) -> Formula:
    return Release(bound, BOT, f)


def Once(f: Formula, bound: Bound = ELL) -> Formula:
    return Since(bound, TOP, f)


def Historically(f: Formula, bound: Bound = ELL) -> Formula:
    return Trigger(bound, BOT, f)


INITIAL = Not(Prev(TOP))
FINAL = Not(Next(TOP))


def conjoin(fs) -> Formula:
    """Left-nested conjunction; TOP when empty."""
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disjoin(fs) -> Formula:
    """Left-nested disjunction; BOT when empty."""
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


_NULLARY = {"top": lambda: TOP, "bot": lambda: BOT, "initial": lambda: INITIAL, "final": lambda: FINAL}
_UNARY_SUGAR = {"not": Not}
_BINARY_SUGAR = {"iff": Iff}
_METRIC_UNARY = {
    "eventually": Eventually,
    "always": Always,
    "once": Once,
    "historically": Historically,
}
_METRIC_BINARY = {"until": Until, "release": Release, "since": Since, "trigger": Trigger}


def derive(op: str, *args, bound: Bound | None = None) -> Formula:
    """Build a derived operator from its defining expansion.

    ``bound`` is only meaningful for the metric operators and defaults to
    :data:`ELL` there.

    >>> derive("eventually", Atom("p"), bound=3) == Until(3, TOP, Atom("p"))
    True
    """
    if op in _NULLARY:
        _arity(op, args, 0)
        return _NULLARY[op]()
    if op in _UNARY_SUGAR:
        _arity(op, args, 1)
        return _UNARY_SUGAR[op](*args)
    if op in _BINARY_SUGAR:
        _arity(op, args, 2)
        return _BINARY_SUGAR[op](*args)
    b = ELL if bound is None else bound
    if op in _METRIC_UNARY:
        _arity(op, args, 1)
        return _METRIC_UNARY[op](args[0], b)
    if op in _METRIC_BINARY:
        _arity(op, args, 2)
        return _METRIC_BINARY[op](b, *args)
    raise ValueError(f"unknown derived operator {op!r}")


def _arity(op: str, args: tuple, n: int) -> None:
    if len(args) != n:
        raise TypeError(f"{op} takes {n} argument(s), got {len(args)}")


_ONE_STEP = {"next": Next, "weak-next": WeakNext, "prev": Prev, "weak-prev": WeakPrev}


def iterate(op: str, n: int, f: Formula) -> Formula:
    """Apply a one-step operator ``n`` times (``n == 0`` is the identity)."""
    try:
        ctor = _ONE_STEP[op.replace("_", "-")]
    except KeyError:
        raise ValueError(f"unknown one-step operator {op!r}") from None
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    for _ in range(n):
        f = ctor(f)
    return f


# interval op -> (shift operator, inner operator constructor)
_INTERVAL = {
    "eventually": ("next", lambda b, *a: Eventually(a[0], b)),
    "always": ("weak-next", lambda b, *a: Always(a[0], b)),
    "once": ("prev", lambda b, *a: Once(a[0], b)),
    "historically": ("weak-prev", lambda b, *a: Historically(a[0], b)),
    "until": ("next", lambda b, *a: Until(b, *a)),
    "release": ("weak-next", lambda b, *a: Release(b, *a)),
    "since": ("prev", lambda b, *a: Since(b, *a)),
    "trigger": ("weak-prev", lambda b, *a: Trigger(b, *a)),
}


def interval(op: str, lower: int, upper: Bound, *args: Formula) -> Formula:
    """Desugar an operator over the half-open window ``[lower; upper)``.

    The window is shifted with ``lower`` one-step operators and the inner
    bound becomes ``upper - lower`` (or stays ``ELL``).  Empty windows give
    a nonpositive inner bound, which evaluates to a truth constant.
    """
    if op not in _INTERVAL:
        raise ValueError(f"unknown interval operator {op!r}")
    if lower < 0:
        raise ValueError("interval lower bound must be nonnegative")
    _check_bound(upper)
    shift, ctor = _INTERVAL[op]
    _arity(op, args, 2 if op in _METRIC_BINARY else 1)
    inner = upper if upper is ELL else upper - lower
    return iterate(shift, lower, ctor(inner, *args))


# -- structural metrics -----------------------------------------------------


def size(f: Formula) -> int:
    """Node count: atoms and constants count 1, every connective adds 1."""
    stack, n = [f], 0
    while stack:
        g = stack.pop()
        n += 1
        stack.extend(g.children)
    return n


def depth(f: Formula) -> int:
    if not f.children:
        return 0
    return 1 + max(depth(c) for c in f.children)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk (with repetitions)."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def max_subindex(f: Formula) -> int:
    """``max(1, largest numeral bound in f)``."""
    k = 1
    for g in subformulas(f):
        if isinstance(g, METRIC_TYPES) and g.bound is not ELL:
            k = max(k, g.bound)
    return k


def atoms(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def alphabet(theory) -> list[str]:
    """Sorted names of the atoms occurring in a formula or theory."""
    if isinstance(theory, Formula):
        theory = (theory,)
    names: set[str] = set()
    for f in theory:
        names |= atoms(f)
    return sorted(names)


def has_implication(f: Formula) -> bool:
    return any(isinstance(g, Implies) for g in subformulas(f))
