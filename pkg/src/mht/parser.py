"""ASCII syntax for metric formulas and theories.

Operators (tightest first)::

    ~ X wX Y wY  F G O H [bound]      prefix
    U R S T [bound]                    right-associative
    &                                  left-associative
    |                                  left-associative
    ->                                 right-associative
    <->                                non-associative

Bounds are ``[n]`` or ``[l]`` (upper bound), or ``[m;n)`` / ``[m;l)``
(half-open window).  A bare operator means ``[l]``.  Constants are
``#true``, ``#false``, ``#initial`` and ``#final``; ``%`` starts a comment.
Theories separate formulas with ``;`` or newlines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from mht.formula import (
    BOT,
    ELL,
    FINAL,
    INITIAL,
    TOP,
    And,
    Atom,
    Falsum,
    Formula,
    Iff,
    Implies,
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
    interval,
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>%[^\n]*)
  | (?P<newline>\n)
  | (?P<const>\#(?:true|false|initial|final))
  | (?P<op><->|->|[~&|();\[\])])
  | (?P<weak>w[XY](?![A-Z0-9_]))
  | (?P<label>__l[0-9]+)
  | (?P<atom>[a-z][a-z0-9_]*)
  | (?P<num>[0-9]+)
  | (?P<kw>[XYURSTFGOH](?![A-Z0-9_]))
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(line, col, 1))
        kind, value = m.lastgroup, m.group()
        if kind == "newline":
            tokens.append(Token("newline", value, SourceSpan(line, col, 1)))
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            if kind == "label":
                kind = "atom"
            elif kind in ("weak", "kw", "op", "const"):
                kind = value
            tokens.append(Token(kind, value, SourceSpan(line, col, len(value))))
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("eof", "", SourceSpan(line, col, 0)))
    return tokens


_PREFIX = {"~": Not, "X": Next, "wX": WeakNext, "Y": Prev, "wY": WeakPrev}
_PREFIX_METRIC = {"F": "eventually", "G": "always", "O": "once", "H": "historically"}
_BINARY_METRIC = {"U": "until", "R": "release", "S": "since", "T": "trigger"}
_CONSTS = {"#true": TOP, "#false": BOT, "#initial": INITIAL, "#final": FINAL}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.depth = 0

    # newlines are insignificant inside parentheses
    def peek(self) -> Token:
        while self.depth > 0 and self.tokens[self.i].kind == "newline":
            self.i += 1
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {kind!r}, found {self.describe(tok)}", tok)
        return self.advance()

    def error(self, message: str, tok: Token):
        span = tok.span
        if tok.kind == "eof":
            # keep the span inside the input
            span = self._last_span()
        raise ParseError(message, span)

    def _last_span(self) -> SourceSpan:
        lines = self.text.split("\n")
        while len(lines) > 1 and not lines[-1].strip():
            lines.pop()
        line = len(lines)
        col = max(1, len(lines[-1]))
        return SourceSpan(line, col, 1 if lines[-1] else 0)

    @staticmethod
    def describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    # formula := iff
    def formula(self) -> Formula:
        left = self.impl()
        if self.peek().kind == "<->":
            self.advance()
            right = self.impl()
            if self.peek().kind == "<->":
                self.error("'<->' is non-associative; add parentheses", self.peek())
            return Iff(left, right)
        return left

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "->":
            self.advance()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.binary()
        while self.peek().kind == "&":
            self.advance()
            f = And(f, self.binary())
        return f

    def binary(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if tok.kind in _BINARY_METRIC:
            self.advance()
            lower, upper = self.bound()
            right = self.binary()
            return interval(_BINARY_METRIC[tok.kind], lower, upper, left, right)
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind in _PREFIX:
            self.advance()
            return _PREFIX[tok.kind](self.unary())
        if tok.kind in _PREFIX_METRIC:
            self.advance()
            lower, upper = self.bound()
            return interval(_PREFIX_METRIC[tok.kind], lower, upper, self.unary())
        return self.prim()

    def prim(self) -> Formula:
        tok = self.peek()
        if tok.kind == "atom":
            self.advance()
            return Atom(tok.text)
        if tok.kind in _CONSTS:
            self.advance()
            return _CONSTS[tok.kind]
        if tok.kind == "(":
            self.advance()
            self.depth += 1
            f = self.formula()
            self.expect(")")
            self.depth -= 1
            return f
        if tok.kind in ("U", "R", "S", "T"):
            self.error(f"binary operator {tok.text!r} needs a left operand", tok)
        self.error(f"expected a formula, found {self.describe(tok)}", tok)

    def bound(self):
        """Return ``(lower, upper)``; a missing bound is ``(0, ELL)``."""
        if self.peek().kind != "[":
            return 0, ELL
        self.advance()
        start = self.peek()
        first = self._bound_value(allow_ell=True)
        tok = self.peek()
        if tok.kind == "]":
            self.advance()
            return 0, first
        if tok.kind == ";":
            if first is ELL:
                self.error("interval lower bound must be a number", start)
            self.advance()
            upper = self._bound_value(allow_ell=True)
            self.expect(")")
            return first, upper
        self.error(f"malformed bound: expected ']' or ';', found {self.describe(tok)}", tok)

    def _bound_value(self, allow_ell: bool):
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return int(tok.text)
        if tok.kind == "atom" and tok.text == "l" and allow_ell:
            self.advance()
            return ELL
        self.error(f"malformed bound: expected a number or 'l', found {self.describe(tok)}", tok)


def parse_formula(text: str) -> Formula:
    """Parse a single formula."""
    p = _Parser(text)
    while p.peek().kind == "newline":
        p.advance()
    f = p.formula()
    while p.peek().kind in ("newline", ";"):
        p.advance()
    tok = p.peek()
    if tok.kind != "eof":
        p.error(f"unexpected {p.describe(tok)} after formula", tok)
    return f


def parse_theory(text: str) -> Theory:
    """Parse ``;``/newline separated formulas, skipping blank lines and comments."""
    p = _Parser(text)
    out = []
    while True:
        tok = p.peek()
        if tok.kind == "eof":
            break
        if tok.kind in ("newline", ";"):
            p.advance()
            continue
        out.append(p.formula())
        tok = p.peek()
        if tok.kind not in ("newline", ";", "eof"):
            p.error(f"expected ';' or newline after formula, found {p.describe(tok)}", tok)
    return Theory(tuple(out))


# -- printing ---------------------------------------------------------------

# precedence levels: higher binds tighter
_IMPL, _DISJ, _CONJ, _BIN, _UNARY = 1, 2, 3, 4, 5

_METRIC_SYMBOL = {Until: "U", Release: "R", Since: "S", Trigger: "T"}
# (class, neutral left operand) -> prefix mnemonic
_RESUGAR = {(Until, TOP): "F", (Release, BOT): "G", (Since, TOP): "O", (Trigger, BOT): "H"}
_UNARY_SYMBOL = {Next: "X", WeakNext: "wX", Prev: "Y", WeakPrev: "wY"}


def _bound_text(bound) -> str:
    return "" if bound is ELL else f"[{bound}]"


def _render(f: Formula) -> tuple[str, int]:
    if isinstance(f, Atom):
        return f.name, _UNARY
    if isinstance(f, Verum):
        return "#true", _UNARY
    if isinstance(f, Falsum):
        return "#false", _UNARY
    if f == INITIAL:
        return "#initial", _UNARY
    if f == FINAL:
        return "#final", _UNARY
    if isinstance(f, Implies) and isinstance(f.right, Falsum):
        return "~" + _wrap(f.left, _UNARY), _UNARY
    if type(f) in _UNARY_SYMBOL:
        return f"{_UNARY_SYMBOL[type(f)]} {_wrap(f.arg, _UNARY)}", _UNARY
    if type(f) in _METRIC_SYMBOL:
        mnemonic = _RESUGAR.get((type(f), f.left))
        if mnemonic:
            return f"{mnemonic}{_bound_text(f.bound)} {_wrap(f.right, _UNARY)}", _UNARY
        sym = _METRIC_SYMBOL[type(f)] + _bound_text(f.bound)
        return f"{_wrap(f.left, _UNARY)} {sym} {_wrap(f.right, _BIN)}", _BIN
    if isinstance(f, And):
        return f"{_wrap(f.left, _CONJ)} & {_wrap(f.right, _BIN)}", _CONJ
    if isinstance(f, Or):
        return f"{_wrap(f.left, _DISJ)} | {_wrap(f.right, _CONJ)}", _DISJ
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _DISJ)} -> {_wrap(f.right, _IMPL)}", _IMPL
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, need: int) -> str:
    text, prec = _render(f)
    return text if prec >= need else f"({text})"


def print_formula(f: Formula) -> str:
    """Canonical text; ``parse_formula(print_formula(f)) == f``.

    Negative bounds (only produced by interval desugaring) print as
    ``[-n]`` and are not accepted back by the parser.
    """
    return _render(f)[0]


def print_theory(theory) -> str:
    return "".join(print_formula(f) + "\n" for f in theory)
