"""Command-line interface.

Exit codes: 0 success, 1 check failed or counterexample found, 2 usage,
parse or IO error, 3 candidate-space cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from mht.formula import Theory, alphabet as syntactic_alphabet, max_subindex, size
from mht.models import DEFAULT_CAP, ENGINES, LOGICS, CapExceeded, ModelSet, bounded_equiv, models
from mht.parser import ParseError, parse_formula, parse_theory, print_formula, print_theory
from mht.semantics import Evaluator
from mht.trace import HTTrace, TraceError, parse_trace
from mht.transform import closure, is_trivial, tau, upsilon_theory

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    theory: str | None = None
    trace: str | None = None
    length: int = 1
    max_length: int = 3
    logic: str = "mht"
    method: str = "tau"
    alphabet: tuple[str, ...] | None = None
    format: str = "text"
    workers: int = 1
    cap: int = DEFAULT_CAP
    engine: str = "brute"
    at: int = 0

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        alpha = None
        if getattr(ns, "alphabet", None):
            alpha = tuple(a.strip() for a in ns.alphabet.split(",") if a.strip())
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__ and v is not None}
        fields["alphabet"] = alpha
        return cls(**fields)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_theory(path: str) -> Theory:
    return parse_theory(_read(path))


def _load_trace(cfg: RunConfig) -> HTTrace:
    if cfg.trace is None:
        raise UsageError("--trace FILE is required")
    return parse_trace(_read(cfg.trace))


def _emit(cfg: RunConfig, text: str, payload: dict) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text, end="" if text.endswith("\n") or not text else "\n")


def _state(s) -> list[str]:
    return sorted(s)


def _model_json(m: HTTrace, ht: bool):
    if ht:
        return {"H": [_state(s) for s in m.here], "T": [_state(s) for s in m.there]}
    return [_state(s) for s in m.there]


# -- commands ---------------------------------------------------------------


def cmd_parse(cfg: RunConfig) -> int:
    th = _load_theory(cfg.theory)
    _emit(cfg, print_theory(th), {"formulas": [print_formula(f) for f in th]})
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    th = _load_theory(cfg.theory)
    m = _load_trace(cfg)
    if not 0 <= cfg.at < len(m):
        raise UsageError(f"--at {cfg.at} is outside the trace (length {len(m)})")
    ev = Evaluator(m)
    verdicts = [(f, ev.holds(cfg.at, f)) for f in th]
    text = "".join(f"{'holds' if ok else 'fails'}\t{print_formula(f)}\n" for f, ok in verdicts)
    payload = {
        "at": cfg.at,
        "length": len(m),
        "results": [{"formula": print_formula(f), "holds": ok} for f, ok in verdicts],
    }
    _emit(cfg, text, payload)
    return EXIT_OK if all(ok for _, ok in verdicts) else EXIT_FAIL


def cmd_models(cfg: RunConfig) -> int:
    th = _load_theory(cfg.theory)
    ms: ModelSet = models(
        th, cfg.alphabet, cfg.length, cfg.logic, cap=cfg.cap, workers=cfg.workers, engine=cfg.engine
    )
    ht = cfg.logic == "mht"
    header = f"% {cfg.logic} models of length {cfg.length} over {{{', '.join(ms.alphabet)}}}: {len(ms)}\n"
    text = header + "".join(f"{m}\n" for m in ms)
    payload = {
        "logic": cfg.logic,
        "length": cfg.length,
        "alphabet": list(ms.alphabet),
        "models": [_model_json(m, ht) for m in ms],
    }
    _emit(cfg, text, payload)
    return EXIT_OK


def cmd_translate(cfg: RunConfig) -> int:
    th = _load_theory(cfg.theory)
    if cfg.method == "tau":
        out = Theory(tuple(tau(f) for f in th))
        _emit(cfg, print_theory(out), {"method": "tau", "theory": [print_formula(f) for f in out]})
        return EXIT_OK
    out, table = upsilon_theory(th)
    labels = "".join(f"% {line}\n" for line in table.format().splitlines())
    payload = {
        "method": "upsilon",
        "theory": [print_formula(f) for f in out],
        "labels": [{"label": name, "formula": print_formula(f)} for f, name in table.entries.items()],
    }
    _emit(cfg, print_theory(out) + labels, payload)
    return EXIT_OK


def cmd_closure(cfg: RunConfig) -> int:
    th = _load_theory(cfg.theory)
    reports, lines, ok = [], [], True
    for f in th:
        members = closure(f)
        labeled = [g for g in members if not is_trivial(g)]
        bound = 2 * max_subindex(f) * size(f)
        ok &= len(members) <= bound
        reports.append(
            {
                "formula": print_formula(f),
                "members": [print_formula(g) for g in members],
                "size": len(members),
                "labeled": len(labeled),
                "bound": bound,
                "within_bound": len(members) <= bound,
            }
        )
        lines.append(f"% {print_formula(f)}")
        lines += [print_formula(g) for g in members]
        lines.append(
            f"% {len(members)} members, {len(labeled)} labeled; "
            f"bound 2*{max_subindex(f)}*{size(f)} = {bound} {'holds' if len(members) <= bound else 'VIOLATED'}"
        )
    _emit(cfg, "\n".join(lines), {"closures": reports})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_equiv(cfg: RunConfig, left: str, right: str) -> int:
    f, g = parse_formula(left), parse_formula(right)
    alpha = cfg.alphabet
    if alpha is None:
        alpha = tuple(syntactic_alphabet([f, g]))
    v = bounded_equiv(f, g, alpha, cfg.max_length, cfg.logic, cap=cfg.cap)
    if v.valid:
        text = f"equivalent ({cfg.logic}, lengths 1..{cfg.max_length})"
    else:
        text = f"not equivalent: counterexample {v.counterexample} at k={v.k}"
    payload = {
        "equivalent": v.valid,
        "logic": cfg.logic,
        "max_length": cfg.max_length,
        "counterexample": None if v.valid else _model_json(v.counterexample, True),
        "k": v.k,
    }
    _emit(cfg, text, payload)
    return EXIT_OK if v.valid else EXIT_FAIL


def cmd_valuate(cfg: RunConfig) -> int:
    th = _load_theory(cfg.theory)
    m = _load_trace(cfg)
    ev = Evaluator(m)
    rows = [[ev.value(k, f) for k in range(len(m))] for f in th]
    text = "".join(f"{' '.join(map(str, r))}\t{print_formula(f)}\n" for f, r in zip(th, rows))
    payload = {"length": len(m), "values": [{"formula": print_formula(f), "values": r} for f, r in zip(th, rows)]}
    _emit(cfg, text, payload)
    return EXIT_OK


# -- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mht", description="Metric here-and-there logic toolkit.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, theory=True):
        if theory:
            sp.add_argument("theory", help="theory file ('-' for stdin)")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        return sp

    common(sub.add_parser("parse", help="print a theory in canonical form"))
    sp = common(sub.add_parser("check", help="check a theory on a trace"))
    sp.add_argument("--trace", required=True)
    sp.add_argument("--at", type=int, default=0)
    sp = common(sub.add_parser("models", help="enumerate models at a fixed length"))
    sp.add_argument("--length", type=int, default=1)
    sp.add_argument("--logic", choices=LOGICS, default="mht")
    sp.add_argument("--alphabet")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--engine", choices=ENGINES, default="brute")
    sp = common(sub.add_parser("translate", help="translate into temporal formulas"))
    sp.add_argument("--method", choices=("tau", "upsilon"), default="tau")
    common(sub.add_parser("closure", help="list closures and check the size bound"))
    sp = common(sub.add_parser("equiv", help="bounded equivalence of two formulas"), theory=False)
    sp.add_argument("left")
    sp.add_argument("right")
    sp.add_argument("--max-length", type=int, default=3)
    sp.add_argument("--logic", choices=("mht", "mtl"), default="mht")
    sp.add_argument("--alphabet")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp = common(sub.add_parser("valuate", help="three-valued valuation on an HT-trace"))
    sp.add_argument("--trace", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING, format="%(name)s: %(message)s")
    cfg = RunConfig.from_args(ns)
    try:
        if cfg.command == "equiv":
            return cmd_equiv(cfg, ns.left, ns.right)
        return COMMANDS[cfg.command](cfg)
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ParseError, TraceError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


COMMANDS = {
    "parse": cmd_parse,
    "check": cmd_check,
    "models": cmd_models,
    "translate": cmd_translate,
    "closure": cmd_closure,
    "valuate": cmd_valuate,
}


if __name__ == "__main__":
    sys.exit(main())
