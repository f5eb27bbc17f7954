"""Closure, label table and labelled theory of a formula, with a faithfulness check.

    python3 scripts/label_table.py "G (push -> F[3] G[4] green)" --check-length 2
"""

import argparse
from dataclasses import dataclass

from mht.formula import alphabet, max_subindex, size
from mht.models import enumerate_models
from mht.parser import parse_formula, print_formula
from mht.search import search_models
from mht.transform import closure, eta, upsilon


@dataclass(frozen=True)
class Config:
    formula: str = "G (push -> F[3] G[4] green)"
    check_length: int = 0
    logic: str = "mht"


def run(cfg: Config) -> None:
    f = parse_formula(cfg.formula)
    members = closure(f)
    theory, table = upsilon(f)
    bound = 2 * max_subindex(f) * size(f)
    print(f"closure: {len(members)} members, {len(table)} labeled, bound {bound}")
    for mu, name in table.entries.items():
        rows = "  ;  ".join(print_formula(g) for g in eta(mu, table))
        print(f"{name:>6}  {print_formula(mu):<40} {rows}")
    if cfg.check_length <= 0:
        return
    atoms = tuple(alphabet([f]))
    labels = tuple(n for n in alphabet(theory) if n not in atoms)
    for n in range(1, cfg.check_length + 1):
        direct = enumerate_models([f], atoms, n, cfg.logic)
        labelled = search_models(theory, atoms + labels, n, cfg.logic, project=atoms)
        verdict = "agree" if direct.traces == labelled.traces else "DIFFER"
        print(f"length {n}: {len(direct)} {cfg.logic} models, labelled theory {verdict}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("formula", nargs="?", default=Config.formula)
    ap.add_argument("--check-length", type=int, default=Config.check_length)
    ap.add_argument("--logic", choices=("mht", "mtl"), default=Config.logic)
    a = ap.parse_args()
    run(Config(a.formula, a.check_length, a.logic))


if __name__ == "__main__":
    main()
