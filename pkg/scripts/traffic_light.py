"""Model counts and equilibrium models of the traffic-light theory across trace lengths.

    python3 scripts/traffic_light.py --max-length 5 --push
"""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from mht.models import enumerate_models, mel_models
from mht.parser import parse_theory

THEORIES = Path(__file__).resolve().parent.parent / "theories"


@dataclass(frozen=True)
class Config:
    max_length: int = 3
    push: bool = False
    engine: str = "brute"
    workers: int = 1
    # brute-force MHT counting grows as 3^(|A|*n); beyond this length only MEL is computed
    count_limit: int = 4


def run(cfg: Config) -> None:
    th = parse_theory((THEORIES / ("traffic_push.th" if cfg.push else "traffic.th")).read_text())
    print(f"{'n':>3} {'mtl':>6} {'mht':>8} {'mel':>4}  seconds")
    equilibria = {}
    for n in range(1, cfg.max_length + 1):
        t0 = time.perf_counter()
        if n <= cfg.count_limit:
            mtl = len(enumerate_models(th, None, n, "mtl", workers=cfg.workers, engine=cfg.engine))
            mht = len(enumerate_models(th, None, n, "mht", workers=cfg.workers, engine=cfg.engine))
        else:
            mtl = mht = "-"
        mel = mel_models(th, None, n, workers=cfg.workers, engine=cfg.engine)
        equilibria[n] = mel
        print(f"{n:>3} {mtl:>6} {mht:>8} {len(mel):>4}  {time.perf_counter() - t0:.2f}")
    print()
    for n, mel in equilibria.items():
        for m in mel:
            print(f"n={n}: {m}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-length", type=int, default=Config.max_length)
    ap.add_argument("--push", action="store_true", help="add 'X push' to the theory")
    ap.add_argument("--engine", choices=("brute", "search"), default=Config.engine)
    ap.add_argument("--workers", type=int, default=Config.workers)
    ap.add_argument("--count-limit", type=int, default=Config.count_limit)
    a = ap.parse_args()
    run(Config(a.max_length, a.push, a.engine, a.workers, a.count_limit))


if __name__ == "__main__":
    main()
