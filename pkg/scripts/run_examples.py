"""Run the H_2 bound over the bundled fixtures and print a results table.

    python3 scripts/run_examples.py
    python3 scripts/run_examples.py --sl2 --max-seconds 600 --out results.json
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from lowhom.fixtures import load_fixture
from lowhom.hopf import CompletionCache, second_homology_bound
from lowhom.rewriting import KbConfig

# (fixture, prime, known dim H_2(G; F_p) or None)
SMALL = [
    ("sigma5", 2, 2),
    ("sigma3", 2, 1),
    ("sigma3", 3, 0),
    ("z4", 2, 1),
    ("z4", 3, 0),
    ("z6", 2, 1),
    ("z6", 3, 1),
    ("z4_redundant", 2, 1),
    ("z2xz2", 2, 3),
    ("zxz", 2, 1),
    ("zxz", 3, 1),
    ("free2", 5, 0),
]
SL2 = [("sl2_3", 3, None), ("sl2_5", 5, None), ("sl2_7", 7, None)]


@dataclass
class ExperimentConfig:
    sl2: bool = False
    max_equations: int = 500_000
    tidy_interval: int = 100
    max_seconds: float | None = None
    max_passes: int = 8
    cache_dir: str | None = None


def run(cfg: ExperimentConfig) -> list[dict]:
    kb = KbConfig(cfg.max_equations, cfg.tidy_interval, cfg.max_seconds)
    rows = []
    for name, p, known in SMALL + (SL2 if cfg.sl2 else []):
        cache = CompletionCache(cfg.cache_dir)
        t0 = time.perf_counter()
        report = second_homology_bound(load_fixture(name), p, cfg=kb, max_passes=cfg.max_passes,
                                       cache=cache)
        rows.append({
            "fixture": name, "p": p, "a": report.a, "b": report.b, "c": report.c,
            "e": report.e, "d": report.d, "exact": report.exact, "known": known,
            "passes": report.pass_history, "seconds": round(time.perf_counter() - t0, 3),
        })
        print(f"{name:14} p={p}  a={report.a} b={report.b} c={report.c} e={report.e}  "
              f"d{'=' if report.exact else '<='}{report.d}"
              + (f"  (known {known})" if known is not None else "")
              + f"  {rows[-1]['seconds']:.2f}s", flush=True)
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sl2", action="store_true", help="include the SL_2 fixtures (very slow)")
    parser.add_argument("--max-eqns", type=int, default=500_000)
    parser.add_argument("--max-seconds", type=float, help="per completion")
    parser.add_argument("--max-passes", type=int, default=8)
    parser.add_argument("--cache-dir", help="reuse rule dumps across runs")
    parser.add_argument("--out", help="write rows and config as JSON")
    args = parser.parse_args(argv)
    cfg = ExperimentConfig(sl2=args.sl2, max_equations=args.max_eqns, max_seconds=args.max_seconds,
                           max_passes=args.max_passes, cache_dir=args.cache_dir)
    rows = run(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)
    bad = [r for r in rows if r["known"] is not None and r["exact"] and r["d"] != r["known"]]
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
