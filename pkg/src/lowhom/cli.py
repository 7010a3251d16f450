"""Command line front end.

    lowhom h1 sigma5.pres
    lowhom h2 sigma5.pres -p 2 --json
    lowhom kb z4 --dump-rules z4.rules

The input is a presentation file, or the name of a bundled fixture.

Exit codes: 0 ok, 1 bad input, 2 h2 stopped at a resource cap or was
interrupted (the printed d is still an upper bound), 3 internal error.

JSON report for ``h2``::

    {"a": int, "b": int, "c": int, "e": int, "d": int, "exact": bool,
     "all_confluent": bool, "pass_history": [int], "survivors": [str],
     "statuses": [str], "wall_times_ms": {phase: int}, "sublist": [str]}
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import signal
import sys
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .abelian import (
    PrimeField,
    first_homology,
    first_homology_mod_p,
    prime_primary_rank,
    tor_dimension,
)
from .fixtures import ORDERS, load_fixture
from .hopf import CompletionCache, HopfQuotient, second_homology_bound
from .presentation import (
    Presentation,
    PresentationError,
    RelatorSelection,
    load_presentation,
    serialize_presentation,
    tietze_simplify,
)
from .rewriting import KbConfig, RewritingSystem, complete_presentation

COMMANDS = ("h1", "h1modp", "tor", "prank", "h2", "reduce", "kb", "simplify")
NEEDS_PRIME = {"h1modp", "tor", "prank", "h2", "reduce"}


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: str
    prime: PrimeField | None = None
    max_equations: int = 500_000
    tidy_interval: int = 100
    max_seconds: float | None = None
    max_passes: int = 8
    sublist_indices: list[int] | None = None  # 1-based
    output_format: str = "text"
    simplify_first: bool = False
    dump_rules: str | None = None
    load_rules: str | None = None
    word: str | None = None
    max_normal_forms: int = 100_000
    cancel: threading.Event = field(default_factory=threading.Event)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command in NEEDS_PRIME and self.prime is None:
            raise UsageError(f"{self.command} needs a prime (-p)")
        if self.output_format not in ("text", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")

    @property
    def kb(self) -> KbConfig:
        return KbConfig(self.max_equations, self.tidy_interval, self.max_seconds)


def read_input(path: str) -> Presentation:
    if os.path.exists(path):
        return load_presentation(path)
    name = os.path.basename(path)
    if name.endswith(".pres"):
        name = name[:-5]
    if name in ORDERS:
        return load_fixture(name)
    raise UsageError(f"no such file or fixture: {path}")


def _selection(cfg: RunConfig, p: Presentation) -> RelatorSelection | None:
    if cfg.sublist_indices is None:
        return None
    for i in cfg.sublist_indices:
        if not 1 <= i <= len(p.relators):
            raise UsageError(f"--sublist index {i} out of range 1..{len(p.relators)}")
    return RelatorSelection(tuple(i - 1 for i in cfg.sublist_indices))


def _emit(cfg: RunConfig, out, payload: dict, text: str) -> None:
    if cfg.output_format == "json":
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(text + "\n")


def _load_system(path: str, p: Presentation) -> RewritingSystem:
    with open(path, encoding="utf-8") as fh:
        rs, header = RewritingSystem.load(fh.read())
    gens = [g.strip() for g in header["generators"].split(",") if g.strip()]
    if gens != list(p.generators):
        raise UsageError(f"rule dump {path} is over generators {gens}, not {list(p.generators)}")
    return rs


def _h2(cfg: RunConfig, p: Presentation, out) -> int:
    cache = CompletionCache(cfg.dump_rules or cfg.load_rules,
                            load=cfg.load_rules is not None, dump=cfg.dump_rules is not None)
    selection = _selection(cfg, p)
    report = second_homology_bound(p, cfg.prime, selection, cfg.kb, cfg.max_passes, cache,
                                   cancel=cfg.cancel.is_set)
    if report.d != report.a + report.b - report.c + report.e:
        raise InvariantViolation("d != a + b - c + e")
    if any(x < y for x, y in zip(report.pass_history, report.pass_history[1:])):
        raise InvariantViolation(f"pass history increased: {report.pass_history}")
    payload = report.to_json(p)
    payload["sublist"] = [p.format_word(w) for w in
                          (selection or RelatorSelection.all(p)).words(p)]
    if report.exact:
        verdict = f"d = {report.d} (exact: rewriting confluent)"
    elif report.interrupted:
        verdict = f"d <= {report.d} (upper bound: interrupted)"
    elif not report.all_confluent:
        verdict = f"d <= {report.d} (upper bound: rewriting not confluent)"
    else:
        verdict = f"d <= {report.d} (upper bound: basis search did not stabilise)"
    lines = [
        f"a = {report.a}   dim Tor(H_1(G), F_{cfg.prime.p})",
        f"b = {report.b}   p-primary rank of F/R[F,F]",
        f"c = {report.c}   p-primary rank of F/R^p[F,F]",
        f"e = {report.e}   passes: {', '.join(map(str, report.pass_history))}",
        "survivors: " + ("; ".join(payload["survivors"]) or "(none)"),
        verdict,
    ]
    _emit(cfg, out, payload, "\n".join(lines))
    return 0 if report.all_confluent and not report.interrupted else 2


def _kb(cfg: RunConfig, p: Presentation, out) -> int:
    if cfg.load_rules:
        rs = _load_system(cfg.load_rules, p)
    else:
        rs = complete_presentation(p, cfg.kb, cancel=cfg.cancel.is_set)
    if cfg.dump_rules:
        with open(cfg.dump_rules, "w", encoding="utf-8") as fh:
            fh.write(rs.dump(p.generators))
    count = rs.count_normal_forms(cfg.max_normal_forms) if rs.is_confluent else None
    payload = {"status": rs.status.value, "rules": len(rs),
               "equations_processed": rs.equations_processed, "normal_forms": count}
    lines = [f"status: {rs.status.value}", f"rules: {len(rs)}"]
    if rs.is_confluent:
        lines.append("normal forms: " + (str(count) if count is not None
                                         else f">= {cfg.max_normal_forms}"))
    if cfg.word is not None:
        w = p.word(cfg.word)
        reduced = p.format_word(rs.reduce(w))
        payload["reduced"] = reduced
        lines.append(f"reduced: {reduced}")
    _emit(cfg, out, payload, "\n".join(lines))
    return 0


def _reduce(cfg: RunConfig, p: Presentation, out) -> int:
    if cfg.word is None:
        raise UsageError("reduce needs --word")
    selection = _selection(cfg, p) or RelatorSelection()
    quotient = HopfQuotient.build(p, cfg.prime, selection)
    if cfg.load_rules:
        rs = _load_system(cfg.load_rules, p)
    else:
        rs = complete_presentation(quotient.derived_presentation, cfg.kb, cancel=cfg.cancel.is_set)
    if cfg.dump_rules:
        with open(cfg.dump_rules, "w", encoding="utf-8") as fh:
            fh.write(rs.dump(p.generators, quotient.cache_key()))
    reduced = rs.reduce(p.word(cfg.word))
    text = p.format_word(reduced)
    payload = {"reduced": text, "identity": not reduced, "status": rs.status.value,
               "sublist": [p.format_word(w) for w in selection.words(p)]}
    _emit(cfg, out, payload, f"{text}\nstatus: {rs.status.value}")
    return 0


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        p = read_input(cfg.input_path)
        if cfg.simplify_first or cfg.command == "simplify":
            p = tietze_simplify(p)
        cmd = cfg.command
        if cmd == "simplify":
            payload = {"generators": list(p.generators),
                       "relators": [p.format_word(r) for r in p.relators]}
            _emit(cfg, out, payload, serialize_presentation(p).rstrip("\n"))
            return 0
        if cmd == "h1":
            inv = first_homology(p)
            _emit(cfg, out, {"invariants": inv}, str(inv))
            return 0
        if cmd in ("h1modp", "tor", "prank"):
            fn = {"h1modp": first_homology_mod_p, "tor": tor_dimension,
                  "prank": prime_primary_rank}[cmd]
            value = fn(p, cfg.prime)
            _emit(cfg, out, {cmd: value, "prime": cfg.prime.p}, str(value))
            return 0
        if cmd == "h2":
            return _h2(cfg, p, out)
        if cmd == "kb":
            return _kb(cfg, p, out)
        return _reduce(cfg, p, out)
    except (UsageError, PresentationError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    except InvariantViolation as exc:
        err.write(f"internal error: {exc}\n")
        return 3


def _sublist(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _prime(text: str) -> PrimeField:
    try:
        return PrimeField(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for capped h2 runs
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lowhom", description="Low-dimensional homology of finitely presented groups.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "h1": "abelian invariants of H_1(G)",
        "h1modp": "dim H_1(G; F_p)",
        "tor": "dim Tor(H_1(G), F_p)",
        "prank": "p-primary rank of H_1(G)",
        "h2": "upper bound on dim H_2(G; F_p)",
        "reduce": "reduce a word in F/[F,R]R^pR'",
        "kb": "Knuth-Bendix completion of the presentation",
        "simplify": "Tietze-simplified presentation",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("input", help="presentation file or fixture name")
        sp.add_argument("-p", "--prime", type=_prime)
        sp.add_argument("--json", action="store_true", help="emit one JSON object")
        sp.add_argument("--simplify-first", action="store_true")
        if name in ("h2", "reduce", "kb"):
            sp.add_argument("--max-eqns", type=int, default=500_000)
            sp.add_argument("--tidy", type=int, default=100)
            sp.add_argument("--max-seconds", type=float)
            sp.add_argument("--dump-rules", metavar="PATH",
                            help="write rule dumps (a directory for h2)")
            sp.add_argument("--load-rules", metavar="PATH",
                            help="reuse rule dumps (a directory for h2)")
        if name in ("h2", "reduce"):
            sp.add_argument("--sublist", type=_sublist,
                            help="1-based relator indices, comma separated")
        if name == "h2":
            sp.add_argument("--max-passes", type=int, default=8)
        if name in ("reduce", "kb"):
            sp.add_argument("--word", help="word to reduce")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(asctime)s %(name)s %(message)s",
    )
    try:
        cfg = RunConfig(
            command=args.command,
            input_path=args.input,
            prime=args.prime,
            max_equations=getattr(args, "max_eqns", 500_000),
            tidy_interval=getattr(args, "tidy", 100),
            max_seconds=getattr(args, "max_seconds", None),
            max_passes=getattr(args, "max_passes", 8),
            sublist_indices=getattr(args, "sublist", None),
            output_format="json" if args.json else "text",
            simplify_first=args.simplify_first,
            dump_rules=getattr(args, "dump_rules", None),
            load_rules=getattr(args, "load_rules", None),
            word=getattr(args, "word", None),
        )
        cfg.kb
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1

    def interrupt(signum, frame):
        cfg.cancel.set()

    previous = signal.signal(signal.SIGINT, interrupt)
    try:
        return run(cfg)
    finally:
        signal.signal(signal.SIGINT, previous)


if __name__ == "__main__":
    sys.exit(main())
