"""Upper bound on dim H_2(G; F_p) from a presentation, via Hopf's formula.

With ``a = dim Tor(H_1 G, k)``, ``b`` and ``c`` the p-primary ranks of
``F/R[F,F]`` and ``F/R^p[F,F]``, and ``e`` the size of a generating set of
``R / [F,R] R^p`` found by rewriting, ``d = a + b - c + e`` bounds the
dimension, and equals it when every rewriting system was confluent.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Callable

from .abelian import PrimeField, as_field, prime_primary_rank, tor_dimension
from .presentation import (
    Presentation,
    RelatorSelection,
    generator_pair_commutators,
    generator_relator_commutators,
    power_relators,
    serialize_presentation,
)
from .rewriting import KbConfig, RewritingSystem, Status, complete_presentation
from .words import Word

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HopfQuotient:
    """``F / [F,R] R^p R'`` for a base presentation ``F/R`` and a sublist ``R'``."""

    base: Presentation
    prime: PrimeField
    sublist: RelatorSelection
    derived_presentation: Presentation

    @classmethod
    def build(cls, base: Presentation, k: PrimeField | int, sublist: RelatorSelection) -> "HopfQuotient":
        k = as_field(k)
        relators = (
            generator_relator_commutators(base)
            + power_relators(base, k.p)
            + sublist.words(base)
        )
        return cls(base, k, sublist, base.with_relators(relators))

    def cache_key(self) -> str:
        text = serialize_presentation(self.derived_presentation)
        return hashlib.sha256(text.encode()).hexdigest()[:24]


class CompletionCache:
    """Completed rewriting systems keyed by their derived presentation.

    With a ``directory`` the systems are also written as rule dumps and
    read back on later runs.
    """

    def __init__(self, directory: str | os.PathLike | None = None, load: bool = True,
                 dump: bool = True):
        self.directory = directory
        self.load = load and directory is not None
        self.dump = dump and directory is not None
        self._systems: dict[str, RewritingSystem] = {}
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.rules")

    def get(self, quotient: HopfQuotient, cfg: KbConfig, cancel=None, progress=None) -> RewritingSystem:
        key = quotient.cache_key()
        rs = self._systems.get(key)
        if rs is not None:
            self.hits += 1
            return rs
        if self.load and os.path.exists(self._path(key)):
            with open(self._path(key), encoding="utf-8") as fh:
                rs, header = RewritingSystem.load(fh.read())
            if header.get("key") == key:
                self.hits += 1
                self._systems[key] = rs
                return rs
        self.misses += 1
        rs = complete_presentation(quotient.derived_presentation, cfg, cancel=cancel, progress=progress)
        self._systems[key] = rs
        if self.dump:
            os.makedirs(self.directory, exist_ok=True)
            with open(self._path(key), "w", encoding="utf-8") as fh:
                fh.write(rs.dump(quotient.base.generators, key))
        return rs


def reduce_word(
    base: Presentation,
    z: Word,
    sublist: RelatorSelection,
    k: PrimeField | int,
    cfg: KbConfig | None = None,
    cache: CompletionCache | None = None,
    cancel: Callable[[], bool] | None = None,
) -> tuple[Word, Status]:
    """Reduce ``z`` in ``F/[F,R]R^pR'``.

    A nonempty result is only conclusive when the returned status is
    ``confluent``; an empty result is always a proof of triviality.
    """
    cfg = cfg or KbConfig()
    cache = cache if cache is not None else CompletionCache()
    quotient = HopfQuotient.build(base, k, sublist)
    rs = cache.get(quotient, cfg, cancel=cancel)
    return rs.reduce(z), rs.status


@dataclass
class BasisResult:
    surviving: RelatorSelection
    e: int
    all_confluent: bool
    statuses: list[Status] = field(default_factory=list)
    removed: list[int] = field(default_factory=list)


def find_basis(
    base: Presentation,
    k: PrimeField | int,
    initial: RelatorSelection,
    cfg: KbConfig | None = None,
    cache: CompletionCache | None = None,
    cancel: Callable[[], bool] | None = None,
) -> BasisResult:
    """One pass of redundancy elimination over ``initial``, in order.

    A relator is dropped when it reduces to the identity modulo the
    current selection without it; drops take effect immediately.
    """
    initial.check(base)
    cache = cache if cache is not None else CompletionCache()
    current = initial
    statuses = []
    removed = []
    for x in initial:
        reduced, status = reduce_word(base, base.relators[x], current.without(x), k, cfg, cache, cancel)
        statuses.append(status)
        if not reduced:
            current = current.without(x)
            removed.append(x)
        log.info("relator %d: %s (%s)", x, "dropped" if not reduced else "kept", status)
    return BasisResult(
        surviving=current,
        e=len(current),
        all_confluent=all(s is Status.CONFLUENT for s in statuses),
        statuses=statuses,
        removed=removed,
    )


@dataclass
class HopfReport:
    a: int
    b: int
    c: int
    e: int
    d: int
    pass_history: list[int]
    all_confluent: bool
    stable: bool
    statuses: list[Status]
    wall_times: dict[str, float]
    survivors: RelatorSelection
    removed: list[int] = field(default_factory=list)
    interrupted: bool = False

    @property
    def exact(self) -> bool:
        """d is the dimension itself, not just a bound."""
        return self.all_confluent and self.stable and not self.interrupted

    def to_json(self, base: Presentation) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "e": self.e,
            "d": self.d,
            "exact": self.exact,
            "all_confluent": self.all_confluent,
            "pass_history": list(self.pass_history),
            "survivors": [base.format_word(w) for w in self.survivors.words(base)],
            "statuses": [s.value for s in self.statuses],
            "wall_times_ms": {k: int(round(v * 1000)) for k, v in self.wall_times.items()},
        }


def abelian_terms(base: Presentation, k: PrimeField | int) -> tuple[int, int, int]:
    """``(a, b, c)``: Tor dimension and the p-primary ranks of F/R[F,F] and F/R^p[F,F]."""
    k = as_field(k)
    ff = generator_pair_commutators(base)
    a = tor_dimension(base, k)
    b = prime_primary_rank(base.with_relators(list(base.relators) + ff), k)
    c = prime_primary_rank(base.with_relators(power_relators(base, k.p) + ff), k)
    return a, b, c


def second_homology_bound(
    base: Presentation,
    k: PrimeField | int,
    initial: RelatorSelection | None = None,
    cfg: KbConfig | None = None,
    max_passes: int = 8,
    cache: CompletionCache | None = None,
    cancel: Callable[[], bool] | None = None,
) -> HopfReport:
    """Bound ``dim H_2(G; F_p)``, repeating the basis search until it stops shrinking.

    ``initial`` defaults to every relator. A cancelled run still returns a
    report; its ``d`` remains a valid upper bound.
    """
    k = as_field(k)
    cfg = cfg or KbConfig()
    cache = cache if cache is not None else CompletionCache()
    selection = initial if initial is not None else RelatorSelection.all(base)
    selection.check(base)
    times: dict[str, float] = {}

    t0 = time.perf_counter()
    a = tor_dimension(base, k)
    times["a"] = time.perf_counter() - t0
    t1 = time.perf_counter()
    ff = generator_pair_commutators(base)
    b = prime_primary_rank(base.with_relators(list(base.relators) + ff), k)
    times["b"] = time.perf_counter() - t1
    t1 = time.perf_counter()
    c = prime_primary_rank(base.with_relators(power_relators(base, k.p) + ff), k)
    times["c"] = time.perf_counter() - t1

    t1 = time.perf_counter()
    history: list[int] = []
    statuses: list[Status] = []
    removed: list[int] = []
    stable = False
    interrupted = False
    for n in range(max_passes):
        result = find_basis(base, k, selection, cfg, cache, cancel)
        history.append(result.e)
        statuses.extend(result.statuses)
        removed.extend(result.removed)
        log.info("pass %d: e <= %d", n + 1, result.e)
        selection = result.surviving
        if cancel is not None and cancel():
            interrupted = True
            break
        if not result.removed:
            stable = True
            break
    times["e"] = time.perf_counter() - t1
    times["total"] = time.perf_counter() - t0

    e = len(selection)
    return HopfReport(
        a=a, b=b, c=c, e=e, d=a + b - c + e,
        pass_history=history,
        all_confluent=all(s is Status.CONFLUENT for s in statuses),
        stable=stable,
        statuses=statuses,
        wall_times=times,
        survivors=selection,
        removed=removed,
        interrupted=interrupted,
    )
