"""Knuth-Bendix completion for group presentations under shortlex.

Words in the monoid alphabet are Python strings: generator ``i`` is
``chr(2*i)`` and its inverse is ``chr(2*i + 1)``. Plain string comparison
is then the ranking ``g0 < g0^-1 < g1 < g1^-1 < ...``, so shortlex is
``(len(u), u)``.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

from .presentation import Presentation
from .words import Word

log = logging.getLogger(__name__)

_TERMINAL = None


class Status(str, Enum):
    CONFLUENT = "confluent"
    CAPPED = "capped"
    TIMED_OUT = "timed_out"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class KbConfig:
    max_equations: int = 500_000
    tidy_interval: int = 100
    max_seconds: float | None = None
    max_rule_length: int | None = None

    def __post_init__(self):
        if self.max_equations < 1:
            raise ValueError("max_equations must be >= 1")
        if self.tidy_interval < 1:
            raise ValueError("tidy_interval must be >= 1")


def word_to_str(w: Word) -> str:
    return "".join(chr(2 * g + (s < 0)) for g, s in w.letters)


def str_to_word(s: str) -> Word:
    return Word((ord(c) >> 1, -1 if ord(c) & 1 else 1) for c in s)


def _inv(s: str) -> str:
    return "".join(chr(ord(c) ^ 1) for c in reversed(s))


def format_letters(s: str, generators: Sequence[str]) -> str:
    """Spell a string letter by letter; unlike words, ``a a^-1`` stays as written."""
    if not s:
        return "1"
    return " ".join(generators[ord(c) >> 1] + ("^-1" if ord(c) & 1 else "") for c in s)


def parse_letters(text: str, generators: Sequence[str]) -> str:
    index = {g: i for i, g in enumerate(generators)}
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        name, sep, exp = tok.partition("^")
        if name not in index or (sep and exp != "-1"):
            raise ValueError(f"bad letter {tok!r}")
        out.append(chr(2 * index[name] + bool(sep)))
    return "".join(out)


def shortlex_key(s: str) -> tuple[int, str]:
    return (len(s), s)


def orient(u: str, v: str) -> tuple[str, str]:
    return (u, v) if shortlex_key(u) > shortlex_key(v) else (v, u)


class RewritingSystem:
    """A shortlex-decreasing rule set over the doubled generator alphabet.

    Rules are indexed by a trie of reversed left-hand sides, so rewriting
    is a single left-to-right pass with a stack.
    """

    def __init__(self, n_gens: int, rules: Iterable[tuple[str, str]] = ()):
        self.n_gens = n_gens
        self.rules: dict[str, str] = {}
        self._trie: dict = {}
        self.status = Status.CAPPED
        self.equations_processed = 0
        for lhs, rhs in rules:
            self.add_rule(lhs, rhs)

    # -- rule storage
    def add_rule(self, lhs: str, rhs: str) -> None:
        if shortlex_key(lhs) <= shortlex_key(rhs):
            raise ValueError("rule does not decrease in shortlex")
        self.rules[lhs] = rhs
        node = self._trie
        for c in reversed(lhs):
            node = node.setdefault(c, {})
        node[_TERMINAL] = lhs

    def remove_rule(self, lhs: str) -> None:
        del self.rules[lhs]
        path = [self._trie]
        for c in reversed(lhs):
            path.append(path[-1][c])
        del path[-1][_TERMINAL]
        for c, parent, node in zip(lhs, path[-2::-1], path[:0:-1]):
            if node:
                break
            del parent[c]

    def __len__(self) -> int:
        return len(self.rules)

    # -- rewriting
    def _match(self, out: list[str]) -> str | None:
        """Left-hand side matching a suffix of ``out``, if any."""
        node = self._trie
        k = len(out) - 1
        while k >= 0:
            node = node.get(out[k])
            if node is None:
                return None
            lhs = node.get(_TERMINAL)
            if lhs is not None:
                return lhs
            k -= 1
        return None

    def rewrite(self, s: str) -> str:
        trie = self._trie
        out: list[str] = []
        todo = list(s)
        todo.reverse()
        pop, push = todo.pop, out.append
        while todo:
            push(pop())
            # walk the reversed-lhs trie back from the end of out
            node = trie
            k = len(out) - 1
            while k >= 0:
                node = node.get(out[k])
                if node is None:
                    break
                lhs = node.get(_TERMINAL)
                if lhs is not None:
                    del out[k:]
                    todo.extend(reversed(self.rules[lhs]))
                    break
                k -= 1
        return "".join(out)

    def is_reducible(self, s: str) -> bool:
        out: list[str] = []
        for c in s:
            out.append(c)
            if self._match(out) is not None:
                return True
        return False

    def reduce(self, w: Word) -> Word:
        if any(g >= self.n_gens for g in w.generators()):
            raise ValueError("word uses a generator outside the system's alphabet")
        return str_to_word(self.rewrite(word_to_str(w)))

    @property
    def is_confluent(self) -> bool:
        return self.status is Status.CONFLUENT

    # -- critical pairs
    def critical_pairs(self) -> Iterable[tuple[str, str]]:
        """Both one-step reducts of every overlap ``xyz`` with ``xy``, ``yz`` left-hand sides."""
        by_prefix: dict[str, list[str]] = {}
        for lhs in self.rules:
            for k in range(1, len(lhs)):
                by_prefix.setdefault(lhs[:k], []).append(lhs)
        for l1, r1 in self.rules.items():
            for k in range(1, len(l1)):
                for l2 in by_prefix.get(l1[len(l1) - k:], ()):
                    yield r1 + l2[k:], l1[: len(l1) - k] + self.rules[l2]
            for l2 in self.rules:
                if l2 != l1 and l2 in l1:
                    i = l1.index(l2)
                    yield r1, l1[:i] + self.rules[l2] + l1[i + len(l2):]

    def check_confluence(self) -> bool:
        """Independent local-confluence check over all critical pairs."""
        return all(self.rewrite(u) == self.rewrite(v) for u, v in self.critical_pairs())

    # -- normal forms
    def enumerate_normal_forms(self, max_count: int) -> list[Word] | None:
        """Breadth-first list of irreducible words; None if there are at least ``max_count``."""
        found = [""]
        queue = deque([""])
        alphabet = [chr(i) for i in range(2 * self.n_gens)]
        while queue:
            s = queue.popleft()
            for c in alphabet:
                t = s + c
                # s is irreducible, so only suffixes of t can match
                if self._match(list(t)) is None:
                    found.append(t)
                    if len(found) >= max_count:
                        return None
                    queue.append(t)
        return [str_to_word(s) for s in found]

    def count_normal_forms(self, max_count: int) -> int | None:
        nfs = self.enumerate_normal_forms(max_count)
        return None if nfs is None else len(nfs)

    # -- dump format
    def dump(self, generators: Sequence[str], key: str | None = None) -> str:
        lines = [
            f"# status: {self.status.value}",
            f"# equations_processed: {self.equations_processed}",
            "# generators: " + ", ".join(generators),
        ]
        if key is not None:
            lines.append(f"# key: {key}")
        for lhs, rhs in sorted(self.rules.items(), key=lambda kv: shortlex_key(kv[0])):
            lines.append(f"{format_letters(lhs, generators)} -> {format_letters(rhs, generators)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> tuple["RewritingSystem", dict[str, str]]:
        """Parse a rule dump; returns the system and its ``# name: value`` header."""
        header: dict[str, str] = {}
        rule_lines = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if stripped.startswith("#"):
                name, sep, value = stripped[1:].partition(":")
                if sep:
                    header[name.strip()] = value.strip()
            elif stripped:
                rule_lines.append((lineno, line))
        if "generators" not in header:
            raise ValueError("rule dump is missing its '# generators:' header")
        gens = [g.strip() for g in header["generators"].split(",") if g.strip()]
        rs = cls(len(gens))
        for lineno, line in rule_lines:
            lhs, sep, rhs = line.partition("->")
            if not sep:
                raise ValueError(f"line {lineno}: expected 'lhs -> rhs'")
            try:
                rs.add_rule(parse_letters(lhs, gens), parse_letters(rhs, gens))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        rs.status = Status(header.get("status", Status.CAPPED.value))
        rs.equations_processed = int(header.get("equations_processed", 0))
        return rs, header


def build_monoid_presentation(p: Presentation) -> list[tuple[str, str]]:
    """Free cancellation rules plus one equation ``r = 1`` per nonempty relator."""
    eqs = []
    for g in range(p.n_gens):
        x, X = chr(2 * g), chr(2 * g + 1)
        eqs.append((x + X, ""))
        eqs.append((X + x, ""))
    for r in p.relators:
        s = word_to_str(r)
        if s:
            eqs.append(orient(s, ""))
    return eqs


class _Completion:
    """Completion in rule order.

    Rules are numbered as they are created. Rule ``i`` is overlapped with
    every live rule ``j <= i`` before moving on to ``i + 1``; new rules are
    added straight away and take their turn at the end of the list. Every
    ``tidy_interval`` new rules the system is interreduced.
    """

    def __init__(self, n_gens, cfg: KbConfig, cancel, progress):
        self.rs = RewritingSystem(n_gens)
        self.cfg = cfg
        self.cancel = cancel
        self.progress = progress
        self.order: list[str] = []
        self.pos: dict[str, int] = {}
        self.dropped_long = False
        self.since_tidy = 0
        # proper prefix/suffix -> lhs carrying it (dicts keep iteration deterministic)
        self.by_prefix: dict[str, dict[str, None]] = {}
        self.by_suffix: dict[str, dict[str, None]] = {}

    def _insert(self, lhs: str, rhs: str) -> None:
        self.rs.add_rule(lhs, rhs)
        self.pos[lhs] = len(self.order)
        self.order.append(lhs)
        for k in range(1, len(lhs)):
            self.by_prefix.setdefault(lhs[:k], {})[lhs] = None
            self.by_suffix.setdefault(lhs[k:], {})[lhs] = None

    def _delete(self, lhs: str) -> None:
        self.rs.remove_rule(lhs)
        del self.pos[lhs]
        for k in range(1, len(lhs)):
            del self.by_prefix[lhs[:k]][lhs]
            del self.by_suffix[lhs[k:]][lhs]

    def equation(self, u: str, v: str) -> bool:
        """Reduce both sides and store the result as a rule if they differ."""
        rs = self.rs
        u, v = rs.rewrite(u), rs.rewrite(v)
        if u == v:
            return False
        lhs, rhs = orient(u, v)
        if self.cfg.max_rule_length is not None and len(lhs) > self.cfg.max_rule_length:
            self.dropped_long = True
            return False
        self._insert(lhs, rhs)
        rs.equations_processed += 1
        self.since_tidy += 1
        return True

    def tidy(self) -> None:
        rs = self.rs
        rules = rs.rules
        changed = True
        while changed:
            changed = False
            for lhs in list(rules):
                if lhs not in rules:
                    continue
                # a proper factor of lhs lies inside lhs[:-1] or lhs[1:]
                if rs.is_reducible(lhs[:-1]) or rs.is_reducible(lhs[1:]):
                    rhs = rules[lhs]
                    self._delete(lhs)
                    self.equation(lhs, rhs)
                    changed = True
        for lhs, rhs in rules.items():
            rules[lhs] = rs.rewrite(rhs)
        self.since_tidy = 0
        if self.progress is not None:
            self.progress(rs.equations_processed, len(rs))
        log.debug("tidy: %d rules, %d processed, at %d/%d",
                  len(rs), rs.equations_processed, self.i, len(self.order))

    def overlaps(self, li: str, i: int) -> list[tuple[int, str, str, int]]:
        """Overlaps of rule ``li`` with live rules numbered ``<= i``."""
        pos = self.pos
        found = []
        n = len(li)
        for k in range(1, n):
            # li = x y, lj = y z
            for lj in self.by_prefix.get(li[n - k:], ()):
                if pos[lj] <= i:
                    found.append((pos[lj], li, lj, k))
            # lj = x y, li = y z
            for lj in self.by_suffix.get(li[:k], ()):
                if pos[lj] < i:
                    found.append((pos[lj], lj, li, k))
        found.sort(key=lambda t: (t[0], t[3], t[1] != li))
        return found

    def stop_reason(self, deadline) -> Status | None:
        if self.cancel is not None and self.cancel():
            return Status.TIMED_OUT
        if deadline is not None and time.monotonic() > deadline:
            return Status.TIMED_OUT
        if len(self.rs) > self.cfg.max_equations:
            return Status.CAPPED
        return None

    def run(self, equations: Iterable[tuple[str, str]]) -> RewritingSystem:
        rs, cfg = self.rs, self.cfg
        rules = rs.rules
        deadline = None if cfg.max_seconds is None else time.monotonic() + cfg.max_seconds
        self.i = 0
        for u, v in equations:
            self.equation(u, v)
        self.tidy()
        status = None
        while status is None:
            if self.i == len(self.order):
                # the closing tidy may itself add rules that still need overlapping
                self.tidy()
                if self.i == len(self.order):
                    break
            li = self.order[self.i]
            if li in rules:
                for _, a, b, k in self.overlaps(li, self.i):
                    status = self.stop_reason(deadline)
                    if status is not None:
                        break
                    if a not in rules or b not in rules:
                        continue
                    self.equation(rules[a] + b[k:], a[: len(a) - k] + rules[b])
                    if self.since_tidy >= cfg.tidy_interval:
                        self.tidy()
                        if li not in rules:
                            break
            self.i += 1
        if status is None:
            status = Status.CAPPED if self.dropped_long else Status.CONFLUENT
        else:
            for lhs, rhs in rules.items():
                rules[lhs] = rs.rewrite(rhs)
            if self.progress is not None:
                self.progress(rs.equations_processed, len(rs))
        rs.status = status
        return rs


def complete(
    equations: Iterable[tuple[str, str]],
    n_gens: int,
    cfg: KbConfig | None = None,
    cancel: Callable[[], bool] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> RewritingSystem:
    """Run Knuth-Bendix completion on monoid equations over ``2 * n_gens`` letters.

    Rules are overlapped in the order they were created, each against every
    older live rule, so short rules found early are used early. The result is always sound; its
    ``status`` says whether it is confluent or stopped at a cap.
    ``cancel`` is polled once per equation; ``progress(processed, n_rules)``
    is called at every tidy and at the end.
    """
    cfg = cfg or KbConfig()
    return _Completion(n_gens, cfg, cancel, progress).run(equations)


def complete_presentation(p: Presentation, cfg: KbConfig | None = None, **kwargs) -> RewritingSystem:
    return complete(build_monoid_presentation(p), p.n_gens, cfg, **kwargs)
