"""Finite group presentations: text format, derived relator lists, Tietze moves.

Text format::

    # comments run to end of line
    generators: a, b
    relators: a^5; b^2; (a^-1 b)^4
              (a^2 b a^-2 b)^2

Relators are separated by ``;`` or newlines. A factor is an identifier,
a parenthesised word or a commutator ``[u, v] = u^-1 v^-1 u v``, with an
optional signed integer exponent. ``1`` denotes the empty word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import (
    IDENTITY,
    Word,
    commutator,
    cyclic_reduce,
    invert,
    multiply,
    power,
)

DEFAULT_MAX_LENGTH = 10**6

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class PresentationError(ValueError):
    """Bad presentation text, with an optional 1-based line/column."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError(f"duplicate generator names in {self.generators}")
        for name in self.generators:
            if not _IDENT.fullmatch(name):
                raise PresentationError(f"invalid generator name {name!r}")
        n = len(self.generators)
        for r in self.relators:
            if not isinstance(r, Word):
                raise TypeError(f"relators must be Word, got {type(r).__name__}")
            if any(l.gen >= n for l in r):
                raise PresentationError(f"relator {r!r} uses a generator outside 0..{n - 1}")

    @property
    def n_gens(self) -> int:
        return len(self.generators)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def gen_word(self, name: str) -> Word:
        return Word.gen(self.generators.index(name))

    def with_relators(self, relators: Iterable[Word]) -> "Presentation":
        return Presentation(self.generators, tuple(relators))

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        return parse_word(text, self.generators)

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)

    def __str__(self) -> str:
        return serialize_presentation(self)


@dataclass(frozen=True)
class RelatorSelection:
    """Positions into a presentation's relator list, in a fixed order."""

    indices: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"repeated relator index in {self.indices}")
        if any(i < 0 for i in self.indices):
            raise ValueError(f"negative relator index in {self.indices}")

    @classmethod
    def all(cls, p: Presentation) -> "RelatorSelection":
        return cls(tuple(range(len(p.relators))))

    def check(self, p: Presentation) -> None:
        for i in self.indices:
            if i >= len(p.relators):
                raise ValueError(f"relator index {i} out of range ({len(p.relators)} relators)")

    def words(self, p: Presentation) -> list[Word]:
        self.check(p)
        return [p.relators[i] for i in self.indices]

    def without(self, i: int) -> "RelatorSelection":
        return RelatorSelection(tuple(j for j in self.indices if j != i))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<sym>[()\[\],^]))"
)


class _WordParser:
    def __init__(self, text: str, names: dict[str, int], line: int, col0: int, max_length: int):
        self.text = text
        self.names = names
        self.line = line
        self.col0 = col0
        self.max_length = max_length
        self.pos = 0
        self._peeked = None

    def error(self, message: str, pos: int | None = None):
        pos = self.pos if pos is None else pos
        raise PresentationError(message, self.line, self.col0 + pos + 1)

    def peek(self):
        if self._peeked is None:
            m = _TOKEN.match(self.text, self.pos)
            if m is None:
                rest = self.text[self.pos:]
                if rest.strip() == "":
                    self._peeked = ("eof", None, len(self.text), len(self.text))
                else:
                    start = self.pos + len(rest) - len(rest.lstrip())
                    self.error(f"unexpected character {self.text[start]!r}", start)
            else:
                kind = m.lastgroup
                self._peeked = (kind, m.group(kind), m.start(kind), m.end())
        return self._peeked

    def next(self):
        tok = self.peek()
        self.pos = tok[3]
        self._peeked = None
        return tok

    def expect(self, sym: str):
        kind, val, start, _ = self.next()
        if kind != "sym" or val != sym:
            shown = "end of input" if kind == "eof" else repr(val)
            self.error(f"expected {sym!r}, found {shown}", start)

    def check_length(self, w: Word, start: int) -> Word:
        if len(w) > self.max_length:
            self.error(f"word length {len(w)} exceeds cap {self.max_length}", start)
        return w

    def word(self) -> Word:
        kind, val, start, _ = self.peek()
        if not self._starts_atom():
            shown = "end of input" if kind == "eof" else repr(val)
            self.error(f"expected a word, found {shown}", start)
        w = IDENTITY
        while self._starts_atom():
            w = self.check_length(multiply(w, self.factor()), start)
        return w

    def _starts_atom(self) -> bool:
        kind, val, _, _ = self.peek()
        return kind == "ident" or (kind == "sym" and val in "([") or (kind == "int" and val == "1")

    def factor(self) -> Word:
        start = self.peek()[2]
        w = self.atom()
        kind, val, _, _ = self.peek()
        if kind == "sym" and val == "^":
            self.next()
            kind, val, estart, _ = self.next()
            if kind != "int":
                self.error("expected an integer exponent", estart)
            try:
                w = power(w, int(val), self.max_length)
            except OverflowError as exc:
                self.error(str(exc), start)
        return w

    def atom(self) -> Word:
        kind, val, start, _ = self.next()
        if kind == "ident":
            if val not in self.names:
                self.error(f"unknown generator {val!r}", start)
            return Word.gen(self.names[val])
        if kind == "int" and val == "1":
            return IDENTITY
        if kind == "sym" and val == "(":
            w = self.word()
            self.expect(")")
            return w
        if kind == "sym" and val == "[":
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return self.check_length(commutator(u, v), start)
        shown = "end of input" if kind == "eof" else repr(val)
        self.error(f"expected a generator, '(' or '[', found {shown}", start)

    def finish(self):
        kind, val, start, _ = self.peek()
        if kind != "eof":
            self.error(f"unexpected {val!r}", start)


def parse_word(
    text: str,
    generators: Sequence[str],
    max_length: int = DEFAULT_MAX_LENGTH,
    line: int = 1,
    col0: int = 0,
) -> Word:
    names = {g: i for i, g in enumerate(generators)}
    parser = _WordParser(text, names, line, col0, max_length)
    w = parser.word()
    parser.finish()
    return w


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_relators(chunks: list[tuple[int, int, str]]):
    """Split relator text on ';' and newlines, ignoring separators nested in brackets."""
    pieces = []
    for lineno, col0, text in chunks:
        depth = 0
        start = 0
        for i, ch in enumerate(text):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == ";" and depth == 0:
                pieces.append((lineno, col0 + start, text[start:i]))
                start = i + 1
        pieces.append((lineno, col0 + start, text[start:]))
    return [(ln, c, t) for ln, c, t in pieces if t.strip()]


def parse_presentation(text: str, max_length: int = DEFAULT_MAX_LENGTH) -> Presentation:
    gen_line = None
    generators: list[str] = []
    rel_chunks: list[tuple[int, int, str]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key == "generators":
            if gen_line is not None:
                raise PresentationError("duplicate 'generators:' section", lineno, 1)
            gen_line = lineno
            section = "generators"
            offset = len(head) + 1
            if rest.strip():
                generators.extend(_parse_gen_names(rest, lineno, offset, generators))
        elif sep and key == "relators":
            if gen_line is None:
                raise PresentationError("'relators:' before 'generators:'", lineno, 1)
            section = "relators"
            rel_chunks.append((lineno, len(head) + 1, rest))
        elif section == "relators":
            rel_chunks.append((lineno, 0, line))
        elif section == "generators":
            generators.extend(_parse_gen_names(line, lineno, 0, generators))
        else:
            raise PresentationError("expected 'generators:'", lineno, 1)
    if gen_line is None:
        raise PresentationError("missing 'generators:' section")
    relators = []
    for lineno, col0, piece in _split_relators(rel_chunks):
        relators.append(parse_word(piece, generators, max_length, lineno, col0))
    return Presentation(tuple(generators), tuple(relators))


def _parse_gen_names(text: str, lineno: int, col0: int, seen: list[str]) -> list[str]:
    names = []
    pos = 0
    parts = text.split(",")
    if len(parts) > 1 and not parts[-1].strip():
        # trailing comma: list continues on the next line
        parts.pop()
    for part in parts:
        name = part.strip()
        col = col0 + pos + (len(part) - len(part.lstrip())) + 1
        pos += len(part) + 1
        if not name:
            raise PresentationError("empty generator name", lineno, col)
        if not _IDENT.fullmatch(name):
            raise PresentationError(f"invalid generator name {name!r}", lineno, col)
        if name in seen or name in names:
            raise PresentationError(f"duplicate generator {name!r}", lineno, col)
        names.append(name)
    return names


def load_presentation(path, max_length: int = DEFAULT_MAX_LENGTH) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read(), max_length)


# ---------------------------------------------------------- serialization

def format_word(w: Word, generators: Sequence[str]) -> str:
    """Run-length formatted word, e.g. ``a^2 b a^-2 b``; ``1`` for the identity."""
    if not w:
        return "1"
    parts = []
    letters = w.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        exp = (j - i) * letters[i].sign
        name = generators[letters[i].gen]
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)


def serialize_presentation(p: Presentation) -> str:
    lines = ["generators: " + ", ".join(p.generators)]
    if p.relators:
        lines.append("relators: " + "; ".join(format_word(r, p.generators) for r in p.relators))
    else:
        lines.append("relators:")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------- derived relators

def generator_relator_commutators(p: Presentation) -> list[Word]:
    """``[g, r]`` for every generator g and relator r, generator-major."""
    return [commutator(Word.gen(g), r) for g in range(p.n_gens) for r in p.relators]


def generator_pair_commutators(p: Presentation) -> list[Word]:
    """``[g_i, g_j]`` over all ordered pairs, row-major, including ``i == j``."""
    gens = [Word.gen(i) for i in range(p.n_gens)]
    return [commutator(x, y) for x in gens for y in gens]


def power_relators(p: Presentation, k: int) -> list[Word]:
    if k < 1:
        raise ValueError(f"power must be positive, got {k}")
    return [power(r, k) for r in p.relators]


# ------------------------------------------------------------- Tietze

def _cyclic_key(w: Word) -> tuple:
    """Canonical representative of w up to cyclic permutation and inversion."""
    if not w:
        return ()
    best = None
    for base in (w.letters, invert(w).letters):
        for i in range(len(base)):
            cand = base[i:] + base[:i]
            if best is None or cand < best:
                best = cand
    return best


def _substitute(w: Word, gen: int, replacement: Word) -> Word:
    """Replace generator ``gen`` by ``replacement`` and renumber higher generators down."""
    replacement = Word((g - 1 if g > gen else g, s) for g, s in replacement.letters)
    rep_inv = invert(replacement)
    out = IDENTITY
    buf = []
    for g, s in w.letters:
        if g == gen:
            if buf:
                out = multiply(out, Word(buf))
                buf = []
            out = multiply(out, replacement if s == 1 else rep_inv)
        else:
            buf.append((g - 1 if g > gen else g, s))
    if buf:
        out = multiply(out, Word(buf))
    return out


def _tidy_relators(relators: Iterable[Word]) -> list[Word]:
    """Cyclically reduce, drop empty relators and duplicates up to rotation/inversion."""
    out = []
    seen = set()
    for r in relators:
        r = cyclic_reduce(r)
        if not r:
            continue
        key = _cyclic_key(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def _elimination_candidates(relators: list[Word]):
    for ri, r in enumerate(relators):
        counts: dict[int, int] = {}
        for l in r.letters:
            counts[l.gen] = counts.get(l.gen, 0) + 1
        for gen, cnt in counts.items():
            if cnt != 1:
                continue
            letters = r.letters
            pos = next(i for i, l in enumerate(letters) if l.gen == gen)
            rotated = letters[pos:] + letters[:pos]
            rest = Word(rotated[1:])
            # g^s * rest = 1
            replacement = invert(rest) if rotated[0].sign == 1 else rest
            yield gen, ri, replacement


def tietze_simplify(p: Presentation, max_rounds: int = 100) -> Presentation:
    """Greedy Tietze simplification.

    Each round removes trivial and duplicate relators, then eliminates the
    single generator whose substitution gives the shortest presentation,
    provided the total relator length does not grow.
    """
    gens = list(p.generators)
    relators = _tidy_relators(p.relators)
    for _ in range(max_rounds):
        current = sum(len(r) for r in relators)
        best = None
        for gen, ri, replacement in _elimination_candidates(relators):
            new_rels = _tidy_relators(
                _substitute(r, gen, replacement) for j, r in enumerate(relators) if j != ri
            )
            total = sum(len(r) for r in new_rels)
            key = (total, gen, ri)
            if total <= current and (best is None or key < best[0]):
                best = (key, gen, new_rels)
        if best is None:
            break
        _, gen, relators = best
        del gens[gen]
    return Presentation(tuple(gens), tuple(relators))
