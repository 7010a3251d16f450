"""Free group words.

A word is a tuple of letters ``(gen, sign)``, kept freely reduced at all
times. Generators are plain indices; names live on the presentation.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence


class Letter(NamedTuple):
    gen: int
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)


def _reduce_letters(letters: Iterable[Sequence[int]]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign!r}")
        if gen < 0:
            raise ValueError(f"generator index must be nonnegative, got {gen!r}")
        if out and out[-1].gen == gen and out[-1].sign == -sign:
            out.pop()
        else:
            out.append(Letter(gen, sign))
    return tuple(out)


class Word:
    """Freely reduced element of a free group.

    Construction always reduces, so two words are equal iff they are the
    same group element.

    >>> a, b = Word.gen(0), Word.gen(1)
    >>> (a * b * b.inverse()) == a
    True
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Sequence[int]] = ()):
        self.letters = _reduce_letters(letters)
        self._hash = hash(self.letters)

    @classmethod
    def gen(cls, index: int, sign: int = 1) -> "Word":
        return cls(((index, sign),))

    @classmethod
    def from_ints(cls, ints: Iterable[int]) -> "Word":
        """Build from signed 1-based integers: 1 is g0, -1 is g0^-1, 2 is g1, ..."""
        letters = []
        for x in ints:
            if x == 0:
                raise ValueError("0 is not a letter")
            letters.append((abs(x) - 1, 1 if x > 0 else -1))
        return cls(letters)

    def to_ints(self) -> tuple[int, ...]:
        return tuple((l.gen + 1) * l.sign for l in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        return self.letters < other.letters

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Word({list(self.to_ints())})"

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def inverse(self) -> "Word":
        return invert(self)

    def generators(self) -> set[int]:
        return {l.gen for l in self.letters}


IDENTITY = Word()


def free_reduce(w: Word | Iterable[Sequence[int]]) -> Word:
    if isinstance(w, Word):
        return w
    return Word(w)


def multiply(u: Word, v: Word) -> Word:
    # only the junction can cancel
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[-1 - i].gen == b[i].gen and a[-1 - i].sign == -b[i].sign:
        i += 1
    w = Word.__new__(Word)
    w.letters = a[: len(a) - i] + b[i:]
    w._hash = hash(w.letters)
    return w


def invert(w: Word) -> Word:
    out = Word.__new__(Word)
    out.letters = tuple(Letter(l.gen, -l.sign) for l in reversed(w.letters))
    out._hash = hash(out.letters)
    return out


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return invert(x) * invert(y) * x * y


def conjugate(x: Word, z: Word) -> Word:
    """``x^z = z^-1 x z``."""
    return invert(z) * x * z


def power(w: Word, n: int, max_length: int | None = None) -> Word:
    if n < 0:
        w, n = invert(w), -n
    if n == 0 or not w:
        return IDENTITY
    # w = c^-1 core c with core cyclically reduced, so w^n = c^-1 core^n c
    letters = w.letters
    k = 0
    while k < len(letters) // 2 and letters[k].gen == letters[-1 - k].gen \
            and letters[k].sign == -letters[-1 - k].sign:
        k += 1
    head, core, tail = letters[:k], letters[k: len(letters) - k], letters[len(letters) - k:]
    total = 2 * k + len(core) * n
    if max_length is not None and total > max_length:
        raise OverflowError(f"word length {total} exceeds cap {max_length}")
    out = Word.__new__(Word)
    out.letters = head + core * n + tail
    out._hash = hash(out.letters)
    return out


def exponent_vector(w: Word, n_gens: int) -> list[int]:
    vec = [0] * n_gens
    for gen, sign in w.letters:
        if gen >= n_gens:
            raise ValueError(f"generator index {gen} out of range for {n_gens} generators")
        vec[gen] += sign
    return vec


def cyclic_reduce(w: Word) -> Word:
    """Strip matching inverse letters from both ends (a conjugate of ``w``)."""
    letters = w.letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i].gen == letters[j - 1].gen \
            and letters[i].sign == -letters[j - 1].sign:
        i += 1
        j -= 1
    if i == 0:
        return w
    return Word(letters[i:j])


def rotations(w: Word) -> Iterable[Word]:
    """Cyclic permutations of a cyclically reduced word."""
    letters = w.letters
    for i in range(len(letters)):
        yield Word(letters[i:] + letters[:i])
