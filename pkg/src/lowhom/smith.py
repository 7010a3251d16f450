"""Exact Smith normal form over the integers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .presentation import Presentation
from .words import exponent_vector


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a, b = self.to_rows(), other.to_rows()
        out = [[sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
               for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)


@dataclass(frozen=True)
class SnfResult:
    """``left @ m @ right`` is diagonal with entries ``diagonal`` (then zeros)."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def relation_matrix(p: Presentation) -> IntMatrix:
    """One row per relator, one column per generator (exponent sums)."""
    return IntMatrix.from_rows([exponent_vector(r, p.n_gens) for r in p.relators], p.n_gens)


def smith_normal_form(m: IntMatrix) -> SnfResult:
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    left = [[int(i == j) for j in range(nr)] for i in range(nr)]
    right = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in right:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = abs(a[i][j])
                if x and (pivot is None or x < pivot[0]):
                    pivot = (x, i, j)
        if pivot is None:
            break
        _, pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            dirty = False
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if not dirty:
                # row and column cleared; enforce divisibility on the rest
                bad = next(
                    (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(t, bad, 1)
                dirty = True
            # move the smallest nonzero of row t / column t into the pivot slot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, nr):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, nc):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            swap_rows(t, best[1])
            swap_cols(t, best[2])
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        t += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SnfResult(diag, IntMatrix.from_rows(left, nr), IntMatrix.from_rows(right, nc))


def invariants_from_diagonal(diagonal: Sequence[int], n_cols: int) -> list[int]:
    """Invariant factors of the cokernel: torsion ascending, then one 0 per free summand."""
    torsion = sorted(d for d in diagonal if d > 1)
    rank = sum(1 for d in diagonal if d)
    return torsion + [0] * (n_cols - rank)


def abelian_invariants(p: Presentation) -> list[int]:
    snf = smith_normal_form(relation_matrix(p))
    return invariants_from_diagonal(snf.diagonal, p.n_gens)


def in_row_lattice(vector: Sequence[int], m: IntMatrix) -> bool:
    """Is ``vector`` an integer combination of the rows of ``m``?"""
    if len(vector) != m.cols:
        raise ValueError("vector length does not match column count")
    if m.rows == 0:
        return not any(vector)
    # x @ M = v  <=>  (x @ L^-1) @ D = v @ R  with D = L M R
    snf = smith_normal_form(m)
    r = snf.right.to_rows()
    w = [sum(vector[i] * r[i][j] for i in range(m.cols)) for j in range(m.cols)]
    for j, wj in enumerate(w):
        d = snf.diagonal[j] if j < len(snf.diagonal) else 0
        if d == 0:
            if wj:
                return False
        elif wj % d:
            return False
    return True
