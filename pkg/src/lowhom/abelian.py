"""First homology, first homology mod p, Tor dimension and p-primary rank."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import isprime

from .presentation import Presentation
from .smith import abelian_invariants


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool) or not isprime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    def __int__(self) -> int:
        return self.p


def as_field(k: "PrimeField | int") -> PrimeField:
    return k if isinstance(k, PrimeField) else PrimeField(int(k))


def padic_valuation(n: int, k: PrimeField | int) -> int:
    p = as_field(k).p
    if n <= 0:
        raise ValueError(f"p-adic valuation needs a positive integer, got {n}")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def first_homology(p: Presentation) -> list[int]:
    """Abelian invariants of the group (0 for each infinite cyclic factor)."""
    return abelian_invariants(p)


def first_homology_mod_p(p: Presentation, k: PrimeField | int) -> int:
    # zeros count: each Z summand gives one dimension
    q = as_field(k).p
    return sum(1 for x in first_homology(p) if x % q == 0)


def tor_dimension(p: Presentation, k: PrimeField | int) -> int:
    q = as_field(k).p
    return sum(1 for x in first_homology(p) if x != 0 and x % q == 0)


def prime_primary_rank(p: Presentation, k: PrimeField | int) -> int:
    """Exponent e with p^e the order of the p-primary part of the abelianization."""
    k = as_field(k)
    return sum(padic_valuation(x, k) for x in first_homology(p) if x != 0 and x % k.p == 0)
