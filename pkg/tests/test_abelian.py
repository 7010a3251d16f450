import pytest
from hypothesis import given, strategies as st

from conftest import words
from lowhom.abelian import (
    PrimeField,
    first_homology,
    first_homology_mod_p,
    padic_valuation,
    prime_primary_rank,
    tor_dimension,
)
from lowhom.fixtures import load_fixture
from lowhom.presentation import Presentation, parse_presentation
from lowhom.words import IDENTITY

S5 = load_fixture("sigma5")


def pres(text):
    return parse_presentation(text)


def test_first_homology_examples():
    assert first_homology(S5) == [2]
    assert first_homology(Presentation(("a", "b"))) == [0, 0]


@pytest.mark.parametrize("text, p, h1p, tor, prank", [
    ("generators: a\nrelators: a^4", 2, 1, 1, 2),
    ("generators: a\nrelators: a^4", 3, 0, 0, 0),
    ("generators: a\nrelators: a^12", 2, 1, 1, 2),
    ("generators: a\nrelators: a^12", 3, 1, 1, 1),
    ("generators: a, b\nrelators:", 2, 2, 0, 0),
    ("generators: a, b\nrelators:", 5, 2, 0, 0),
    ("generators: a, b, c\nrelators: a^2; b^4", 2, 3, 2, 3),
])
def test_mod_p_tor_prank(text, p, h1p, tor, prank):
    q = pres(text)
    assert first_homology_mod_p(q, p) == h1p
    assert tor_dimension(q, PrimeField(p)) == tor
    assert prime_primary_rank(q, p) == prank


def test_sigma5_examples():
    assert first_homology_mod_p(S5, 2) == 1
    assert tor_dimension(S5, 2) == 1
    assert prime_primary_rank(S5, 2) == 1
    assert first_homology_mod_p(S5, 3) == 0


@pytest.mark.parametrize("n, p, v", [(8, 2, 3), (7, 2, 0), (12, 2, 2), (1, 3, 0), (3**20, 3, 20)])
def test_padic_valuation(n, p, v):
    assert padic_valuation(n, PrimeField(p)) == v


@pytest.mark.parametrize("n", [0, -4])
def test_padic_valuation_rejects_nonpositive(n):
    with pytest.raises(ValueError):
        padic_valuation(n, 2)


@pytest.mark.parametrize("p", [0, 1, 4, 9, -3, 2.0, True])
def test_prime_field_rejects_non_primes(p):
    with pytest.raises(ValueError):
        PrimeField(p)


def test_prime_field_accepts_primes():
    assert int(PrimeField(7919)) == 7919


def presentations():
    return st.integers(1, 3).flatmap(
        lambda n: st.lists(words(rank=n, max_len=10), max_size=4).map(
            lambda rels: Presentation(tuple("abc"[:n]), tuple(rels))))


primes = st.sampled_from([2, 3, 5, 7])


@given(presentations(), primes)
def test_dimension_count(p, k):
    zeros = sum(1 for x in first_homology(p) if x == 0)
    assert first_homology_mod_p(p, k) == tor_dimension(p, k) + zeros


@given(presentations(), primes)
def test_prank_bounds_tor(p, k):
    tor, prank = tor_dimension(p, k), prime_primary_rank(p, k)
    assert prank >= tor
    divisible = [x for x in first_homology(p) if x and x % k == 0]
    assert (prank == tor) == all(padic_valuation(x, k) == 1 for x in divisible)


@given(presentations(), primes, st.randoms(use_true_random=False))
def test_invariant_under_reordering_and_empty_relator(p, k, rnd):
    rels = list(p.relators)
    rnd.shuffle(rels)
    for q in (p.with_relators(rels), p.with_relators(rels + [IDENTITY])):
        assert first_homology(q) == first_homology(p)
        assert first_homology_mod_p(q, k) == first_homology_mod_p(p, k)
        assert tor_dimension(q, k) == tor_dimension(p, k)
        assert prime_primary_rank(q, k) == prime_primary_rank(p, k)


@given(presentations(), primes)
def test_prank_is_log_of_p_part_order(p, k):
    # independent route: the p-part of the product of torsion invariants
    order = 1
    for x in first_homology(p):
        if x:
            order *= x
    e = 0
    while order % k == 0:
        order //= k
        e += 1
    assert prime_primary_rank(p, k) == e
