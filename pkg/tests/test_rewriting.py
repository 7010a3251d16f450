import random
import threading

import pytest
from hypothesis import given, settings

from conftest import words
from lowhom.fixtures import load_fixture
from lowhom.presentation import Presentation, parse_presentation
from lowhom.rewriting import (
    KbConfig,
    RewritingSystem,
    Status,
    build_monoid_presentation,
    complete,
    complete_presentation,
    shortlex_key,
    str_to_word,
    word_to_str,
)
from lowhom.smith import in_row_lattice, relation_matrix
from lowhom.words import IDENTITY, Word, exponent_vector, power

a, b = Word.gen(0), Word.gen(1)
A = a.inverse()

SIGMA3 = "generators: a, b\nrelators: a^2; b^2; (a b)^3"
V4 = "generators: a, b\nrelators: a^2; b^2; [a, b]"


def system(name_or_text):
    p = load_fixture(name_or_text) if "\n" not in name_or_text else parse_presentation(name_or_text)
    return p, complete_presentation(p)


def test_alphabet_encoding_ranks_inverse_after_generator():
    assert [shortlex_key(word_to_str(w)) for w in (a, A, b, b.inverse())] == sorted(
        shortlex_key(word_to_str(w)) for w in (a, A, b, b.inverse()))
    w = Word.from_ints([1, -2, 3, -1])
    assert str_to_word(word_to_str(w)) == w


def test_monoid_presentation_examples():
    aa, AA = word_to_str(a), word_to_str(A)
    free = build_monoid_presentation(Presentation(("a",)))
    assert free == [(aa + AA, ""), (AA + aa, "")]
    z4 = build_monoid_presentation(parse_presentation("generators: a\nrelators: a^4"))
    assert z4 == free + [(aa * 4, "")]


def test_trivial_relator_collapses_generator():
    _, rs = system("generators: a\nrelators: a")
    assert rs.is_confluent
    assert rs.reduce(a) == IDENTITY
    assert rs.count_normal_forms(10) == 1


def test_z4():
    _, rs = system("z4")
    assert rs.is_confluent
    # a^-1 and a^3 are the same element; shortlex picks the shorter spelling
    assert rs.reduce(power(a, 3)) == rs.reduce(A) == A
    assert rs.rules[word_to_str(power(a, 3))] == word_to_str(A)
    assert rs.enumerate_normal_forms(100) == [IDENTITY, a, A, power(a, 2)]
    assert rs.reduce(IDENTITY) == IDENTITY


@pytest.mark.parametrize("text, order", [
    ("z4", 4), (SIGMA3, 6), ("sigma5", 120), (V4, 4), ("z6", 6), ("z4_redundant", 4),
])
def test_normal_form_counts(text, order):
    _, rs = system(text)
    assert rs.status is Status.CONFLUENT
    assert rs.count_normal_forms(1000) == order
    assert rs.check_confluence()


def test_sigma5_kills_relators():
    p, rs = system("sigma5")
    for r in p.relators:
        assert rs.reduce(r) == IDENTITY


def perm_mul(x, y):
    # apply x, then y
    return tuple(y[i] for i in x)


def perm_of(w, images):
    n = len(next(iter(images.values())))
    out = tuple(range(n))
    for g, s in w.letters:
        img = images[g]
        if s < 0:
            inv = [0] * n
            for i, j in enumerate(img):
                inv[j] = i
            img = tuple(inv)
        out = perm_mul(out, img)
    return out


# a -> (0 1 2 3 4), b -> (0 1); a faithful image of the sigma5 fixture
S5_IMAGES = {0: (1, 2, 3, 4, 0), 1: (1, 0, 2, 3, 4)}


def test_sigma5_normal_forms_against_permutation_oracle():
    p, rs = system("sigma5")
    e = tuple(range(5))
    assert all(perm_of(r, S5_IMAGES) == e for r in p.relators)
    nfs = rs.enumerate_normal_forms(1000)
    assert len({perm_of(w, S5_IMAGES) for w in nfs}) == 120
    for lhs, rhs in rs.rules.items():
        assert perm_of(str_to_word(lhs), S5_IMAGES) == perm_of(str_to_word(rhs), S5_IMAGES)


@given(words(rank=2, max_len=20), words(rank=2, max_len=20))
@settings(max_examples=300)
def test_sigma5_reduce_agrees_with_permutations(u, v):
    _, rs = SIGMA5
    nu, nv = rs.reduce(u), rs.reduce(v)
    assert perm_of(nu, S5_IMAGES) == perm_of(u, S5_IMAGES)
    assert rs.reduce(u * v) == rs.reduce(nu * nv)
    assert rs.reduce(nu) == nu
    assert (nu == nv) == (perm_of(u, S5_IMAGES) == perm_of(v, S5_IMAGES))


SIGMA5 = system("sigma5")


@pytest.mark.parametrize("text", ["z4", SIGMA3, "sigma5", V4, "z2xz2", "zxz"])
def test_rules_are_abelianized_consequences(text):
    p, rs = system(text)
    m = relation_matrix(p)
    for lhs, rhs in rs.rules.items():
        assert shortlex_key(lhs) > shortlex_key(rhs)
        diff = [x - y for x, y in zip(exponent_vector(str_to_word(lhs), p.n_gens),
                                      exponent_vector(str_to_word(rhs), p.n_gens))]
        assert in_row_lattice(diff, m)


@pytest.mark.parametrize("text", ["sigma5", SIGMA3, "zxz"])
def test_rules_are_interreduced(text):
    _, rs = system(text)
    for lhs, rhs in rs.rules.items():
        others = RewritingSystem(rs.n_gens, [(l, r) for l, r in rs.rules.items() if l != lhs])
        assert not others.is_reducible(lhs)
        assert not rs.is_reducible(rhs)


def test_free_group_is_infinite():
    _, rs = system("free1")
    assert rs.is_confluent
    assert rs.enumerate_normal_forms(10) is None
    _, rs = system("zxz")
    assert rs.is_confluent
    assert rs.count_normal_forms(50) is None
    assert rs.reduce(b * a * b.inverse()) == a


def test_reduce_rejects_foreign_generator():
    _, rs = system("z4")
    with pytest.raises(ValueError):
        rs.reduce(b)


def test_caps_are_statuses_not_errors():
    p = load_fixture("sl2_3")
    rs = complete_presentation(p, KbConfig(max_equations=50))
    assert rs.status is Status.CAPPED
    rs = complete_presentation(p, KbConfig(max_seconds=0.05))
    assert rs.status is Status.TIMED_OUT
    rs = complete_presentation(load_fixture("sigma5"), KbConfig(max_rule_length=3))
    assert rs.status is Status.CAPPED


def test_capped_system_is_still_sound():
    p = load_fixture("sl2_3")
    rs = complete_presentation(p, KbConfig(max_equations=200))
    m = relation_matrix(p)
    for lhs, rhs in rs.rules.items():
        diff = [x - y for x, y in zip(exponent_vector(str_to_word(lhs), p.n_gens),
                                      exponent_vector(str_to_word(rhs), p.n_gens))]
        assert in_row_lattice(diff, m)
    for r in p.relators:
        # relators need not reduce to 1, but reduction must stay irreducible and shorter
        red = rs.reduce(r)
        assert len(red) <= len(r) and rs.reduce(red) == red


def test_cancel_and_progress():
    calls = []
    stop = threading.Event()
    stop.set()
    rs = complete_presentation(load_fixture("sigma5"), cancel=stop.is_set,
                               progress=lambda n, k: calls.append((n, k)))
    assert rs.status is Status.TIMED_OUT
    calls.clear()
    rs = complete_presentation(load_fixture("sigma5"), KbConfig(tidy_interval=5),
                               progress=lambda n, k: calls.append((n, k)))
    assert rs.is_confluent
    assert len(calls) >= 2
    assert calls[-1][1] == len(rs)


def test_tidy_interval_does_not_change_result():
    p = load_fixture("sigma5")
    systems = [complete_presentation(p, KbConfig(tidy_interval=t)) for t in (1, 7, 100, 10**6)]
    assert all(rs.is_confluent for rs in systems)
    # a confluent interreduced shortlex system is unique
    assert all(rs.rules == systems[0].rules for rs in systems)


def test_completion_is_deterministic():
    p = load_fixture("sigma5")
    assert complete_presentation(p).rules == complete_presentation(p).rules


def test_dump_load_round_trip():
    p, rs = system("sigma5")
    text = rs.dump(p.generators, key="abc")
    back, header = RewritingSystem.load(text)
    assert back.rules == rs.rules
    assert back.status is Status.CONFLUENT
    assert header["key"] == "abc"
    assert back.dump(p.generators, key="abc") == text


def test_load_rejects_malformed():
    with pytest.raises(ValueError):
        RewritingSystem.load("a -> 1\n")
    with pytest.raises(ValueError):
        RewritingSystem.load("# generators: a\na a\n")
    with pytest.raises(ValueError):
        RewritingSystem.load("# generators: a\n1 -> a\n")


def test_add_rule_enforces_order():
    rs = RewritingSystem(1)
    with pytest.raises(ValueError):
        rs.add_rule("", word_to_str(a))


def test_kb_config_validation():
    with pytest.raises(ValueError):
        KbConfig(max_equations=0)
    with pytest.raises(ValueError):
        KbConfig(tidy_interval=0)


def test_complete_on_raw_equations():
    # z/3 given only as a monoid: a^3 = 1, no inverse letters used
    rs = complete([(chr(0) * 3, "")], 1)
    assert rs.is_confluent
    assert rs.rewrite(chr(0) * 4) == chr(0)


def test_random_finite_quotients_match_permutation_oracle():
    # random relators that hold in S5, so each quotient surjects onto it
    rng = random.Random(3)
    e = tuple(range(5))
    base = list(load_fixture("sigma5").relators)
    for _ in range(5):
        extra = []
        while len(extra) < 2:
            w = Word([(rng.randrange(2), rng.choice([1, -1])) for _ in range(rng.randint(4, 14))])
            if w and perm_of(w, S5_IMAGES) == e:
                extra.append(w)
        p = Presentation(("a", "b"), tuple(base + extra))
        rs = complete_presentation(p)
        assert rs.is_confluent and rs.count_normal_forms(1000) == 120
