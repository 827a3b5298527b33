import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_word
from lcsverify.errors import InputError
from lcsverify.words import (
    IDENTITY,
    Alphabet,
    Word,
    commutator,
    conjugate,
    cyclic_reduce,
    format_word,
    gen,
    is_proper_power,
    left_normed,
    parse_word,
    reduce,
)

x, y = gen(0), gen(1)
XY = Alphabet(("x", "y"))


def flat_reduce(letters):
    """Stack-based reduction of a letter list (index, ±1); independent of run merging."""
    out = []
    for g, s in letters:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return out


def flat(w: Word):
    return [(g, 1 if e > 0 else -1) for g, e in w.letters for _ in range(abs(e))]


runs = st.lists(st.tuples(st.integers(0, 2), st.integers(-4, 4).filter(bool)), max_size=20)


def test_reduce_examples():
    assert reduce([(0, 1), (0, -1), (1, 1)]) == y
    assert reduce([]) == IDENTITY
    assert reduce([(0, 2), (0, 3)]) == Word(((0, 5),))
    assert reduce([(0, 0), (1, 2)]) == Word(((1, 2),))


def test_reduce_rejects_bad_index():
    with pytest.raises(InputError):
        reduce([(2, 1)], rank=2)
    with pytest.raises(InputError):
        reduce([(-1, 1)])


@given(runs)
def test_reduce_idempotent_and_matches_flat_reduction(raw):
    w = reduce(raw)
    assert reduce(w.letters) == w
    letters = [(g, 1 if e > 0 else -1) for g, e in raw for _ in range(abs(e))]
    assert flat(w) == flat_reduce(letters)


def test_group_laws_on_random_words(rng):
    for _ in range(10_000):
        u = random_word(rng, length=50, max_exp=2)
        v = random_word(rng, length=50, max_exp=2)
        assert (u * u.inverse()).is_identity()
        assert commutator(u, v).inverse() == commutator(v, u)
        assert flat(u * v) == flat_reduce(flat(u) + flat(v))


def test_commutator_examples():
    assert commutator(x, x).is_identity()
    c = commutator(x, y)
    assert c == Word(((0, -1), (1, -1), (0, 1), (1, 1)))
    assert c.length == 4
    assert conjugate(x, y) == Word(((1, -1), (0, 1), (1, 1)))


def test_left_normed():
    w = left_normed([commutator(y, x), x])
    assert w == commutator(commutator(y, x), x)
    # (x^-1 y^-1 x y) x^-1 (y^-1 x^-1 y x) x: nothing cancels at the seams
    assert w.length == 10
    assert format_word(w, XY) == "x^-1*y^-1*x*y*x^-1*y^-1*x^-1*y*x^2"
    with pytest.raises(InputError):
        left_normed([x])


def test_huge_exponents_stay_run_length():
    w = x ** (3**40)
    assert w.letters == ((0, 3**40),)
    assert (w * x ** -(3**40)).is_identity()
    assert is_proper_power(w) == (x, 3**40)


def test_cyclic_reduce():
    assert cyclic_reduce(parse_word("y^-1 x y", XY)) == x
    assert cyclic_reduce(parse_word("x^2 y x^-1", XY)) == parse_word("x y", XY)
    assert cyclic_reduce(parse_word("x^-1 y x^3", XY)) == parse_word("y x^2", XY)


def test_proper_power_examples(group):
    assert is_proper_power(reduce([(0, 1), (1, 1)] * 3)) == (x * y, 3)
    assert is_proper_power(x) == (x, 1)
    rel = group.parse("b^-2 a b^2 b^-1 a^-3 b a^-1")
    assert is_proper_power(rel)[1] == 1
    with pytest.raises(InputError):
        is_proper_power(IDENTITY)


def brute_force_power(w: Word) -> int:
    letters = flat(cyclic_reduce(w))
    n = len(letters)
    for p in range(1, n + 1):
        if n % p == 0 and letters == letters[:p] * (n // p):
            return n // p
    raise AssertionError


def test_proper_power_against_divisor_scan():
    letters = [(0, 1), (0, -1), (1, 1), (1, -1)]
    count = 0
    for n in range(1, 13):
        seen = set()
        for combo in itertools.product(letters, repeat=n):
            w = reduce(combo)
            if w.is_identity() or w in seen:
                continue
            seen.add(w)
            if len(seen) > 400:
                break
            root, k = is_proper_power(w)
            assert k == brute_force_power(w)
            assert root**k == cyclic_reduce(w)
            count += 1
    assert count > 1000


@settings(max_examples=200)
@given(runs, st.integers(1, 5))
def test_proper_power_of_constructed_powers(raw, k):
    w = cyclic_reduce(reduce(raw))
    if w.is_identity():
        return
    root, j = is_proper_power(w**k)
    assert j % k == 0
    assert root**j == w**k


def test_parser_grammar():
    ab = Alphabet(("a", "b"))
    a, b = gen(0), gen(1)
    assert parse_word("1", ab).is_identity()
    assert parse_word("a^b", ab) == conjugate(a, b)
    assert parse_word("a^3^b", ab) == conjugate(a**3, b)
    assert parse_word("a^(b^2)", ab) == conjugate(a, b**2)
    assert parse_word("a^(-1) b", ab) == a.inverse() * b
    assert parse_word("ab", ab) == a * b
    assert parse_word("[a, b, a]", ab) == left_normed([a, b, a])
    assert parse_word("  [ a ,b ] ^2", ab) == commutator(a, b) ** 2
    with pytest.raises(InputError):
        parse_word("a + c", ab)
    with pytest.raises(InputError):
        parse_word("[a]", ab)


@given(runs)
def test_format_parse_roundtrip(raw):
    abc = Alphabet(("x", "y", "z"))
    w = reduce(raw)
    assert parse_word(format_word(w, abc), abc) == w


def test_alphabet_validation():
    with pytest.raises(InputError):
        Alphabet(())
    with pytest.raises(InputError):
        Alphabet(("x", "x"))
    assert XY.index("y") == 1
    with pytest.raises(InputError):
        XY.index("z")
