import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_word
from lcsverify.errors import InputError, PrecisionError
from lcsverify.fbc import FreeAutomorphism
from lcsverify.lcsengine import hall_word, witness_report, witness_word
from lcsverify.liemod import hall_basis, tensor_vector, witt_dimension
from lcsverify.magnus import (
    AtLeast,
    SubstitutionMap,
    TruncSeries,
    commutator,
    expand,
    format_series,
    is_in_gamma,
    substitute,
    weight,
)
from lcsverify.words import Word, commutator as wcomm, gen, reduce

x, y = gen(0), gen(1)
NAMES = ["X", "Y"]

words = st.lists(st.tuples(st.integers(0, 1), st.integers(-3, 3)), max_size=8).map(reduce)


def test_generator_expansions():
    assert format_series(expand(x, 2, 3), NAMES) == "1 + X"
    assert format_series(expand(gen(0, -1), 2, 4), NAMES) == "1 - X + X*X - X*X*X + X*X*X*X"
    assert format_series(expand(gen(1, 3), 2, 4), NAMES) == "1 + 3*Y + 3*Y*Y + Y*Y*Y"
    assert expand(Word(()), 2, 3).is_one()


def test_commutator_expansion():
    s = expand(wcomm(x, y), 2, 2)
    assert format_series(s, NAMES) == "1 + X*Y - Y*X"
    assert weight(wcomm(x, y), 2) == 2


def test_block_sizes():
    s = expand(x, 2, 7)
    assert [b.size for b in s.blocks] == [2**d for d in range(8)]
    assert sum(b.size for b in s.blocks[1:]) == 254
    assert s.flat().size == 255


def test_multiplicative_random(rng):
    for _ in range(1000):
        cap = rng.randint(1, 6)
        u, v = random_word(rng), random_word(rng)
        assert expand(u * v, 2, cap) == expand(u, 2, cap) * expand(v, 2, cap)


@settings(max_examples=60, deadline=None)
@given(words, words)
def test_multiplicative_property(u, v):
    assert expand(u * v, 2, 5) == expand(u, 2, 5) * expand(v, 2, 5)


def test_inverse_and_powers(rng):
    for _ in range(150):
        w = random_word(rng)
        s = expand(w, 2, 6)
        assert (s * s.inverse()).is_one()
        assert s.inverse() == expand(w.inverse(), 2, 6)
        n = rng.randint(-9, 9)
        assert s**n == expand(w**n, 2, 6)
        assert s.scale(-1) ** 3 == (s**3).scale(-1)


def test_non_unit_series():
    two = TruncSeries.one(2, 3).scale(2)
    with pytest.raises(InputError):
        two.inverse()
    assert (two**3).blocks[0][0] == 8


def test_rank_or_cap_mismatch():
    with pytest.raises(InputError):
        expand(x, 2, 3) * expand(x, 2, 4)
    with pytest.raises(InputError):
        expand(gen(2), 2, 3)
    with pytest.raises(InputError):
        expand(x, 2, 0)


def test_commutator_weight_is_superadditive(rng):
    for _ in range(200):
        u, v = random_word(rng, length=6), random_word(rng, length=6)
        wc = weight(wcomm(u, v), 2, 6)
        wu, wv = weight(u, 2, 6), weight(v, 2, 6)
        bound = (wu.bound if isinstance(wu, AtLeast) else wu) + (wv.bound if isinstance(wv, AtLeast) else wv)
        assert wc >= min(bound, 7)


def test_series_commutator_matches_words(rng):
    for _ in range(100):
        u, v = random_word(rng, length=6), random_word(rng, length=6)
        assert commutator(expand(u, 2, 5), expand(v, 2, 5)) == expand(wcomm(u, v), 2, 5)


def test_gamma_membership_and_precision():
    c3 = wcomm(wcomm(y, x), x)
    assert is_in_gamma(c3, 3, 2, cap=4)
    assert not is_in_gamma(c3, 4, 2, cap=4)
    with pytest.raises(PrecisionError):
        is_in_gamma(c3, 6, 2, cap=4)
    assert weight(Word(()), 2, 4) == AtLeast(5)
    with pytest.raises(PrecisionError):
        expand(x, 2, 3).coeff((0, 0, 0, 0))


def test_substitution_is_functorial(rng):
    phi = FreeAutomorphism.from_images([y, x * y**3])
    phi_map = SubstitutionMap.from_words(phi.images, 5)
    back = SubstitutionMap.from_words(phi.inverse_images, 5)
    for _ in range(100):
        w = random_word(rng, length=8)
        s = expand(w, 2, 5)
        assert substitute(s, phi) == expand(w.substitute(phi.images), 2, 5)
        assert back(phi_map(s)) == s


def test_substitution_rejects_constant_terms():
    with pytest.raises(InputError):
        SubstitutionMap([expand(x, 2, 3), expand(y, 2, 3)])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_basic_commutators_lead_with_lie_brackets(n):
    basis = hall_basis(2, n)
    assert len(basis) == witt_dimension(2, n)
    rows = []
    for h in basis:
        s = expand(hall_word(h.tree), 2, n)
        assert s.lowest_degree() == n
        assert np.array_equal(s.blocks[n], tensor_vector(h.tree, 2))
        rows.append([int(c) for c in s.blocks[n]])
    assert np.linalg.matrix_rank(np.array(rows, dtype=float)) == len(basis)


def test_witness_weights():
    rep = witness_report(4)
    assert rep["passed"]
    assert [r["weight"] for r in rep["rows"]] == [3, 5, 7, 9, 11]
    for k in range(5):
        assert weight(witness_word(k), 2, 2 * k + 3) == 2 * k + 3
    with pytest.raises(PrecisionError):
        witness_report(4, cap=10)


def test_phi_on_commutator_expansion():
    phi = FreeAutomorphism.from_images([y, x * y**3])
    assert substitute(expand(wcomm(x, y), 2, 4), phi) == expand(wcomm(y, x * y**3), 2, 4)
