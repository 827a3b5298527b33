import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy

from lcsverify.errors import InputError, ResourceLimitError
from lcsverify.latmod import (
    HOLDS,
    VIOLATION,
    char_poly,
    companion,
    compound,
    det,
    exterior_power,
    find_unit_invariant_sublattice,
    hnf_rows,
    identity,
    intmat,
    invariant_factors,
    is_unit_invariant,
    kron_char_poly,
    kron_power,
    lemma2_check_exterior,
    mapping_torus_homology,
    norm_report,
    norm_sequences,
    paper_matrix,
    poly_eval_matrix,
    smith_normal_form,
    stable_image_chain,
    structured_product_check,
)
from lcsverify.latmod.matrix import lattice_contains, solve_rational, sublattice_index, zeros

U = paper_matrix()
I2 = identity(2)
GOLDEN = companion([1, -3, 1])  # x^2 - 3x + 1, eigenvalue pair with product 1
X = sympy.Symbol("x")


def rand_matrix(rng, n, lo=-4, hi=4):
    return intmat([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def test_char_poly_examples():
    assert char_poly(U) == [-1, -3, 1]
    assert char_poly(I2) == [1, -2, 1]
    k = char_poly(kron_power(U, 2))
    assert len(k) == 5 and k[0] == 1
    with pytest.raises(InputError):
        char_poly(intmat([[1, 2, 3]]))


def test_char_poly_against_sympy_and_cayley_hamilton():
    rng = random.Random(3)
    for n in range(2, 6):
        for _ in range(5):
            a = rand_matrix(rng, n)
            p = char_poly(a)
            want = sympy.Matrix(a.tolist()).charpoly(X).all_coeffs()
            assert p == [int(c) for c in reversed(want)]
            assert not np.any(poly_eval_matrix(p, a))
            assert det(a) == int(sympy.Matrix(a.tolist()).det())


def test_kron_char_poly_matches_determinant_route():
    for m in range(1, 5):
        assert kron_char_poly(U, m) == char_poly(kron_power(U, m))


def test_smith_normal_form_examples():
    assert smith_normal_form(U - I2)[0] == [1, 3]
    assert invariant_factors(zeros(2, 3)) == [0, 0]
    assert invariant_factors(intmat([[-2]])) == [2]


def test_smith_transforms():
    rng = random.Random(5)
    for _ in range(30):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        a = intmat([[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)])
        d, p, q = smith_normal_form(a)
        prod = p.dot(a).dot(q)
        assert abs(det(p)) == 1 and abs(det(q)) == 1
        diag = [prod[i, i] for i in range(min(r, c))]
        assert not np.any(prod - np.diag(diag) if r == c else 0)
        assert [abs(v) for v in diag] == d
        for x, y in zip(d, d[1:]):
            assert (y == 0) or (x != 0 and y % x == 0)


def test_exterior_power_examples():
    assert exterior_power(U - I2, 2).tolist() == [[-3]]
    b = intmat([[1, 2], [3, 4]])
    assert np.array_equal(exterior_power(b, 1), b)
    assert np.array_equal(exterior_power(identity(3), 2), identity(3))
    with pytest.raises(ResourceLimitError):
        exterior_power(identity(12), 6, size_limit=100)


def test_compound_multiplicative():
    rng = random.Random(9)
    for n in range(2, 5):
        for k in range(1, n + 1):
            a, b = rand_matrix(rng, n), rand_matrix(rng, n)
            assert np.array_equal(compound(a.dot(b), k), compound(a, k).dot(compound(b, k)))
            assert compound(a, k).shape == (comb(n, k), comb(n, k))


def test_lemma2_examples():
    v = lemma2_check_exterior(U - I2)
    assert v.status == HOLDS and v.holds
    assert v.details["dets"][1] == [-3, -1]
    bad = lemma2_check_exterior(GOLDEN)
    assert bad.status == VIOLATION
    assert (bad.witness["k"], bad.witness["sign"]) == (2, 1)
    assert lemma2_check_exterior(zeros(3, 3)).status == HOLDS


def test_norm_sequences():
    seq = norm_sequences(40)
    assert seq.t[:6] == [2, 3, 11, 36, 119, 393]
    assert (seq.M[1], seq.N[1]) == (-3, 3)
    assert (seq.M[2], seq.N[3]) == (-9, 36)
    for s in range(1, 41):
        assert seq.M[s] == (-1) ** s + 1 - seq.t[s]
        assert seq.N[s] == (-1) ** s + 1 + seq.t[s]
        assert seq.t[s] == int(np.trace(np.linalg.matrix_power(U, s)))
        assert seq.M[s] % 3 == 0 and abs(seq.M[s]) >= 3 and abs(seq.N[s]) >= 3
        if s % 2:
            assert seq.N[s] % 3 == 0
    rep = norm_report(seq)
    assert rep and all(v for k, v in rep.items() if isinstance(v, bool))


def test_structured_route_agrees_with_exterior():
    for m in range(1, 4):
        s = structured_product_check(m)
        k = kron_power(U, m)
        e = lemma2_check_exterior(k - identity(k.shape[0]))
        assert s.status == e.status == HOLDS
    for m in range(4, 13):
        assert structured_product_check(m).status == HOLDS
    with pytest.raises(InputError):
        structured_product_check(2, base=intmat([[1, 0], [0, 2]]))
    # the structured route is inconclusive for the golden matrix and escalates
    g = structured_product_check(1, base=GOLDEN)
    assert g.details.get("escalated") and g.status == VIOLATION


def test_stable_image_chain():
    ch = stable_image_chain(U - I2, 12)
    assert ch["index"] == [3] * 12
    assert ch["covolume"][-1] == 3**12
    assert ch["candidate_unit_part"] is None and not ch["reaches_zero"]
    diag = stable_image_chain(intmat([[1, 0], [0, 2]]), 6)
    assert diag["candidate_unit_part"] == [[1, 0]]
    nil = stable_image_chain(intmat([[0, 1, 0], [0, 0, 1], [0, 0, 0]]), 4)
    assert nil["reaches_zero"]


def test_unit_invariant_sublattice():
    full = find_unit_invariant_sublattice(GOLDEN, 2)
    assert full is not None and hnf_rows(full.basis, 2) == [[1, 0], [0, 1]]
    assert is_unit_invariant(GOLDEN, full.basis)
    assert find_unit_invariant_sublattice(U - I2, 2) is None
    d = find_unit_invariant_sublattice(intmat([[1, 0], [0, 2]]), 2)
    assert d.basis == [[1, 0]] and is_unit_invariant(intmat([[1, 0], [0, 2]]), d.basis)


def test_mapping_torus_homology():
    h = mapping_torus_homology(U)
    assert (h.h1, h.coker_piece, h.ker_piece, h.note) == ([0, 3], [2], [], None)
    t = mapping_torus_homology(I2)
    assert t.h1 == [0, 0, 0] and t.coker_piece == [0] and t.ker_piece == [0, 0] and t.note
    c = mapping_torus_homology(GOLDEN)
    assert c.h1 == [0] + invariant_factors(GOLDEN - I2)


def test_h_side_solve():
    b2 = (U - I2).dot(U - I2)
    assert b2.dot(np.array([5, -1], dtype=object)).tolist() == [9, 0]
    assert solve_rational(b2.T.tolist(), [9, 0]) == [Fraction(5), Fraction(-1)]
    for k in range(1, 6):
        bk = np.linalg.matrix_power(U - I2, k)
        img = hnf_rows(bk.T.tolist(), 2)
        assert lattice_contains(img, [3**k, 0])
        assert not lattice_contains(img, [3 ** (k - 1), 0])
        assert sublattice_index([[1, 0], [0, 1]], img) == 3**k
