"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
with its wall-clock time; the lines are repeated in the terminal summary."""
import random
import resource
import time
from contextlib import contextmanager

import numpy as np

from conftest import ACCEPTANCE, random_word
from lcsverify.cli.config import load
from lcsverify.cli.runner import run
from lcsverify.fbc import PAPER_IDENTITIES, paper_group, relator
from lcsverify.latmod import (
    HOLDS,
    VIOLATION,
    companion,
    compound,
    exterior_power,
    find_unit_invariant_sublattice,
    hnf_rows,
    identity,
    intmat,
    is_unit_invariant,
    kron_power,
    lemma2_check_exterior,
    mapping_torus_homology,
    norm_report,
    norm_sequences,
    paper_matrix,
    smith_normal_form,
    structured_product_check,
)
from lcsverify.latmod.matrix import det, lattice_contains
from lcsverify.lcsengine import EngineConfig, build, gamma_omega_report, h_side_invariants, witness_report
from lcsverify.liemod import hall_basis, lie_power_matrix, witt_dimension
from lcsverify.magnus import expand
from lcsverify.words import commutator, cyclic_reduce, gen, is_proper_power

U = paper_matrix()
I2 = identity(2)
x, y = gen(0), gen(1)


@contextmanager
def criterion(n: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        line = f"criterion {n}: {'PASS' if ok and within else 'FAIL'} ({elapsed:.2f} s, limit {limit:g} s) {title}"
        ACCEPTANCE[n] = line
        print(line)
    assert within, f"criterion {n} took {elapsed:.2f} s, over {limit} s"


def test_criterion_01_identity_suite():
    with criterion(1, "identity suite", 1.0):
        g = paper_group()
        rep = g.identity_suite()
        assert len(rep.rows) == len(PAPER_IDENTITIES) == 6
        assert rep.passed and all(r["equal"] for r in rep.rows)


def test_criterion_02_module_condition():
    with criterion(2, "exterior condition on U - I", 1.0):
        b = U - I2
        assert lemma2_check_exterior(b).status == HOLDS
        assert exterior_power(b, 2).tolist() == [[-3]]


def test_criterion_03_norm_sequences():
    with criterion(3, "norm sequences up to 40", 1.0):
        seq = norm_sequences(40)
        assert (seq.M[1], seq.N[1]) == (-3, 3)
        for i in range(1, 41):
            assert seq.M[i] % 3 == 0 and abs(seq.M[i]) >= 3 and abs(seq.N[i]) >= 3
            if i % 2:
                assert seq.N[i] % 3 == 0
        rep = norm_report(seq)
        assert all(v for v in rep.values() if isinstance(v, bool))


def test_criterion_04_tensor_powers():
    with criterion(4, "tensor powers m = 1..12", 30.0):
        for m in range(1, 13):
            assert structured_product_check(m).status == HOLDS
        for m in range(1, 4):
            k = kron_power(U, m)
            assert lemma2_check_exterior(k - identity(k.shape[0])).status == HOLDS
        assert compound(kron_power(U, 3) - identity(8), 4).shape == (70, 70)


def test_criterion_05_lie_powers():
    with criterion(5, "Lie powers n = 1..8", 60.0):
        assert [witt_dimension(2, n) for n in range(1, 9)] == [2, 1, 2, 3, 6, 9, 18, 30]
        assert [len(hall_basis(2, n)) for n in range(1, 9)] == [2, 1, 2, 3, 6, 9, 18, 30]
        assert lie_power_matrix(U, 2).matrix.tolist() == [[-1]]
        for n in range(2, 9):
            lp = lie_power_matrix(U, n)
            if lp.dimension <= 12:
                assert lemma2_check_exterior(lp.matrix - identity(lp.dimension)).status == HOLDS
            else:
                # eigenvalues of L^n(U) lie among those of U^(x)n
                assert structured_product_check(n).status == HOLDS
        cfg = load(preset_name="paper")
        cfg.sections = ["lie"]
        rep = run(cfg)
        assert rep.verdict == "pass"


def test_criterion_06_homology():
    with criterion(6, "mapping torus and relator", 1.0):
        h = mapping_torus_homology(U)
        assert h.h1 == [0, 3] and h.coker_piece == [2] and h.ker_piece == []
        g = paper_group()
        root, e = is_proper_power(cyclic_reduce(relator(g)))
        assert e == 1


def test_criterion_07_lcs_engine():
    with criterion(7, "lower central series engine, class 7", 300.0):
        eng = build(EngineConfig(paper_group(), 7))
        assert eng.member(x**3, 2) and not eng.member(x, 2)
        b2 = (U - I2).dot(U - I2)
        assert b2.dot(np.array([5, -1], dtype=object)).tolist() == [9, 0]
        for k in range(1, 5):
            assert eng.member(x ** (3**k), k + 1)
            img = hnf_rows(np.linalg.matrix_power(U - I2, k).T.tolist(), 2)
            assert lattice_contains(img, [3**k, 0])
        assert smith_normal_form(U - I2)[0] == [1, 3]
        for n in range(2, 6):
            assert eng.graded_invariants(n) == h_side_invariants(U) == [3]
        assert all(eng.member(commutator(x, y), n) for n in range(2, 8))
        go = gamma_omega_report(eng)
        assert go["passed"]
        assert all(all(c.values()) for c in eng.closure_certificates().values())
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
        assert peak < 1 << 30, f"peak memory {peak} bytes"


def test_criterion_08_witnesses():
    with criterion(8, "witness weights k = 1..4", 30.0):
        rep = witness_report(4, cap=12)
        rows = [r for r in rep["rows"] if r["k"] >= 1]
        assert [r["weight"] for r in rows] == [5, 7, 9, 11]
        assert all(r["nontrivial"] for r in rows) and rep["passed"]


def test_criterion_09_contrast():
    with criterion(9, "contrast matrix x^2 - 3x + 1", 1.0):
        b = companion([1, -3, 1])
        v = lemma2_check_exterior(b)
        assert v.status == VIOLATION
        lat = find_unit_invariant_sublattice(b, 2)
        assert lat is not None and is_unit_invariant(b, lat.basis)
        assert abs(det(intmat(lat.basis))) == 1
        rep = run(load(preset_name="contrast-resnilp-fail"))
        module = rep.sections[1]
        assert module.name == "module" and rep.verdict == "pass"
        assert module.entries[0].data["verdict"] == VIOLATION


def test_criterion_10_property_suites():
    with criterion(10, "property suites and report determinism", 120.0):
        rng = random.Random(10)
        for _ in range(10_000):
            u, v, w = random_word(rng), random_word(rng), random_word(rng)
            assert (u * v) * w == u * (v * w)
            assert (u * u.inverse()).is_identity()
            assert (u * v).inverse() == v.inverse() * u.inverse()
        for _ in range(1000):
            u, v = random_word(rng), random_word(rng)
            su, sv = expand(u, 2, 6), expand(v, 2, 6)
            assert su * sv == expand(u * v, 2, 6)
            assert (su * expand(u.inverse(), 2, 6)).is_one()
        for _ in range(50):
            n = rng.randint(1, 4)
            a = intmat([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
            c = intmat([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
            d, p, q = smith_normal_form(a)
            assert abs(det(p)) == 1 and abs(det(q)) == 1
            assert sorted(abs(int(v)) for v in np.diag(p.dot(a).dot(q))) == sorted(d)
            k = rng.randint(1, n)
            assert np.array_equal(compound(a.dot(c), k), compound(a, k).dot(compound(c, k)))
        first = run(load(preset_name="paper")).payload_json()
        second = run(load(preset_name="paper")).payload_json()
        assert first == second
