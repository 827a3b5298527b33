import pytest

from conftest import random_word
from lcsverify.errors import InputError, ResourceLimitError
from lcsverify.fbc import PAPER_IDENTITIES, FbcElement, FbcGroup, FreeAutomorphism, paper_group, relator
from lcsverify.latmod import norm_sequences, paper_matrix
from lcsverify.words import Alphabet, conjugate, gen, parse_word

XY = Alphabet(("x", "y"))
x, y = gen(0), gen(1)


def fw(text):
    return parse_word(text, XY)


def test_normal_form_examples(group):
    assert group.normal_form(group.parse("a^(b^2)")) == FbcElement(fw("x y^3"), 0)
    assert group.normal_form(group.parse("b")) == FbcElement(fw("1"), 1)
    assert group.normal_form(relator(group)).is_identity()
    assert group.normal_form(group.parse("b^-1 a b")) == FbcElement(y, 0)


def test_verify_identity_examples(group):
    assert group.verify_identity(group.parse("a^3"), group.parse("[a, b^2]^(b^-1)")).equal
    assert group.verify_identity(group.parse("[a^b, a]^2"), group.parse("[a, a^b, a^3^b * b^-1]")).equal
    v = group.verify_identity(group.parse("a b"), group.parse("b a"))
    assert not v.equal
    # witness is the normal form of rhs^-1 * lhs = [a, b]
    assert v.witness == FbcElement(fw("x^-1 y"), 0)


def test_identity_suite_paper(group):
    rep = group.identity_suite()
    assert rep.passed
    assert [r["name"] for r in rep.rows] == [t[0] for t in PAPER_IDENTITIES]
    cube = rep.rows[2]
    assert cube["lhs_normal_form"] == cube["rhs_normal_form"] == "(y^3, 0)"


def test_identity_suite_vacuous_and_failing():
    g = FbcGroup.from_config(
        {
            "fiber": ["x", "y"],
            "phi": ["x", "y"],
            "presentation": ["a", "t"],
            "embedding": {"a": {"fiber": "x"}, "t": {"shift": 1}},
        }
    )
    assert g.identity_suite().passed
    assert g.identity_suite([]).rows == []
    bad = g.identity_suite([("a is t", "a", "t")])
    assert not bad.passed and bad.rows[0]["difference"] == "(x, -1)"


def test_phi_power_images(group):
    assert group.phi_power_image(0, 2) == fw("x y^3")
    assert group.phi_power_image(0, -1) == fw("y x^-3")
    assert group.phi_power_image(1, 0) == y
    with pytest.raises(ResourceLimitError):
        group.phi_power_image(0, 13)


def test_phi_power_roundtrip(group):
    for k in range(-5, 6):
        for w in (x, y, fw("x y^-2 x")):
            assert group.phi_power(group.phi_power(w, k), -k) == w


def test_fiber_length_growth_follows_trace_recurrence(group):
    lengths = [group.phi_power_image(0, k).length for k in range(10)]
    assert lengths[:8] == [1, 1, 4, 13, 43, 142, 469, 1549]
    seq = norm_sequences(4, paper_matrix())
    for k in range(1, 9):
        assert lengths[k + 1] == seq.trace * lengths[k] - seq.determinant * lengths[k - 1]


def test_normal_form_is_homomorphism(group, rng):
    for _ in range(1000):
        u, v = random_word(rng, length=6, max_exp=1), random_word(rng, length=6, max_exp=1)
        assert group.normal_form(u * v) == group.mul(group.normal_form(u), group.normal_form(v))


def test_relator_normal_closure_is_killed(group, rng):
    r = relator(group)
    for _ in range(200):
        w, w2, g = (random_word(rng, length=4, max_exp=1) for _ in range(3))
        assert group.normal_form(w * conjugate(r, g) * w2) == group.normal_form(w * w2)


def test_inverse_and_power(group, rng):
    for _ in range(200):
        p = group.normal_form(random_word(rng, length=4, max_exp=1))
        assert group.mul(p, group.inv(p)).is_identity()
        assert group.pow(p, 3) == group.mul(p, group.mul(p, p))
        assert group.pow(p, -2) == group.inv(group.mul(p, p))


def test_abelianization():
    assert paper_group().phi.abelianization() == [[0, 1], [1, 3]]


def test_automorphism_validation():
    with pytest.raises(InputError):
        FreeAutomorphism((y, x * y**3), (x, y))
    phi = FreeAutomorphism.from_images([y, x * y**3])
    assert phi.inverse_images == (fw("y x^-3"), x)
    with pytest.raises(InputError):
        FreeAutomorphism.from_images([x**2, y], max_length=4)


def test_from_config_errors():
    with pytest.raises(InputError):
        FbcGroup.from_config({"fiber": ["x"], "phi": ["x", "x"], "presentation": [], "embedding": {}})
    with pytest.raises(InputError):
        FbcGroup.from_config({"fiber": ["x"], "phi": ["x"], "presentation": ["a"], "embedding": {}})
    with pytest.raises(InputError):
        FbcGroup.from_config({"phi": ["x"]})
