import random

import pytest

from quasiwhittaker.errors import ZeroPhi
from quasiwhittaker.uea import (
    UEAElem,
    WhittakerType,
    adapted_elements,
    bracket_gen,
    casimir_c0,
    commutator,
    mul,
    normalize,
    verify_uea_identities,
)
from quasiwhittaker.verify import random_monomial, random_word, run_jacobi

e, h, f, p, q, z = (UEAElem.gen(g) for g in "ehfpqz")


def word(s):
    return tuple("ehfpqz".index(ch) for ch in s)


def test_bracket_examples():
    assert bracket_gen("h", "e") == 2 * e
    assert bracket_gen("p", "q") == z
    assert bracket_gen("f", "q").is_zero()


@pytest.mark.parametrize(
    "w, expected",
    [("pe", "e*p"), ("qp", "p*q - z"), ("qe", "e*q - p"), ("he", "e*h + 2*e")],
)
def test_normalize_examples(w, expected):
    for strategy in (None, "leftmost", "rightmost"):
        assert str(normalize(word(w), strategy=strategy)) == expected


def test_mul_examples():
    assert mul(UEAElem.scalar(1), f * p) == f * p
    assert mul(p * p, f) == UEAElem.mono([0, 0, 1, 2, 0, 0]) - 2 * UEAElem.mono([0, 0, 0, 1, 1, 0]) + z
    assert mul(e, q * q) == UEAElem.mono([1, 0, 0, 0, 2, 0])


def test_commutator_examples():
    assert commutator(e, f) == h
    assert commutator(p * q, p * q).is_zero()
    assert commutator(e, casimir_c0()) == z * e
    assert commutator(f, casimir_c0()) == -(z * f)
    assert commutator(z, casimir_c0()).is_zero()


def test_casimir_form():
    c0 = casimir_c0()
    assert str(c0) == "-e*q^2 - h*p*q + f*p^2"
    assert c0 == p * p * f - q * q * e - h * p * q


def test_centrality_mod_z():
    for g in "ehfpqz":
        com = commutator(UEAElem.gen(g), casimir_c0())
        assert all(m[5] >= 1 for m in com.terms), g


def test_jacobi_all_triples():
    res = run_jacobi()
    assert res.total == 216 and res.ok


def test_confluence_and_filtration():
    rng = random.Random(11)
    for _ in range(200):
        w = random_word(rng, 5)
        left = normalize(w, strategy="leftmost")
        assert left == normalize(w, strategy="rightmost") == normalize(w)
        assert all(sum(m) <= len(w) for m in left.terms)


def test_associativity():
    rng = random.Random(12)
    for _ in range(200):
        a, b, c = (random_monomial(rng, 4) for _ in range(3))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_identities_up_to_six():
    checks = verify_uea_identities(6)
    assert {c.name for c in checks} == {"p^n h^m", "q^n h^m", "p f^k", "q e^k"}
    assert all(c.ok for c in checks)


def test_identities_vacuous_at_zero():
    assert all(c.ok for c in verify_uea_identities(0))


def test_adapted_elements():
    quad = adapted_elements(WhittakerType(1, 0))
    assert (quad.X, quad.C, quad.Pplus, quad.Pminus) == (e, f, q, p)
    quad = adapted_elements(WhittakerType(0, 3))
    assert (quad.X, quad.C, quad.Pplus, quad.Pminus) == (f, -9 * e, p, q)
    quad = adapted_elements(WhittakerType(1, 1))
    assert quad.X.is_zero() and quad.Pplus.is_zero() and quad.Pminus.is_zero()
    assert quad.C == f - e - h
    with pytest.raises(ZeroPhi):
        adapted_elements(WhittakerType(0, 0))


def test_whittaker_kinds():
    assert WhittakerType(0, 0).kind == "zero"
    assert WhittakerType(0, 2).kind == "pZero"
    assert WhittakerType(2, 0).kind == "qZero"
    assert WhittakerType(2, 3).kind == "nondegenerate"
