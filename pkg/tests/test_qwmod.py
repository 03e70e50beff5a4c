import random
from fractions import Fraction

import pytest

from quasiwhittaker.errors import PhiMismatch, WrongCase, ZeroPhi, ZeroVector
from quasiwhittaker.qwmod import (
    AdaptedElem,
    ModElem,
    act,
    act_literal,
    adapted,
    apply_annihilation_power,
    convert_basis,
    from_adapted,
    is_qw_vector,
    qw_vector_basis,
    to_adapted,
    verify_reduction_lemmas,
)
from quasiwhittaker.uea import UEAElem, WhittakerType, casimir_c0, mul
from quasiwhittaker.verify import random_monomial

from .conftest import PHIS

e, h, f, p, q, z = (UEAElem.gen(g) for g in "ehfpqz")


def rand_mod(rng, phi, max_deg=3, n_terms=3):
    terms = {}
    for _ in range(n_terms):
        i = rng.randint(0, max_deg)
        j = rng.randint(0, max_deg - i)
        k = rng.randint(0, max_deg - i - j)
        terms[(i, j, k)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return ModElem(phi, terms)


@pytest.mark.parametrize("phi", PHIS)
def test_act_examples(phi):
    w = ModElem.w(phi)
    fw = ModElem(phi, {(0, 0, 1): 1})
    assert act(p, w) == w * phi.phi_p
    assert act(p, fw) == fw * phi.phi_p - w * phi.phi_q
    expected = ModElem(
        phi,
        {(0, 0, 1): phi.phi_p**2, (1, 0, 0): -phi.phi_q**2, (0, 1, 0): -phi.phi_p * phi.phi_q},
    )
    assert act(casimir_c0(), w) == expected
    assert act(z, rand_mod(random.Random(1), phi)).is_zero()


def test_act_rejects_mismatched_phi():
    w1 = ModElem.w(WhittakerType(1, 0))
    with pytest.raises(PhiMismatch):
        act(p, w1, phi=WhittakerType(0, 1))
    with pytest.raises(PhiMismatch):
        w1 + ModElem.w(WhittakerType(0, 1))


def test_zero_phi_allowed_in_act_only():
    phi0 = WhittakerType(0, 0)
    assert act(e * f - f * e, ModElem.w(phi0)) == act(h, ModElem.w(phi0))
    with pytest.raises(ZeroPhi):
        qw_vector_basis(phi0, 1)
    with pytest.raises(ZeroPhi):
        to_adapted(ModElem.w(phi0))


def test_module_axiom():
    rng = random.Random(2)
    for n in range(200):
        phi = PHIS[n % 3]
        a, b = random_monomial(rng, 3), random_monomial(rng, 3)
        v = rand_mod(rng, phi, 2)
        assert act(mul(a, b), v) == act(a, act(b, v))
    for phi in PHIS:
        v = rand_mod(rng, phi)
        assert act(UEAElem.scalar(1), v) == v


def test_letterwise_action_matches_literal_definition():
    rng = random.Random(8)
    for n in range(60):
        phi = PHIS[n % 3]
        u = random_monomial(rng, 3) + 2 * random_monomial(rng, 2)
        v = rand_mod(rng, phi, 2)
        assert act(u, v) == act_literal(u, v)


def test_filtration():
    rng = random.Random(9)
    for n in range(60):
        phi = PHIS[n % 3]
        v = rand_mod(rng, phi)
        for g, lift in ((p, 0), (q, 0), (z, 0), (e, 1), (h, 1), (f, 1)):
            out = act(g, v)
            assert out.is_zero() or out.degree() <= v.degree() + lift


def test_convert_examples():
    assert from_adapted(AdaptedElem.make(WhittakerType(1, 0), {(0, 0, 1): 1})).terms == {(0, 0, 1): 1}
    assert from_adapted(AdaptedElem.make(WhittakerType(0, 1), {(0, 0, 1): 1})).terms == {(1, 0, 0): -1}


def test_convert_round_trip():
    rng = random.Random(4)
    for n in range(100):
        phi = PHIS[n % 3]
        v = rand_mod(rng, phi, 5, 4)
        a = convert_basis(v)
        assert isinstance(a, AdaptedElem)
        assert convert_basis(a) == v
        b = AdaptedElem.make(phi, rand_mod(rng, phi, 5, 4).terms)
        assert convert_basis(convert_basis(b)) == b


@pytest.mark.parametrize("phi", PHIS)
def test_is_qw_vector(phi):
    assert is_qw_vector(ModElem.w(phi))
    assert is_qw_vector(adapted(phi, {(0, 0, 2): 1, (0, 0, 1): 3}))
    with pytest.raises(ZeroVector):
        is_qw_vector(ModElem(phi, {}))


def test_hw_is_not_qw():
    assert not is_qw_vector(ModElem(WhittakerType(1, 0), {(0, 1, 0): 1}))


def test_qw_basis_examples():
    phi = WhittakerType(1, 0)
    sols = qw_vector_basis(phi, 2)
    assert sorted(tuple(s.terms) for s in sols) == [((0, 0, 0),), ((0, 0, 1),), ((0, 0, 2),)]
    sols = qw_vector_basis(WhittakerType(2, 3), 1)
    assert len(sols) == 2
    c_w = ModElem(WhittakerType(2, 3), {(0, 0, 1): 4, (1, 0, 0): -9, (0, 1, 0): -6})
    line = [s for s in sols if s.degree() == 1][0]
    ratio = line.terms[(0, 0, 1)] / 4
    assert line == c_w * ratio
    for phi in PHIS:
        assert qw_vector_basis(phi, 0) == [ModElem.w(phi)]


@pytest.mark.parametrize("phi", PHIS)
def test_qw_basis_is_polynomial_in_c(phi):
    for n in range(7):
        sols = qw_vector_basis(phi, n)
        assert len(sols) == n + 1
        for s in sols:
            assert all(k[:2] == (0, 0) for k in to_adapted(s).terms)


@pytest.mark.parametrize("phi", PHIS)
def test_c0_shift(phi):
    rng = random.Random(6)
    for _ in range(20):
        a = AdaptedElem.make(phi, rand_mod(rng, phi, 3).terms)
        shifted = to_adapted(act(casimir_c0(), from_adapted(a)))
        assert shifted.terms == {(i, j, k + 1): c for (i, j, k), c in a.terms.items()}


@pytest.mark.parametrize("phi", PHIS[:2])
def test_plus_plus_minus_minus(phi):
    for k in range(6):
        for i in range(6):
            v = adapted(phi, {(0, k, i): 1})
            assert apply_annihilation_power(v, "Pplus", 1).is_zero()
        v = adapted(phi, {(0, 0, k): 1})
        assert apply_annihilation_power(v, "Pminus", 1).is_zero()


def test_annihilation_examples():
    phi = WhittakerType(1, 0)
    w = ModElem.w(phi)
    assert apply_annihilation_power(adapted(phi, {(1, 0, 0): 1}), "Pplus", 1) == -w
    b = {(0, 0, 0): 2, (0, 0, 1): -1}
    hb = adapted(phi, {(0, 1, k): c for (_i, _j, k), c in b.items()})
    assert apply_annihilation_power(hb, "Pminus", 1) == -adapted(phi, b)
    phi = WhittakerType(1, 1)
    a = {(0, 0, 0): 3, (0, 0, 2): 1}
    fa = adapted(phi, {(0, 1, k): c for (_i, _j, k), c in a.items()})
    assert apply_annihilation_power(fa, "pShift", 1) == -adapted(phi, a)
    v = rand_mod(random.Random(0), phi)
    assert apply_annihilation_power(v, "qShift", 0) == v
    with pytest.raises(WrongCase):
        apply_annihilation_power(v, "Pplus", 1)


@pytest.mark.parametrize("phi", PHIS)
def test_reduction_lemmas(phi):
    rep = verify_reduction_lemmas(phi, poly_deg=4, idx=5, trials=2, seed=1)
    assert rep.ok, rep.failures[:3]
    assert sum(t for _p, t in rep.counts.values()) > 0
