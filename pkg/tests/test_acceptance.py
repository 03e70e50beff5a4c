"""Acceptance suite: thirteen criteria, exact arithmetic, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 -m tests.test_acceptance``.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from quasiwhittaker.exact import Poly
from quasiwhittaker.expr import format_expr, parse_expr
from quasiwhittaker.oracle import agree_on, cross_check, realize_elem
from quasiwhittaker.qwmod import ModElem, qw_vector_basis, to_adapted, verify_reduction_lemmas
from quasiwhittaker.structure import (
    FactoredPoly,
    act_simple,
    annihilator_contains,
    closure,
    cyclic_reduction,
    decompose,
    ideal_element,
    local_finiteness_dim,
    make_finite,
    qw_vectors_in_finite,
    simple_quotient,
)
from quasiwhittaker.uea import (
    UEAElem,
    WhittakerType,
    casimir_c0,
    commutator,
    mul,
    normalize,
    verify_uea_identities,
)
from quasiwhittaker.verify import random_expression, random_monomial, random_word, run_jacobi

PHIS = [WhittakerType(1, 0), WhittakerType(0, 1), WhittakerType(2, 3)]
XIS = [Fraction(0), Fraction(1), Fraction(-2)]
SEED = 42


def report(n, title, ok, started, detail=""):
    secs = time.perf_counter() - started
    line = f"[AC{n:02d}] {'PASS' if ok else 'FAIL'} {title} ({secs:.2f}s){' ' + detail if detail else ''}"
    capman = _capture_manager()
    if capman is not None:
        with capman.global_and_fixture_disabled():
            print(line)
    else:
        print(line)
    return ok


_CONFIG = None


def _capture_manager():
    if _CONFIG is None:
        return None
    return _CONFIG.pluginmanager.getplugin("capturemanager")


@pytest.fixture(autouse=True)
def _bind_config(request):
    global _CONFIG
    _CONFIG = request.config
    yield


def rand_mod(rng, phi, max_deg):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        i = rng.randint(0, max_deg)
        j = rng.randint(0, max_deg - i)
        k = rng.randint(0, max_deg - i - j)
        terms[(i, j, k)] = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 3))
    return ModElem(phi, terms)


def test_ac01_bracket_table():
    t0 = time.perf_counter()
    res = run_jacobi()
    ok = res.total == 216 and res.ok and time.perf_counter() - t0 < 1
    assert report(1, "antisymmetry + Jacobi over 216 triples", ok, t0, f"{res.passed}/{res.total}")


def test_ac02_pbw_soundness():
    t0 = time.perf_counter()
    rng = random.Random(f"ac02:{SEED}")
    bad = 0
    for _ in range(200):
        w = random_word(rng, 5)
        if normalize(w, strategy="leftmost") != normalize(w, strategy="rightmost"):
            bad += 1
    for _ in range(200):
        a, b, c = (random_monomial(rng, 4) for _ in range(3))
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            bad += 1
    ok = bad == 0 and time.perf_counter() - t0 < 5
    assert report(2, "PBW confluence (200 words) + associativity (200 triples)", ok, t0, f"{bad} mismatches")


def test_ac03_oracle_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(f"ac03:{SEED}")
    bad = sum(not cross_check(random_expression(rng, 4), 8) for _ in range(100))
    ok = bad == 0 and time.perf_counter() - t0 < 5
    assert report(3, "oscillator oracle on 100 random elements, x^n n<=8", ok, t0, f"{bad} mismatches")


def test_ac04_centrality_mod_z():
    t0 = time.perf_counter()
    c0 = casimir_c0()
    ok = all(
        all(m[5] >= 1 for m in commutator(UEAElem.gen(g), c0).terms) for g in "ehfpqz"
    )
    words = [(1, "ppf"), (-1, "qqe"), (-1, "hpq")]
    for g, sign in (("e", 1), ("f", -1)):
        lhs = realize_elem([(c, g + w) for c, w in words]) - realize_elem([(c, w + g) for c, w in words])
        ok &= agree_on(lhs, realize_elem([(sign, "z" + g)]), 8)
        ok &= commutator(UEAElem.gen(g), c0) == sign * UEAElem.gen("z") * UEAElem.gen(g)
    assert report(4, "[g, C0] in zU(S); [e,C0]=ze, [f,C0]=-zf via oracle", ok, t0)


def test_ac05_power_identities():
    t0 = time.perf_counter()
    checks = verify_uea_identities(6)
    ok = all(c.ok for c in checks) and len({c.name for c in checks}) == 4
    assert report(5, "four commutation power identities, exponents <= 6", ok, t0, f"{len(checks)} cases")


def test_ac06_reduction_lemmas():
    t0 = time.perf_counter()
    ok = True
    total = 0
    for i, phi in enumerate(PHIS):
        rep = verify_reduction_lemmas(phi, poly_deg=4, idx=5, trials=2, seed=SEED + i)
        ok &= rep.ok
        total += sum(t for _p, t in rep.counts.values())
    assert report(6, "annihilation-operator closed forms, deg<=4, idx<=5", ok, t0, f"{total} checks")


def test_ac07_qw_vectors_in_m_phi():
    t0 = time.perf_counter()
    ok = True
    for phi in PHIS:
        for n in range(7):
            sols = qw_vector_basis(phi, n)
            ok &= len(sols) == n + 1
            ok &= all(all(k[:2] == (0, 0) for k in to_adapted(s).terms) for s in sols)
    assert report(7, "quasi-Whittaker vectors of M_phi = C[C]w, maxDeg <= 6", ok, t0)


def test_ac08_simple_quotients():
    t0 = time.perf_counter()
    ok = True
    count = 0
    for phi in PHIS:
        for xi in XIS:
            L = simple_quotient(phi, xi)
            ok &= qw_vectors_in_finite(L, 6) == [L.w()]
            for key in L.basis(6):
                v = L.elem({key: 1})
                wit = cyclic_reduction(v)
                ok &= wit.scalar != 0 and L.act(wit.u, v) == L.w() * wit.scalar
                count += 1
    assert report(8, "L_{phi,xi}: 1-dim QW space, witnesses for i+j <= 6", ok, t0, f"{count} witnesses")


def test_ac09_c0_scalar_on_simple():
    t0 = time.perf_counter()
    ok = True
    c0 = casimir_c0()
    for phi in PHIS:
        for xi in XIS:
            L = simple_quotient(phi, xi)
            for key in L.basis(5):
                b = L.elem({key: 1})
                ok &= act_simple(c0, b) == b * xi
    assert report(9, "C0 acts by xi on L_{phi,xi}, i+j <= 5", ok, t0)


def test_ac10_direct_sum():
    t0 = time.perf_counter()
    ok = True
    trunc = 3
    for phi in PHIS:
        for roots_text in ("1:1,-1:1", "1:2,-2:1"):
            d = FactoredPoly.parse(roots_text)
            V = make_finite(phi, d)
            comps = decompose(V, trunc)
            total = Poly()
            for c in comps:
                total = total + c.r_j * c.d_j
            ok &= total == Poly((1,))
            spans = [closure(V, [c.generator], trunc) for c in comps]
            for i, c in enumerate(comps):
                proj = c.r_j * c.d_j
                for j, span in enumerate(spans):
                    for row in list(span.rows.values())[:6]:
                        vec = V.elem(row)
                        img = V.c0_poly_act(proj, vec)
                        ok &= (img == vec) if i == j else img.is_zero()
            dims = [sum(col) for col in zip(*(c.graded_dims for c in comps))]
            ok &= dims == [d.degree * (n + 1) for n in range(trunc + 1)]
            ok &= [c.length for c in comps] == [a for _xi, a in d.roots]
    assert report(10, "direct-sum decomposition for (x-1)(x+1), (x-1)^2(x+2)", ok, t0)


def test_ac11_annihilator():
    t0 = time.perf_counter()
    rng = random.Random(f"ac11:{SEED}")
    phi = WhittakerType(2, 3)
    V = make_finite(phi, FactoredPoly([(Fraction(3, 2), 1)]))
    ok = True
    for _ in range(50):
        us = [random_monomial(rng, 2) * rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(3)]
        ok &= annihilator_contains(ideal_element(V, *us), V)
    for u in (UEAElem.scalar(1), UEAElem.gen("h"), UEAElem.gen("e")):
        ok &= not annihilator_contains(u, V)
    assert report(11, "50 ideal elements kill w; 1, h, e do not", ok, t0)


def test_ac12_local_finiteness():
    t0 = time.perf_counter()
    rng = random.Random(f"ac12:{SEED}")
    ok = True
    dims = []
    V = make_finite(WhittakerType(2, 3), FactoredPoly([(1, 2), (-2, 1)]))
    for n in range(50):
        phi = PHIS[n % 3]
        v = rand_mod(rng, phi, 5)
        dims.append(local_finiteness_dim(v))
        terms = {}
        for _ in range(3):
            i = rng.randint(0, 5)
            terms[(i, rng.randint(0, 5 - i), rng.randint(0, V.D - 1))] = rng.randint(1, 4)
        dims.append(local_finiteness_dim(V.elem(terms)))
    ok = all(isinstance(d, int) and d >= 1 for d in dims)
    assert report(12, "H-span finite for 50 vectors in M_phi and in V_d", ok, t0, f"max dim {max(dims)}")


def _random_expr_text(rng):
    parts = []
    for idx in range(rng.randint(1, 4)):
        facs = []
        if rng.random() < 0.5:
            facs.append(f"{rng.randint(0, 9)}/{rng.randint(1, 5)}")
        for _ in range(rng.randint(0 if facs else 1, 4)):
            g = rng.choice("ehfpqz")
            facs.append(f"{g}^{rng.randint(0, 3)}" if rng.random() < 0.3 else g)
        sign = ("-" if rng.random() < 0.3 else "") if idx == 0 else rng.choice([" + ", " - "])
        parts.append(sign + "*".join(facs))
    return "".join(parts)


def test_ac13_cli_contract():
    t0 = time.perf_counter()
    rng = random.Random(f"ac13:{SEED}")
    ok = True
    for _ in range(100):
        ast = parse_expr(_random_expr_text(rng))
        ok &= parse_expr(format_expr(ast)) == ast
    cmd = [sys.executable, "-m", "quasiwhittaker", "verify", "--suite", "all", "--seed", "42"]
    first = subprocess.run(cmd + ["--format", "json"], capture_output=True)
    second = subprocess.run(cmd + ["--format", "json"], capture_output=True)
    ok &= first.returncode == 0 and second.returncode == 0
    ok &= first.stdout == second.stdout and len(first.stdout) > 0
    assert report(13, "grammar round trip, verify exit 0, byte-stable JSON", ok, t0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
