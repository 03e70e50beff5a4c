"""Self-check suites behind ``qwhit verify``.

Each suite returns a :class:`SuiteResult`; all randomness comes from a
``random.Random`` seeded with the suite name and the user seed.
"""

import random
from dataclasses import dataclass, field
from itertools import product

from .oracle import agree_on, cross_check, realize, realize_elem
from .qwmod import (
    ModElem,
    qw_vector_basis,
    to_adapted,
    verify_reduction_lemmas,
)
from .uea import (
    LETTERS,
    UEAElem,
    WhittakerType,
    bracket_gen,
    casimir_c0,
    commutator,
    mul,
    normalize,
    verify_uea_identities,
)

DEFAULT_SEED = 42
SUITES = ("jacobi", "pbw", "oracle", "lemmas")
PHIS = ((1, 0), (0, 1), (2, 3))


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)

    def check(self, ok, witness=None):
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 10:
            self.failures.append(str(witness))

    @property
    def ok(self):
        return self.passed == self.total

    def as_dict(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "total": self.total,
            "failures": list(self.failures),
        }


def suite_rng(name, seed):
    return random.Random(f"{name}:{seed}")


def random_word(rng, max_len=5):
    return tuple(rng.randrange(6) for _ in range(rng.randint(0, max_len)))


def random_monomial(rng, max_deg=4):
    exps = [0] * 6
    for _ in range(rng.randint(0, max_deg)):
        exps[rng.randrange(6)] += 1
    return UEAElem.mono(exps)


def random_expression(rng, max_len=4, max_terms=3):
    """Unnormalised sum of words: list of (coeff, word)."""
    return [
        (rng.randint(-5, 5), random_word(rng, max_len))
        for _ in range(rng.randint(1, max_terms))
    ]


def run_jacobi(seed=DEFAULT_SEED):
    res = SuiteResult("jacobi")
    gens = [UEAElem.gen(g) for g in range(6)]
    for a, b, c in product(range(6), repeat=3):
        ga, gb, gc = gens[a], gens[b], gens[c]
        anti = bracket_gen(a, b) == -bracket_gen(b, a)
        jac = (
            commutator(ga, commutator(gb, gc))
            + commutator(gb, commutator(gc, ga))
            + commutator(gc, commutator(ga, gb))
        )
        res.check(anti and jac.is_zero(), LETTERS[a] + LETTERS[b] + LETTERS[c])
    return res


def run_pbw(seed=DEFAULT_SEED, n_words=200, n_triples=200):
    rng = suite_rng("pbw", seed)
    res = SuiteResult("pbw")
    for _ in range(n_words):
        word = random_word(rng, 5)
        left = normalize(word, strategy="leftmost")
        right = normalize(word, strategy="rightmost")
        fast = normalize(word)
        filt = all(sum(m) <= len(word) for m in fast.terms)
        res.check(left == right == fast and filt, word)
    for _ in range(n_triples):
        a, b, c = (random_monomial(rng, 4) for _ in range(3))
        res.check(mul(mul(a, b), c) == mul(a, mul(b, c)), (a, b, c))
    for chk in verify_uea_identities(6):
        res.check(chk.ok, (chk.name, chk.exponents))
    return res


def run_oracle(seed=DEFAULT_SEED, n_elems=100, degree_bound=8):
    rng = suite_rng("oracle", seed)
    res = SuiteResult("oracle")
    for a in range(6):
        for b in range(6):
            lhs = realize(a) @ realize(b) - realize(b) @ realize(a)
            res.check(agree_on(lhs, realize_elem(bracket_gen(a, b)), degree_bound), (a, b))
    for _ in range(n_elems):
        expr = random_expression(rng, 4)
        res.check(cross_check(expr, degree_bound), expr)
    c0_words = [(1, "ppf"), (-1, "qqe"), (-1, "hpq")]
    for g, sign in (("e", 1), ("f", -1)):
        # [g, C0] through composition of realized words; z -> 1
        lhs = realize_elem([(c, g + w) for c, w in c0_words]) - realize_elem(
            [(c, w + g) for c, w in c0_words]
        )
        expected = realize_elem([(sign, g + "z")])
        res.check(agree_on(lhs, expected, degree_bound), f"[{g}, C0] oracle")
        zg = UEAElem.gen("z") * UEAElem.gen(g) * sign
        res.check(commutator(UEAElem.gen(g), casimir_c0()) == zg, f"[{g}, C0] symbolic")
    for g in range(6):
        com = commutator(UEAElem.gen(g), casimir_c0())
        res.check(all(m[5] >= 1 for m in com.terms), f"[{LETTERS[g]}, C0] mod z")
    return res


def run_lemmas(seed=DEFAULT_SEED, max_deg=4):
    res = SuiteResult("lemmas")
    for i, ph in enumerate(PHIS):
        phi = WhittakerType(*ph)
        rep = verify_reduction_lemmas(phi, poly_deg=3, idx=3, trials=1, seed=seed * 10 + i)
        for name, (p, t) in rep.counts.items():
            res.passed += p
            res.total += t
        res.failures.extend(str(f) for f in rep.failures[:5])
        for n in range(max_deg + 1):
            sols = qw_vector_basis(phi, n)
            pure = all(all(k[:2] == (0, 0) for k in to_adapted(s).terms) for s in sols)
            res.check(len(sols) == n + 1 and pure, (ph, n))
        w = ModElem.w(phi)
        res.check(to_adapted(w).terms == {(0, 0, 0): 1}, (ph, "w"))
    return res


_RUNNERS = {
    "jacobi": run_jacobi,
    "pbw": run_pbw,
    "oracle": run_oracle,
    "lemmas": run_lemmas,
}


def run_suites(which="all", seed=DEFAULT_SEED):
    names = SUITES if which == "all" else (which,)
    return [_RUNNERS[name](seed) for name in names]
