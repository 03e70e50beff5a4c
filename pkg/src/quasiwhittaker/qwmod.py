"""The universal quasi-Whittaker module M_phi = U(S) (x)_{U(H)} C_phi.

Internally every element is stored on the sl2 PBW basis
``e^i h^j f^k w``.  The adapted bases (``X^i h^j C^k w`` when exactly one of
phi(p), phi(q) vanishes, ``h^i f^j C^k w`` otherwise) are views obtained by
an exact triangular change of basis.
"""

import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import PhiMismatch, WrongCase, ZeroVector
from .exact import ONE, ZERO, Echelon, Poly, RatMatrix, nullspace
from .uea import (
    E,
    F,
    H,
    P,
    Q,
    Z,
    UEAElem,
    WhittakerType,
    _gen_times_mono,
    _lmul_gen_terms,
    _mono_times_mono,
    adapted_elements,
    casimir_c0,
    format_terms,
    mono_word,
)

__all__ = [
    "ModElem",
    "AdaptedElem",
    "WhittakerType",
    "act",
    "act_literal",
    "convert_basis",
    "to_adapted",
    "from_adapted",
    "is_qw_vector",
    "qw_vector_basis",
    "apply_annihilation_power",
    "verify_reduction_lemmas",
]


def _add_into(out, terms, scale=ONE):
    for k, v in terms.items() if isinstance(terms, dict) else terms:
        nv = out.get(k, ZERO) + scale * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)


def _sl2_key_str(key):
    i, j, k = key
    parts = []
    for letter, a in zip("ehf", key):
        if a == 1:
            parts.append(letter)
        elif a > 1:
            parts.append(f"{letter}^{a}")
    parts.append("w")
    return "*".join(parts)


def _key_order(key):
    return (-sum(key), tuple(-a for a in key))


@dataclass(frozen=True, eq=False)
class ModElem:
    """Element of M_phi: ``{(i, j, k): c}`` meaning sum c e^i h^j f^k w."""

    phi: WhittakerType
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {tuple(k): Fraction(v) for k, v in self.terms.items() if v})

    @classmethod
    def w(cls, phi):
        return cls(phi, {(0, 0, 0): 1})

    def _check(self, other):
        if other.phi != self.phi:
            raise PhiMismatch(f"phi {self.phi} vs {other.phi}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        _add_into(out, other.terms)
        return ModElem(self.phi, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ModElem(self.phi, {k: -v for k, v in self.terms.items()})

    def __mul__(self, c):
        c = Fraction(c)
        return ModElem(self.phi, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ModElem):
            return NotImplemented
        return self.phi == other.phi and self.terms == other.terms

    def __hash__(self):
        return hash((self.phi, tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(k) for k in self.terms), default=-1)

    def __str__(self):
        return format_terms(self.terms.items(), _sl2_key_str, _key_order)

    def __repr__(self):
        return f"ModElem({self.phi}, {str(self)!r})"


# --------------------------------------------------------------------------
# the action


def _substitute_tail(phi, mono):
    """Coefficient picked up by p^d q^m z^g w; 0 when z occurs."""
    a, b, c, d, m, g = mono
    if g:
        return ZERO
    val = ONE
    if d:
        val *= phi.phi_p**d
    if m:
        val *= phi.phi_q**m
    return val


@lru_cache(maxsize=None)
def _act_gen_key(g, key, phi):
    out = {}
    for mono, c in _gen_times_mono(g, key + (0, 0, 0)):
        s = _substitute_tail(phi, mono)
        if s:
            k = mono[:3]
            nv = out.get(k, ZERO) + c * s
            if nv:
                out[k] = nv
            else:
                out.pop(k)
    return tuple(out.items())


def act_gen_terms(g, terms, phi):
    out = {}
    for key, c in terms.items():
        for k2, c2 in _act_gen_key(g, key, phi):
            nv = out.get(k2, ZERO) + c * c2
            if nv:
                out[k2] = nv
            else:
                out.pop(k2)
    return out


def act_terms(u, terms, phi):
    """Raw action on a ``{(i,j,k): c}`` map; applies letters right to left."""
    out = {}
    for mono, c in u.terms.items():
        if mono[Z]:
            continue
        cur = terms
        for g in reversed(mono_word(mono)):
            cur = act_gen_terms(g, cur, phi)
            if not cur:
                break
        _add_into(out, cur, c)
    return out


def act(u, v, phi=None):
    """Action of ``u`` in U(S) on ``v`` in M_phi.

    Each monomial of ``u`` is applied letter by letter, substituting phi on
    the Heisenberg tail after every step; :func:`act_literal` is the
    normalize-then-substitute definition and agrees with this.
    """
    if phi is not None and phi != v.phi:
        raise PhiMismatch(f"element carries phi {v.phi}, caller expects {phi}")
    if isinstance(u, (int, Fraction)):
        u = UEAElem.scalar(u)
    return ModElem(v.phi, act_terms(u, v.terms, v.phi))


def act_literal(u, v):
    out = {}
    for mu, cu in u.terms.items():
        for key, cv in v.terms.items():
            for mono, c in _mono_times_mono(mu, key + (0, 0, 0)):
                s = _substitute_tail(v.phi, mono)
                if s:
                    _add_into(out, {mono[:3]: c}, cu * cv * s)
    return ModElem(v.phi, out)


# --------------------------------------------------------------------------
# adapted bases


@dataclass(frozen=True, eq=False)
class AdaptedElem:
    """Element in the adapted basis; ``case_tag`` is 'degenerate' or 'nondegenerate'.

    Degenerate keys (i, j, k) mean X^i h^j C^k w; nondegenerate keys mean
    h^i f^j C^k w.
    """

    phi: WhittakerType
    case_tag: str
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {tuple(k): Fraction(v) for k, v in self.terms.items() if v})
        expected = case_tag_of(self.phi)
        if self.case_tag != expected:
            raise WrongCase(f"case tag {self.case_tag!r} does not match phi {self.phi}")

    @classmethod
    def make(cls, phi, terms):
        return cls(phi, case_tag_of(phi), terms)

    def __eq__(self, other):
        if not isinstance(other, AdaptedElem):
            return NotImplemented
        return self.phi == other.phi and self.terms == other.terms

    def __hash__(self):
        return hash((self.phi, tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    def c_polys(self):
        """Group as {(i, j): Poly in C}."""
        groups = defaultdict(dict)
        for (i, j, k), c in self.terms.items():
            groups[(i, j)][k] = c
        return {
            ij: Poly([ks.get(t, ZERO) for t in range(max(ks) + 1)]) for ij, ks in groups.items()
        }

    def __str__(self):
        letters = ("X", "h", "C") if self.case_tag == "degenerate" else ("h", "f", "C")

        def fmt(key):
            parts = []
            for letter, a in zip(letters, key):
                if a == 1:
                    parts.append(letter)
                elif a > 1:
                    parts.append(f"{letter}^{a}")
            parts.append("w")
            return "*".join(parts)

        return format_terms(self.terms.items(), fmt, _key_order)


def case_tag_of(phi):
    phi.require_nonzero()
    return "degenerate" if phi.degenerate else "nondegenerate"


def _letters(phi):
    """The left-multiplication sequence (first, second, third) for the basis."""
    quad = adapted_elements(phi)
    if phi.degenerate:
        return quad.X, UEAElem.gen(H), quad.C
    return UEAElem.gen(H), UEAElem.gen(F), quad.C


def _lmul_elem(u, terms):
    out = {}
    for mono, c in u.terms.items():
        cur = terms
        for g in reversed(mono_word(mono)):
            cur = _lmul_gen_terms(g, cur)
        _add_into(out, cur, c)
    return out


@lru_cache(maxsize=None)
def _adapted_image(phi, key):
    """Canonical terms {(a,b,c): coeff} of one adapted basis vector."""
    i, j, k = key
    if key == (0, 0, 0):
        return ((((0, 0, 0)), ONE),)
    first, second, third = _letters(phi)
    if i:
        left, prev = first, (i - 1, j, k)
    elif j:
        left, prev = second, (0, j - 1, k)
    else:
        left, prev = third, (0, 0, k - 1)
    prev_terms = {kk + (0, 0, 0): c for kk, c in _adapted_image(phi, prev)}
    out = _lmul_elem(left, prev_terms)
    return tuple((m[:3], c) for m, c in out.items())


def adapted_image(phi, key):
    return dict(_adapted_image(phi, tuple(key)))


def _lead(phi, key):
    """Adapted key whose image has canonical ``key`` as its leading term."""
    a, b, c = key
    if phi.kind == "qZero":
        return (a, b, c), phi.phi_p ** (2 * c)
    lead_c = (-phi.phi_q * phi.phi_q) ** a
    if phi.kind == "pZero":
        return (c, b, a), lead_c
    return (b, c, a), lead_c


def _lead_order(key):
    return (sum(key), key[0], key)


def to_adapted(v):
    """Re-express a ModElem in the adapted basis (exact)."""
    phi = v.phi
    tag = case_tag_of(phi)
    work = dict(v.terms)
    out = {}
    while work:
        key = max(work, key=_lead_order)
        akey, lc = _lead(phi, key)
        coef = work[key] / lc
        out[akey] = out.get(akey, ZERO) + coef
        _add_into(work, _adapted_image(phi, akey), -coef)
    return AdaptedElem(phi, tag, out)


def from_adapted(a):
    out = {}
    for key, c in a.terms.items():
        _add_into(out, _adapted_image(a.phi, key), c)
    return ModElem(a.phi, out)


def convert_basis(v):
    """Switch between the canonical and the adapted representation."""
    if isinstance(v, ModElem):
        return to_adapted(v)
    if isinstance(v, AdaptedElem):
        return from_adapted(v)
    raise TypeError(f"cannot convert {type(v).__name__}")


def adapted(phi, terms):
    """Shorthand: the ModElem of an adapted combination."""
    return from_adapted(AdaptedElem.make(phi, terms))


def c_power_w(phi, k):
    """C^k w, which equals C0^k w."""
    return adapted(phi, {(0, 0, k): 1})


# --------------------------------------------------------------------------
# quasi-Whittaker vectors


def _shift(g, phi):
    return UEAElem.gen(g) - phi.value(g)


def is_qw_vector(v):
    if v.is_zero():
        raise ZeroVector("a quasi-Whittaker vector must be nonzero")
    phi = v.phi
    return act(_shift(P, phi), v).is_zero() and act(_shift(Q, phi), v).is_zero()


def truncated_basis(max_deg):
    """Canonical keys (i, j, k) with i + j + k <= max_deg, in a fixed order."""
    return [
        (i, j, n - i - j)
        for n in range(max_deg + 1)
        for i in range(n, -1, -1)
        for j in range(n - i, -1, -1)
    ]


def operator_matrix(ops, basis, apply_op):
    """Stack the matrices of several linear operators on ``basis``."""
    rows = []
    for op in ops:
        images = [apply_op(op, key) for key in basis]
        out_keys = sorted({k for img in images for k in img})
        index = {k: r for r, k in enumerate(out_keys)}
        block = [[ZERO] * len(basis) for _ in out_keys]
        for col, img in enumerate(images):
            for k, c in img.items():
                block[index[k]][col] = c
        rows.extend(block)
    return RatMatrix(rows, len(basis))


def qw_vector_basis(phi, max_deg):
    """Basis of the quasi-Whittaker vectors of degree <= max_deg (plus 0).

    Exact: p and q never raise the sl2 degree, so the truncated kernel is
    the kernel restricted to the truncation.
    """
    phi.require_nonzero()
    basis = truncated_basis(max_deg)
    ops = [_shift(P, phi), _shift(Q, phi)]
    m = operator_matrix(ops, basis, lambda op, key: act_terms(op, {key: ONE}, phi))
    out = []
    for vec in nullspace(m):
        out.append(ModElem(phi, {k: c for k, c in zip(basis, vec) if c}))
    return out


# --------------------------------------------------------------------------
# annihilation operators and the reduction lemmas


def annihilation_operator(phi, which):
    """P+ - phi(P+), P- - phi(P-), p - phi(p) or q - phi(q)."""
    if which in ("pShift", "qShift"):
        return _shift(P if which == "pShift" else Q, phi)
    if which not in ("Pplus", "Pminus"):
        raise ValueError(f"unknown operator {which!r}")
    if not phi.degenerate:
        phi.require_nonzero()
        raise WrongCase("P+ and P- are only used when exactly one of phi(p), phi(q) is 0")
    quad = adapted_elements(phi)
    el = quad.Pplus if which == "Pplus" else quad.Pminus
    from .uea import phi_of

    return el - phi_of(phi, el)


def apply_annihilation_power(v, which, n):
    op = annihilation_operator(v.phi, which)
    terms = v.terms
    for _ in range(n):
        terms = act_terms(op, terms, v.phi)
    return ModElem(v.phi, terms)


@dataclass
class LemmaReport:
    phi: WhittakerType
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name, ok, witness=None):
        passed, total = self.counts.get(name, (0, 0))
        self.counts[name] = (passed + int(ok), total + 1)
        if not ok:
            self.failures.append((name, witness))

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        return {k: f"{p}/{t}" for k, (p, t) in sorted(self.counts.items())}


def _rand_poly(rng, deg, coeff_bound=5, nonzero_top=False):
    d = rng.randint(0, deg)
    cs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(d + 1)]
    if nonzero_top and cs[-1] == 0:
        cs[-1] = rng.choice([c for c in range(-coeff_bound, coeff_bound + 1) if c])
    return Poly(cs)


def _adapted_from_polys(phi, polys):
    """{(i, j): Poly} -> ModElem of sum X^i h^j poly(C) w (or h^i f^j ...)."""
    terms = {}
    for (i, j), poly in polys.items():
        for k, c in enumerate(poly.coeffs):
            if c:
                terms[(i, j, k)] = c
    return adapted(phi, terms)


def verify_reduction_lemmas(phi, poly_deg=4, idx=5, trials=3, seed=0):
    """Compare the annihilation-operator lemmas against their closed forms.

    Degenerate phi: the P+/P- commutation rules, the P+^n reduction (first
    equality exactly, second with the explicit b_j, plus shape) and the P-^s
    reduction on h^t b(C)w.  Nondegenerate phi: the (q - phi(q))^s and
    (p - phi(p))^m reductions.  Every comparison is exact.
    """
    phi.require_nonzero()
    rng = random.Random(seed)
    report = LemmaReport(phi)
    w = ModElem.w(phi)

    for k in range(idx + 1):
        report.record("C^k w is quasi-Whittaker", is_qw_vector(c_power_w(phi, k)), k)

    if phi.degenerate:
        _verify_degenerate(phi, rng, report, poly_deg, idx, trials)
    else:
        _verify_nondegenerate(phi, rng, report, poly_deg, idx, trials)
    del w
    return report


def _verify_degenerate(phi, rng, report, poly_deg, idx, trials):
    quad = adapted_elements(phi)
    X, Pp, Pm = quad.X, quad.Pplus, quad.Pminus
    phi_pm = phi.phi_p + phi.phi_q
    # sign picked up when P- moves right past h
    sigma = 1 if phi.phi_p == 0 else -1
    h = UEAElem.gen(H)

    # P+ X^i = X^i P+ - i X^(i-1) P-   (phi(P+) = 0 here)
    for i in range(idx + 1):
        lhs = Pp * X**i
        rhs = X**i * Pp
        if i:
            rhs = rhs - i * (X ** (i - 1) * Pm)
        report.record("(P+)X^i commutation", lhs == rhs, i)

    # (P- - phi(P-)) h^m = sum_{i>=1} C(m,i) sigma^i h^(m-i) P-   on C[C]w;
    # as a U(S) identity the omitted i = 0 term h^m (P- - phi(P-)) is added back.
    shifted_m = Pm - phi_pm
    for m in range(idx + 1):
        tail = UEAElem()
        for i in range(1, m + 1):
            tail = tail + comb(m, i) * sigma**i * (h ** (m - i) * Pm)
        report.record(
            "(P-)h^m commutation (U(S) form)", shifted_m * h**m == tail + h**m * shifted_m, m
        )
        for _ in range(trials):
            b = _rand_poly(rng, poly_deg)
            v = _adapted_from_polys(phi, {(0, 0): b})
            report.record(
                "(P-)h^m commutation on C[C]w",
                act(shifted_m * h**m, v) == act(tail, v),
                (m, str(b)),
            )

    # P+^n reduction
    for n in range(idx + 1):
        for m in range(idx + 1):
            for _ in range(trials):
                polys = {(i, j): _rand_poly(rng, poly_deg) for i in range(n + 1) for j in range(m + 1)}
                polys[(n, m)] = _rand_poly(rng, poly_deg, nonzero_top=True)
                x = _adapted_from_polys(phi, polys)
                lhs = apply_annihilation_power(x, "Pplus", n)
                top = _adapted_from_polys(phi, {(0, j): polys[(n, j)] for j in range(m + 1)})
                first = act(Pm**n, top) * ((-1) ** n * factorial(n))
                report.record("P+^n reduction, first equality", lhs == first, (n, m))

                # second equality with b_j(C) = sum_{j'>=j} C(j',j) (n sigma)^(j'-j) a_{n j'}(C)
                scal = (-1) ** n * factorial(n) * phi_pm**n
                bj = {}
                for j in range(m + 1):
                    acc = Poly()
                    for jp in range(j, m + 1):
                        acc = acc + polys[(n, jp)] * (comb(jp, j) * (n * sigma) ** (jp - j))
                    bj[(0, j)] = acc * scal
                closed = _adapted_from_polys(phi, bj)
                report.record("P+^n reduction, second equality", lhs == closed, (n, m))

                ad = to_adapted(lhs)
                shape = all(i == 0 and j <= m for (i, j, _k) in ad.terms)
                report.record("P+^n reduction, shape", shape and not lhs.is_zero(), (n, m))

    # P-^s on h^t b(C) w
    for t in range(idx + 1):
        for _ in range(trials):
            b = _rand_poly(rng, poly_deg, nonzero_top=True)
            v = _adapted_from_polys(phi, {(0, t): b})
            same = apply_annihilation_power(v, "Pminus", t)
            closed = _adapted_from_polys(phi, {(0, 0): b}) * (
                phi_pm**t * sigma**t * factorial(t)
            )
            report.record("P-^t on h^t b(C)w", same == closed, (t, str(b)))
            over = apply_annihilation_power(v, "Pminus", t + 1)
            report.record("P-^s on h^t b(C)w, s > t", over.is_zero(), (t, str(b)))


def _verify_nondegenerate(phi, rng, report, poly_deg, idx, trials):
    for t in range(idx + 1):
        for m in range(idx + 1):
            for _ in range(trials):
                polys = {(t, i): _rand_poly(rng, poly_deg) for i in range(m + 1)}
                polys[(t, m)] = _rand_poly(rng, poly_deg, nonzero_top=True)
                v = _adapted_from_polys(phi, polys)
                same = apply_annihilation_power(v, "qShift", t)
                closed = _adapted_from_polys(
                    phi, {(0, i): pl for (_t, i), pl in polys.items()}
                ) * (factorial(t) * phi.phi_q**t)
                report.record("(q-phi(q))^t on h^t f^i a_i(C)w", same == closed, (t, m))
                over = apply_annihilation_power(v, "qShift", t + 1)
                report.record("(q-phi(q))^s, s > t", over.is_zero(), (t, m))

    for m in range(idx + 1):
        for _ in range(trials):
            polys = {(0, i): _rand_poly(rng, poly_deg) for i in range(m + 1)}
            polys[(0, m)] = _rand_poly(rng, poly_deg, nonzero_top=True)
            v = _adapted_from_polys(phi, polys)
            got = apply_annihilation_power(v, "pShift", m)
            closed = _adapted_from_polys(phi, {(0, 0): polys[(0, m)]}) * (
                (-1) ** m * factorial(m) * phi.phi_q**m
            )
            report.record("(p-phi(p))^m on f^i a_i(C)w", got == closed, m)
