"""Quotients of M_phi: simple modules, finite-length modules and their structure.

A finite quasi-Whittaker module ``V_d = M_phi / U(S) d(C0) w`` is realised
on adapted monomials with C-exponent below ``deg d``; ``d = x - xi`` gives
the simple module ``L_{phi, xi}``.  The action is the action of M_phi
followed by reduction of every C-polynomial modulo ``d``.

Submodules are handled through truncated closures: the span reachable from
a set of vectors by the generators (and C0) while staying inside a fixed
degree.  Every structural claim below is checked at such a truncation.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import (
    EmptyPoly,
    NotCoprime,
    ReductionFailed,
    TruncationTooSmall,
    WrongCase,
    ZeroVector,
)
from .exact import ONE, ZERO, Echelon, Poly, as_rat, nullspace, poly_bezout
from .qwmod import (
    AdaptedElem,
    ModElem,
    _add_into,
    _key_order,
    act_terms,
    annihilation_operator,
    case_tag_of,
    from_adapted,
    operator_matrix,
    to_adapted,
)
from .uea import E, F, H, P, Q, UEAElem, casimir_c0, format_terms

DEFAULT_TRUNC = 6


@dataclass(frozen=True)
class FactoredPoly:
    """d(x) = prod (x - xi_i)^a_i with distinct rational roots."""

    roots: tuple

    def __init__(self, roots):
        rs = tuple((as_rat(r), int(m)) for r, m in roots)
        if not rs:
            raise EmptyPoly("d must have at least one root")
        if any(m <= 0 for _, m in rs):
            raise ValueError("multiplicities must be positive")
        if len({r for r, _ in rs}) != len(rs):
            raise ValueError("roots must be distinct")
        object.__setattr__(self, "roots", rs)

    @classmethod
    def parse(cls, text):
        """``"1:2,-2:1"`` -> (x - 1)^2 (x + 2)."""
        pairs = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            r, _, m = chunk.rpartition(":")
            if not r:
                r, m = m, "1"
            pairs.append((as_rat(r), int(m)))
        return cls(pairs)

    @property
    def degree(self):
        return sum(m for _, m in self.roots)

    @cached_property
    def poly(self):
        return Poly.from_roots(self.roots)

    def __str__(self):
        return ",".join(f"{r}:{m}" for r, m in self.roots)


class FiniteQW:
    """V_d for a nonzero phi; elements are maps (i, j, k) -> Fraction, k < deg d."""

    def __init__(self, phi, d):
        case_tag_of(phi)
        if not isinstance(d, FactoredPoly):
            d = FactoredPoly(d)
        self.phi = phi
        self.d = d
        self.D = d.degree
        self._xpow = [Poly((1,))]

    def __repr__(self):
        return f"FiniteQW(phi={self.phi}, d={self.d})"

    @property
    def case_tag(self):
        return case_tag_of(self.phi)

    @property
    def is_simple_model(self):
        return self.D == 1

    # elements -----------------------------------------------------------
    def elem(self, terms):
        return QuotElem(self, self.reduce_terms(terms))

    def w(self):
        return QuotElem(self, {(0, 0, 0): ONE})

    def zero(self):
        return QuotElem(self, {})

    def _x_mod(self, k):
        while len(self._xpow) <= k:
            self._xpow.append((self._xpow[-1] * Poly.x()) % self.d.poly)
        return self._xpow[k]

    def reduce_terms(self, terms):
        out = {}
        for (i, j, k), c in terms.items():
            if k < self.D:
                _add_into(out, {(i, j, k): c})
            else:
                for kk, cc in enumerate(self._x_mod(k).coeffs):
                    if cc:
                        _add_into(out, {(i, j, kk): c * cc})
        return out

    def lift(self, terms):
        return from_adapted(AdaptedElem.make(self.phi, terms))

    def act_terms(self, u, terms):
        if not terms:
            return {}
        m = act_terms(u, self.lift(terms).terms, self.phi)
        return self.reduce_terms(to_adapted(ModElem(self.phi, m)).terms)

    def act(self, u, v):
        if v.space is not self and (v.space.phi, v.space.d) != (self.phi, self.d):
            raise WrongCase("element belongs to a different module")
        if isinstance(u, (int, Fraction)):
            u = UEAElem.scalar(u)
        return QuotElem(self, self.act_terms(u, v.terms))

    def c0_poly_act(self, poly, v):
        """poly(C0) v, computed by repeatedly acting with the element C0."""
        c0 = casimir_c0()
        out = {}
        cur = v.terms
        for k, c in enumerate(poly.coeffs):
            if k:
                cur = self.act_terms(c0, cur)
            if c:
                _add_into(out, cur, c)
        return QuotElem(self, out)

    # truncations ----------------------------------------------------------
    @staticmethod
    def grade(key):
        return key[0] + key[1]

    @staticmethod
    def order(key):
        return (key[0] + key[1], key[2], key[0])

    def basis(self, trunc):
        """Keys with i + j <= trunc and every k < deg d."""
        return [
            (i, n - i, k)
            for n in range(trunc + 1)
            for i in range(n, -1, -1)
            for k in range(self.D)
        ]

    def basis_total(self, max_deg):
        """Keys with i + j + k <= max_deg and k < deg d."""
        return [
            (i, j, k)
            for n in range(max_deg + 1)
            for k in range(min(n, self.D - 1) + 1)
            for i in range(n - k, -1, -1)
            for j in [n - k - i]
        ]


class MPhiSpace:
    """M_phi seen through the same interface as FiniteQW (canonical keys)."""

    def __init__(self, phi):
        self.phi = phi

    def act_terms(self, u, terms):
        return act_terms(u, terms, self.phi)

    @staticmethod
    def grade(key):
        return sum(key)

    @staticmethod
    def order(key):
        return (sum(key), key)


@dataclass(frozen=True, eq=False)
class QuotElem:
    space: FiniteQW
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {tuple(k): Fraction(v) for k, v in self.terms.items() if v})

    @property
    def phi(self):
        return self.space.phi

    def __add__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms)
        return QuotElem(self.space, out)

    def __neg__(self):
        return QuotElem(self.space, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        return QuotElem(self.space, {k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QuotElem):
            return NotImplemented
        return self.terms == other.terms and self.space.phi == other.space.phi and self.space.d == other.space.d

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def __str__(self):
        letters = ("X", "h", "C") if self.space.case_tag == "degenerate" else ("h", "f", "C")

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

    def __repr__(self):
        return f"QuotElem({str(self)!r})"


def make_finite(phi, d):
    """The quotient M_phi / U(S) d(C0) w."""
    return FiniteQW(phi, d)


def simple_quotient(phi, xi):
    """L_{phi, xi} = M_phi / U(S)(C - xi) w."""
    return FiniteQW(phi, FactoredPoly([(xi, 1)]))


def act_simple(u, v):
    """Action on L_{phi, xi}; ``v`` must live in a degree-one quotient."""
    if not v.space.is_simple_model:
        raise WrongCase("act_simple expects an element of L_{phi, xi}")
    return v.space.act(u, v)


# --------------------------------------------------------------------------
# cyclic reduction (simplicity witnesses)


@dataclass(frozen=True)
class Witness:
    """``u`` sends the target vector to ``scalar * w``."""

    u: UEAElem
    scalar: Fraction
    steps: tuple

    def __str__(self):
        ops = " * ".join(f"({name})^{n}" for name, n in self.steps if n) or "1"
        return f"{ops} -> {self.scalar} * w"


def _power(el, n):
    return el**n


def cyclic_reduction(v):
    """Find u in U(S) with u v = c w, c != 0, in a simple quotient.

    Degenerate phi: (P+ - phi(P+))^n with n the top X-degree, then
    (P- - phi(P-))^m with m the top h-degree of the surviving part.
    Nondegenerate phi: (q - phi(q))^m with m the top h-degree, then
    (p - phi(p))^n with n the top f-degree of the surviving part.
    """
    if v.is_zero():
        raise ZeroVector("cannot reduce the zero vector")
    space = v.space
    if not space.is_simple_model:
        raise WrongCase("cyclic_reduction works in L_{phi, xi} (deg d = 1)")
    phi = space.phi
    if phi.degenerate:
        first_name, second_name = "Pplus", "Pminus"
        n = max(i for i, _j, _k in v.terms)
        m = max(j for i, j, _k in v.terms if i == n)
    else:
        first_name, second_name = "qShift", "pShift"
        n = max(i for i, _j, _k in v.terms)
        m = max(j for i, j, _k in v.terms if i == n)
    first = annihilation_operator(phi, first_name)
    second = annihilation_operator(phi, second_name)
    u = _power(second, m) * _power(first, n)
    got = space.act(u, v)
    w = space.w()
    scalar = got.terms.get((0, 0, 0), ZERO)
    if not scalar or got != w * scalar:
        raise ReductionFailed(f"reduction of {v} gave {got}")
    return Witness(u, scalar, ((first_name, n), (second_name, m)))


# --------------------------------------------------------------------------
# truncated closures


_CLOSURE_OPS = None


def closure_ops():
    global _CLOSURE_OPS
    if _CLOSURE_OPS is None:
        _CLOSURE_OPS = [UEAElem.gen(g) for g in (E, H, F, P, Q)] + [casimir_c0()]
    return _CLOSURE_OPS


def closure(space, seeds, trunc, ops=None):
    """Echelon basis of the span reachable from ``seeds`` inside grade <= trunc.

    Only vectors that lie entirely inside the truncation are kept; the
    result is always contained in the generated submodule.
    """
    if ops is None:
        ops = closure_ops()
    ech = Echelon(space.order)
    queue = []
    for s in seeds:
        terms = s.terms if hasattr(s, "terms") else s
        if all(space.grade(k) <= trunc for k in terms):
            row = ech.add(terms)
            if row is not None:
                queue.append(row)
    while queue:
        row = queue.pop()
        for op in ops:
            img = space.act_terms(op, row)
            if img and all(space.grade(k) <= trunc for k in img):
                new = ech.add(img)
                if new is not None:
                    queue.append(new)
    return ech


def graded_dims(ech, grade, trunc):
    """dims[n] = dim(subspace  intersect  grade-n filtration piece) - previous."""
    counts = Counter(grade(lead) for lead in ech.leads())
    return [counts.get(n, 0) for n in range(trunc + 1)]


# --------------------------------------------------------------------------
# maximal submodules, composition series, decomposition


def _verify_simple(phi, xi, trunc):
    """cyclic_reduction succeeds on every spanning monomial of L_{phi, xi}."""
    L = simple_quotient(phi, xi)
    for key in L.basis(trunc):
        cyclic_reduction(L.elem({key: 1}))
    return True


def maximal_submodules(V, trunc=3):
    """Roots xi_i labelling the maximal submodules U(S)(C0 - xi_i) w of V.

    Checks at the truncation that each is proper (w is not reached) and that
    each quotient is simple (every spanning vector reduces to w).
    """
    c0 = casimir_c0()
    out = []
    for xi, _m in V.d.roots:
        gen = V.act(c0 - xi, V.w())
        ech = closure(V, [gen], trunc)
        if ech.contains(V.w().terms):
            raise ReductionFailed(f"U(S)(C0 - {xi})w contains w")
        _verify_simple(V.phi, xi, trunc)
        out.append(xi)
    return out


@dataclass
class SeriesReport:
    layers: list
    trunc: int
    chain_dims: list = field(default_factory=list)

    @property
    def length(self):
        return len(self.layers)


def composition_series(V, trunc=3):
    """Composition factor labels (top to bottom): a_i copies of xi_i.

    For a single root the chain V_i = U(S)(C0 - xi)^i w is built at the
    truncation and checked to be strictly decreasing with quotients of the
    size of L_{phi, xi} on which C0 acts by xi.
    """
    layers = [xi for xi, m in V.d.roots for _ in range(m)]
    report = SeriesReport(layers, trunc)
    if len(V.d.roots) != 1:
        return report
    (xi, a), = V.d.roots
    c0 = casimir_c0()
    shift = Poly((-xi, 1))
    chain = []
    for i in range(a + 1):
        gen = V.c0_poly_act(shift**i, V.w())
        chain.append((gen, closure(V, [gen], trunc)))
    npairs = [n + 1 for n in range(trunc + 1)]
    for i in range(a + 1):
        dims = graded_dims(chain[i][1], V.grade, trunc)
        report.chain_dims.append(sum(dims))
        if dims != [(a - i) * c for c in npairs]:
            raise ReductionFailed(f"V_{i} has graded dims {dims}")
    for i in range(a):
        gen_i, ech_i = chain[i]
        _gen_next, ech_next = chain[i + 1]
        for row in ech_next.rows.values():
            if not ech_i.contains(row):
                raise ReductionFailed(f"V_{i + 1} is not inside V_{i}")
        # C0 acts on the generator of V_i / V_{i+1} by xi
        diff = V.act(c0, gen_i) - gen_i * xi
        if not ech_next.contains(diff.terms):
            raise ReductionFailed(f"C0 does not act by {xi} on V_{i}/V_{i + 1}")
    _verify_simple(V.phi, xi, trunc)
    return report


def minimal_c0_poly(v, bound=None):
    """Monic minimal polynomial of C0 on v (Krylov iteration)."""
    V = v.space
    bound = V.D + 1 if bound is None else bound
    c0 = casimir_c0()
    ech = Echelon(V.order)
    # track each echelon row as a combination of the Krylov vectors
    krylov = []
    cur = v
    for k in range(bound + 1):
        krylov.append(cur)
        terms = dict(cur.terms)
        combo = {k: ONE}
        # reduce by hand to keep the combination
        while terms:
            lead = max(terms, key=V.order)
            row = ech.rows.get(lead)
            if row is None:
                break
            c = terms[lead]
            _add_into(terms, row[0], -c)
            _add_into(combo, row[1], -c)
        if not terms:
            coeffs = [combo.get(t, ZERO) for t in range(k + 1)]
            return Poly(coeffs).monic()
        lead = max(terms, key=V.order)
        inv = 1 / terms[lead]
        ech.rows[lead] = (
            {kk: vv * inv for kk, vv in terms.items()},
            {kk: vv * inv for kk, vv in combo.items()},
        )
        cur = V.act(c0, cur)
    raise TruncationTooSmall("no C0-relation found within the bound")


@dataclass
class Component:
    xi: Fraction
    multiplicity: int
    generator: QuotElem
    d_j: Poly
    r_j: Poly
    length: int
    graded_dims: list


def decompose(V, trunc=3):
    """Direct-sum decomposition V = V_1 + ... + V_k along the distinct roots.

    Returns one :class:`Component` per root, after checking at the truncation
    that the Bezout projectors act as identity / zero, that the graded
    dimensions add up, and that each generator has C0-minimal polynomial
    (x - xi_j)^(a_j).
    """
    roots = V.d.roots
    k = len(roots)
    d_js = []
    for j in range(k):
        d_js.append(Poly.from_roots([r for i, r in enumerate(roots) if i != j]))
    try:
        rs = poly_bezout(d_js)
    except NotCoprime as exc:
        raise ReductionFailed(f"internal: distinct roots gave non-coprime factors ({exc})") from exc
    # canonical representatives: r_j reduced modulo (x - xi_j)^(a_j)
    rs = [r % Poly.from_roots([roots[j]]) for j, r in enumerate(rs)]
    total = Poly()
    for r, dj in zip(rs, d_js):
        total = total + r * dj
    if total != Poly((1,)):
        raise ReductionFailed("Bezout identity failed after reduction")

    gens = [V.c0_poly_act(dj, V.w()) for dj in d_js]
    spans = [closure(V, [g], trunc) for g in gens]
    projectors = [r * dj for r, dj in zip(rs, d_js)]

    # sum of projectors is the identity on test vectors
    tests = [V.elem({key: 1}) for key in V.basis(min(trunc, 2))]
    for t in tests:
        acc = V.zero()
        for pr in projectors:
            acc = acc + V.c0_poly_act(pr, t)
        if acc != t:
            raise ReductionFailed(f"projectors do not sum to the identity on {t}")

    for i, pr in enumerate(projectors):
        for j, span in enumerate(spans):
            for row in span.rows.values():
                vec = QuotElem(V, row)
                img = V.c0_poly_act(pr, vec)
                if i == j and img != vec:
                    raise ReductionFailed(f"projector {i} is not the identity on V_{j}")
                if i != j and not img.is_zero():
                    raise ReductionFailed(f"projector {i} does not kill V_{j}")

    dims = [graded_dims(s, V.grade, trunc) for s in spans]
    whole = [V.D * (n + 1) for n in range(trunc + 1)]
    if [sum(col) for col in zip(*dims)] != whole:
        raise ReductionFailed(f"graded dims {dims} do not add up to {whole}")

    comps = []
    for j, (xi, a) in enumerate(roots):
        minpoly = minimal_c0_poly(gens[j])
        if minpoly != Poly.from_roots([(xi, a)]):
            raise ReductionFailed(f"generator {j} has C0-minimal polynomial {minpoly}")
        comps.append(Component(xi, a, gens[j], d_js[j], rs[j], minpoly.degree, dims[j]))
    return comps


# --------------------------------------------------------------------------
# annihilators, quasi-Whittaker vectors, submodule generators


def annihilator_contains(u, V):
    """True iff u w = 0 in V."""
    return V.act(u, V.w()).is_zero()


def ideal_element(V, u1, u2, u3):
    """u1 d(C0) + u2 (p - phi(p)) + u3 (q - phi(q))."""
    d_elem = UEAElem()
    c0 = casimir_c0()
    for k, c in enumerate(V.d.poly.coeffs):
        if c:
            d_elem = d_elem + c * c0**k
    p_shift = UEAElem.gen(P) - V.phi.phi_p
    q_shift = UEAElem.gen(Q) - V.phi.phi_q
    return u1 * d_elem + u2 * p_shift + u3 * q_shift


def qw_vectors_in_finite(V, max_deg):
    """Quasi-Whittaker vectors of V with total degree i + j + k <= max_deg.

    Verified to span C[C0] w truncated, of dimension min(deg d, max_deg + 1).
    """
    basis = V.basis_total(max_deg)
    ops = [UEAElem.gen(P) - V.phi.phi_p, UEAElem.gen(Q) - V.phi.phi_q]
    m = operator_matrix(ops, basis, lambda op, key: V.act_terms(op, {key: ONE}))
    sols = [QuotElem(V, {k: c for k, c in zip(basis, vec) if c}) for vec in nullspace(m)]
    expected = min(V.D, max_deg + 1)
    ech = Echelon(V.order)
    c0 = casimir_c0()
    cur = V.w()
    for _ in range(expected):
        ech.add(cur.terms)
        cur = V.act(c0, cur)
    if len(sols) != expected or not all(ech.contains(s.terms) for s in sols):
        raise ReductionFailed("quasi-Whittaker vectors are not C[C0]w")
    return sols


def _c_order(key):
    i, j, k = key
    # non-C keys rank above every pure C-power
    return (0 if (i, j) == (0, 0) else 1, i + j + k, key)


def submodule_generator(spanners, max_deg=DEFAULT_TRUNC):
    """Monic d of least degree with d(C) w in the submodule of M_phi spanned by ``spanners``.

    The submodule is taken at the degree-``max_deg`` truncation.
    """
    if not spanners:
        raise ZeroVector("no spanners")
    phi = spanners[0].phi
    case_tag_of(phi)
    if any(s.is_zero() for s in spanners):
        raise ZeroVector("spanners must be nonzero")
    space = MPhiSpace(phi)
    ech = closure(space, spanners, max_deg)
    adapted = Echelon(_c_order)
    for row in ech.rows.values():
        adapted.add(to_adapted(ModElem(phi, row)).terms)
    c_rows = [(lead, row) for lead, row in adapted.rows.items() if _c_order(lead)[0] == 0]
    if not c_rows:
        raise TruncationTooSmall(
            f"no quasi-Whittaker vector reached within degree {max_deg}"
        )
    lead, row = min(c_rows, key=lambda lr: lr[0][2])
    coeffs = [row.get((0, 0, k), ZERO) for k in range(lead[2] + 1)]
    return Poly(coeffs).monic()


def local_finiteness_dim(v):
    """Dimension of the span of all {p, q, z}-words applied to v."""
    if v.is_zero():
        raise ZeroVector("local finiteness is asked of a nonzero vector")
    if isinstance(v, ModElem):
        space = MPhiSpace(v.phi)
    else:
        space = v.space
    ops = [UEAElem.gen(P), UEAElem.gen(Q)]
    # p and q never raise the grade, and z acts as 0
    bound = max(space.grade(k) for k in v.terms)
    return len(closure(space, [v], bound, ops))
