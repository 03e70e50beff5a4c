"""The universal enveloping algebra U(S) of the Schroedinger algebra.

Elements are sparse maps from PBW monomials ``e^a h^b f^c p^d q^m z^g``
(stored as 6-tuples of exponents) to Fractions.  The PBW order is
``e < h < f < p < q < z``: the sl2 block on the left, the Heisenberg block
on the right, so that acting on an induced module only needs a
substitution on the right-hand tail.

Two normal-ordering routes exist.  :func:`normalize` with a ``strategy``
performs literal pair-exchange rewriting on words (leftmost or rightmost
inversion first); without a strategy it folds memoised left
multiplication by generators, which is what :func:`mul` uses.
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import ZeroPhi
from .exact import ONE, ZERO, as_rat

LETTERS = "ehfpqz"
E, H, F, P, Q, Z = range(6)
UNIT = (0, 0, 0, 0, 0, 0)

# [x, y] as a tuple of (generator, coefficient); everything absent is zero.
_BRACKET_POS = {
    (H, E): ((E, 2),),
    (H, F): ((F, -2),),
    (E, F): ((H, 1),),
    (H, P): ((P, 1),),
    (H, Q): ((Q, -1),),
    (P, Q): ((Z, 1),),
    (E, Q): ((P, 1),),
    (P, F): ((Q, -1),),
}


def _build_bracket():
    table = [[() for _ in range(6)] for _ in range(6)]
    for (a, b), val in _BRACKET_POS.items():
        table[a][b] = tuple((g, Fraction(c)) for g, c in val)
        table[b][a] = tuple((g, -Fraction(c)) for g, c in val)
    return table


BRACKET = _build_bracket()


def gen_index(g):
    if isinstance(g, int):
        if 0 <= g < 6:
            return g
        raise ValueError(f"no generator with index {g}")
    try:
        return LETTERS.index(g)
    except ValueError:
        raise ValueError(f"unknown generator {g!r}") from None


def mono_degree(m):
    return sum(m)


def mono_word(m):
    """The sorted word (tuple of generator indices) of a monomial."""
    return tuple(g for g in range(6) for _ in range(m[g]))


def _bump(m, g, by=1):
    lst = list(m)
    lst[g] += by
    return tuple(lst)


def _clean(d):
    return {k: v for k, v in d.items() if v}


class UEAElem:
    """An element of U(S) in PBW canonical form.  Treat as immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {tuple(k): as_rat(v) for k, v in terms.items() if v}
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, c):
        return cls({UNIT: c})

    @classmethod
    def gen(cls, g):
        return cls({_bump(UNIT, gen_index(g)): ONE})

    @classmethod
    def mono(cls, exps, c=1):
        return cls({tuple(exps): c})

    # algebra ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, UEAElem):
            return other
        return UEAElem.scalar(as_rat(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return UEAElem(out)

    __radd__ = __add__

    def __neg__(self):
        return UEAElem({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, UEAElem):
            return mul(self, other)
        c = as_rat(other)
        return UEAElem({k: c * v for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = as_rat(other)
        return UEAElem({k: c * v for k, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = UEAElem.scalar(1)
        base = self
        while n:
            if n & 1:
                out = mul(out, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return out

    # inspection ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        if isinstance(other, UEAElem):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == UEAElem.scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.sorted_terms()))
        return self._hash

    def __repr__(self):
        return f"UEAElem({format_elem(self)!r})"

    def __str__(self):
        return format_elem(self)


def format_monomial(m):
    parts = []
    for g, a in enumerate(m):
        if a == 1:
            parts.append(LETTERS[g])
        elif a > 1:
            parts.append(f"{LETTERS[g]}^{a}")
    return "*".join(parts)


def display_order(m):
    """Terms print by descending degree, then descending exponent tuple."""
    return (-sum(m), tuple(-a for a in m))


def format_terms(items, mono_fmt, order, zero="0"):
    items = sorted(items, key=lambda kv: order(kv[0]))
    if not items:
        return zero
    out = []
    for idx, (m, c) in enumerate(items):
        body = mono_fmt(m)
        mag = abs(c)
        if not body:
            txt = str(mag)
        elif mag == 1:
            txt = body
        else:
            txt = f"{mag}*{body}"
        if idx == 0:
            out.append(("-" if c < 0 else "") + txt)
        else:
            out.append((" - " if c < 0 else " + ") + txt)
    return "".join(out)


def format_elem(u):
    return format_terms(u.terms.items(), format_monomial, display_order)


# --------------------------------------------------------------------------
# brackets and normal ordering


def bracket_gen(a, b):
    """Lie bracket of two generators as a degree-1 element (or zero)."""
    a, b = gen_index(a), gen_index(b)
    return UEAElem({_bump(UNIT, g): c for g, c in BRACKET[a][b]})


@lru_cache(maxsize=None)
def _gen_times_mono(x, m):
    """Canonical form of ``x * m`` for a generator x and monomial m."""
    if x == Z:
        return ((_bump(m, Z), ONE),)
    y = next((g for g in range(x) if m[g]), None)
    if y is None:
        return ((_bump(m, x), ONE),)
    # m = y * rest with y the smallest letter;  x y rest = y (x rest) + [x,y] rest
    rest = _bump(m, y, -1)
    out = defaultdict(Fraction)
    for m1, c1 in _gen_times_mono(x, rest):
        for m2, c2 in _gen_times_mono(y, m1):
            out[m2] += c1 * c2
    for g, c in BRACKET[x][y]:
        for m2, c2 in _gen_times_mono(g, rest):
            out[m2] += c * c2
    return tuple((k, v) for k, v in out.items() if v)


def _lmul_gen_terms(x, terms):
    out = defaultdict(Fraction)
    for m, c in terms.items():
        for m2, c2 in _gen_times_mono(x, m):
            out[m2] += c * c2
    return _clean(out)


@lru_cache(maxsize=None)
def _mono_times_mono(a, b):
    terms = {b: ONE}
    for g in reversed(mono_word(a)):
        terms = _lmul_gen_terms(g, terms)
    return tuple(terms.items())


def _rewrite(word_terms, pick):
    """Literal pair-exchange rewriting on a map word -> coefficient."""
    done = defaultdict(Fraction)
    todo = dict(word_terms)
    while todo:
        word, c = todo.popitem()
        if not c:
            continue
        inversions = [i for i in range(len(word) - 1) if word[i] > word[i + 1]]
        if not inversions:
            done[word] += c
            continue
        i = pick(inversions)
        x, y = word[i], word[i + 1]
        swapped = word[:i] + (y, x) + word[i + 2 :]
        todo[swapped] = todo.get(swapped, ZERO) + c
        for g, bc in BRACKET[x][y]:
            w2 = word[:i] + (g,) + word[i + 2 :]
            todo[w2] = todo.get(w2, ZERO) + c * bc
    out = {}
    for word, c in done.items():
        if c:
            m = [0] * 6
            for g in word:
                m[g] += 1
            m = tuple(m)
            out[m] = out.get(m, ZERO) + c
    return UEAElem(out)


_STRATEGIES = {"leftmost": min, "rightmost": max}


def normalize(word, coeff=1, strategy=None):
    """PBW canonical form of ``coeff * word``.

    ``word`` is a sequence of generators (letters or indices).  ``strategy``
    selects literal rewriting of the leftmost or rightmost out-of-order
    adjacent pair; ``None`` uses the memoised fast path.  All routes agree.
    """
    word = tuple(gen_index(g) for g in word)
    coeff = as_rat(coeff)
    if strategy is None:
        terms = {UNIT: coeff}
        for g in reversed(word):
            terms = _lmul_gen_terms(g, terms)
        return UEAElem(terms)
    try:
        pick = _STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    return _rewrite({word: coeff}, pick)


def mul(a, b):
    """Product in U(S)."""
    out = defaultdict(Fraction)
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            for m, c in _mono_times_mono(ma, mb):
                out[m] += ca * cb * c
    return UEAElem(out)


def commutator(a, b):
    return mul(a, b) - mul(b, a)


def generators():
    return [UEAElem.gen(g) for g in range(6)]


@lru_cache(maxsize=1)
def casimir_c0():
    """C0 = p^2 f - q^2 e - h p q, in canonical form."""
    return (
        normalize("ppf")
        - normalize("qqe")
        - normalize("hpq")
    )


# --------------------------------------------------------------------------
# Whittaker types and adapted elements


@dataclass(frozen=True)
class WhittakerType:
    """A homomorphism on span{p, q, z}; the value on z is always 0."""

    phi_p: Fraction
    phi_q: Fraction

    def __init__(self, phi_p, phi_q):
        object.__setattr__(self, "phi_p", as_rat(phi_p))
        object.__setattr__(self, "phi_q", as_rat(phi_q))

    @property
    def kind(self):
        if self.phi_p == 0 and self.phi_q == 0:
            return "zero"
        if self.phi_p == 0:
            return "pZero"
        if self.phi_q == 0:
            return "qZero"
        return "nondegenerate"

    @property
    def degenerate(self):
        """True when exactly one of the values vanishes."""
        return self.kind in ("pZero", "qZero")

    def require_nonzero(self):
        if self.kind == "zero":
            raise ZeroPhi(
                "phi(p) = phi(q) = 0: the module is an sl2-module; "
                "adapted bases are not defined"
            )

    def value(self, g):
        g = gen_index(g)
        if g == P:
            return self.phi_p
        if g == Q:
            return self.phi_q
        if g == Z:
            return ZERO
        raise ValueError(f"{LETTERS[g]} is not in the Heisenberg subalgebra")

    def __str__(self):
        return f"({self.phi_p}, {self.phi_q})"


@dataclass(frozen=True)
class AdaptedQuad:
    X: UEAElem
    C: UEAElem
    Pplus: UEAElem
    Pminus: UEAElem


def _delta0(x):
    return 1 if x == 0 else 0


def adapted_elements(phi):
    """The elements X, C, P+ and P- attached to a nonzero Whittaker type."""
    phi.require_nonzero()
    a, b = phi.phi_p, phi.phi_q
    e, h, f = UEAElem.gen(E), UEAElem.gen(H), UEAElem.gen(F)
    p, q = UEAElem.gen(P), UEAElem.gen(Q)
    X = _delta0(b) * e + _delta0(a) * f
    C = a * a * f - b * b * e - a * b * h
    Pplus = _delta0(a) * p + _delta0(b) * q
    Pminus = _delta0(b) * p + _delta0(a) * q
    return AdaptedQuad(X, C, Pplus, Pminus)


def phi_of(phi, u):
    """phi extended to a degree-one Heisenberg element."""
    total = ZERO
    for m, c in u.terms.items():
        if sum(m) != 1 or any(m[:3]):
            raise ValueError(f"{u} is not in the Heisenberg subalgebra")
        total += c * phi.value(m.index(1))
    return total


# --------------------------------------------------------------------------
# the four commutation identities for powers


@dataclass
class IdentityCheck:
    name: str
    exponents: tuple
    ok: bool


def _gpow(g, k):
    return UEAElem.mono(_bump(UNIT, g, k))


def _identity_sides(name, n, m):
    """Both sides of one identity; ``n`` is the Heisenberg power, ``m`` the other."""
    p_, q_, h_, e_, f_ = P, Q, H, E, F
    if name == "p^n h^m":
        lhs = normalize((p_,) * n + (h_,) * m)
        rhs = UEAElem()
        for i in range(m + 1):
            rhs = rhs + comb(m, i) * (-1) ** i * n**i * mul(_gpow(h_, m - i), _gpow(p_, n))
        return lhs, rhs
    if name == "q^n h^m":
        lhs = normalize((q_,) * n + (h_,) * m)
        rhs = UEAElem()
        for i in range(m + 1):
            rhs = rhs + comb(m, i) * n**i * mul(_gpow(h_, m - i), _gpow(q_, n))
        return lhs, rhs
    if name == "p f^k":
        k = m
        lhs = normalize((p_,) + (f_,) * k)
        rhs = mul(_gpow(f_, k), _gpow(p_, 1))
        if k:
            rhs = rhs - k * mul(_gpow(f_, k - 1), _gpow(q_, 1))
        return lhs, rhs
    if name == "q e^k":
        k = m
        lhs = normalize((q_,) + (e_,) * k)
        rhs = mul(_gpow(e_, k), _gpow(q_, 1))
        if k:
            rhs = rhs - k * mul(_gpow(e_, k - 1), _gpow(p_, 1))
        return lhs, rhs
    raise ValueError(name)


IDENTITY_NAMES = ("p^n h^m", "q^n h^m", "p f^k", "q e^k")


def verify_uea_identities(max_exp):
    """Check the four power-commutation identities for all exponents <= max_exp.

    Returns a list of :class:`IdentityCheck`; both sides are computed through
    :func:`normalize`.
    """
    if max_exp < 0:
        raise ValueError("max_exp must be >= 0")
    report = []
    for name in IDENTITY_NAMES:
        if name.endswith("h^m"):
            pairs = [(n, m) for n in range(max_exp + 1) for m in range(max_exp + 1)]
        else:
            pairs = [(1, k) for k in range(max_exp + 1)]
        for n, m in pairs:
            lhs, rhs = _identity_sides(name, n, m)
            exps = (n, m) if name.endswith("h^m") else (m,)
            report.append(IdentityCheck(name, exps, lhs == rhs))
    return report
