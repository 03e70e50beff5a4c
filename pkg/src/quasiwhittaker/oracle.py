"""Oscillator realization of S by differential operators in one variable.

p -> d/dx, q -> x, z -> 1, e -> (1/2) d^2, f -> -(1/2) x^2,
h -> -x d/dx - 1/2.

This realization is independent of the rewriting kernel and is used only
to cross-check U(S) arithmetic.  It does not model quasi-Whittaker modules
(z acts as 1 here, as 0 there).
"""

from collections import defaultdict
from fractions import Fraction
from math import comb, perm

from .exact import Poly, ZERO
from .uea import UEAElem, gen_index, mono_word


class DiffOp:
    """Sum of c * x^a (d/dx)^b, keyed by (a, b)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def identity(cls):
        return cls({(0, 0): 1})

    def __add__(self, other):
        out = defaultdict(Fraction, self.terms)
        for k, v in other.terms.items():
            out[k] += v
        return DiffOp(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return DiffOp({k: c * v for k, v in self.terms.items()})

    def compose(self, other):
        """self o other."""
        out = defaultdict(Fraction)
        for (a, b), c1 in self.terms.items():
            for (c, e), c2 in other.terms.items():
                # d^b x^c = sum_k C(b,k) c!/(c-k)! x^(c-k) d^(b-k)
                for k in range(min(b, c) + 1):
                    out[(a + c - k, b - k + e)] += c1 * c2 * comb(b, k) * perm(c, k)
        return DiffOp(out)

    __matmul__ = compose

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.terms == other.terms

    def __repr__(self):
        return f"DiffOp({dict(sorted(self.terms.items()))})"


_HALF = Fraction(1, 2)
_REALIZATION = {
    "p": DiffOp({(0, 1): 1}),
    "q": DiffOp({(1, 0): 1}),
    "z": DiffOp({(0, 0): 1}),
    "e": DiffOp({(0, 2): _HALF}),
    "f": DiffOp({(2, 0): -_HALF}),
    "h": DiffOp({(1, 1): -1, (0, 0): -_HALF}),
}


def realize(g):
    return _REALIZATION["ehfpqz"[gen_index(g)]]


def realize_word(word):
    op = DiffOp.identity()
    for g in word:
        op = op.compose(realize(g))
    return op


def realize_elem(u):
    """Realize a U(S) element, or a list of ``(coeff, word)`` pairs."""
    out = DiffOp()
    if isinstance(u, UEAElem):
        items = [(c, mono_word(m)) for m, c in u.terms.items()]
    else:
        items = u
    for c, word in items:
        out = out + realize_word(word).scale(Fraction(c))
    return out


def apply(op, n):
    """Apply an operator to x^n, returning a Poly."""
    coeffs = defaultdict(Fraction)
    for (a, b), c in op.terms.items():
        if b > n:
            continue
        coeffs[n - b + a] += c * perm(n, b)
    deg = max(coeffs, default=-1)
    return Poly([coeffs.get(i, ZERO) for i in range(deg + 1)])


def agree_on(op1, op2, degree_bound):
    return all(apply(op1, n) == apply(op2, n) for n in range(degree_bound + 1))


def cross_check(u, degree_bound=8):
    """Compare the realization of the normalized form against direct composition.

    ``u`` is an unnormalized expression: a list of ``(coeff, word)`` pairs,
    or a single word.
    """
    from .uea import normalize

    if isinstance(u, (str, tuple)) or (isinstance(u, list) and u and not isinstance(u[0], tuple)):
        u = [(1, tuple(u))]
    normal = UEAElem()
    for c, word in u:
        normal = normal + normalize(word, c)
    return agree_on(realize_elem(normal), realize_elem(u), degree_bound)
