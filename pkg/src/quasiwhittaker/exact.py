"""Exact scalars, univariate polynomials and rational linear algebra.

Scalars are :class:`fractions.Fraction` throughout.  Polynomials are dense
coefficient tuples (lowest degree first).  The nullspace solver uses
fraction-free (Bareiss) elimination on integer-scaled rows; :func:`rank` is
an independent plain Gauss-Jordan pass used to cross-check it.
"""

from fractions import Fraction
from functools import reduce
from math import lcm

from .errors import DivisionByZeroPoly, Empty, NonRational, NotCoprime

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rat(x):
    """Coerce ints, Fractions and strings like ``"-3/4"`` to a Fraction.

    Floats are refused: the ground field is the rationals and a float has
    already lost exactness.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise NonRational(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise NonRational(f"not an exact rational: {x!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise NonRational(f"not an exact rational: {x!r}") from exc
    raise NonRational(f"not an exact rational: {x!r}")


def rat_str(c):
    """``num/den`` with the denominator always written."""
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Dense univariate polynomial over the rationals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def from_roots(cls, roots):
        """Monic product of ``(x - r)**m`` over ``(r, m)`` pairs."""
        out = cls((1,))
        for r, m in roots:
            lin = cls((-as_rat(r), 1))
            for _ in range(m):
                out = out * lin
        return out

    @property
    def degree(self):
        # zero polynomial has degree -1
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def monic(self):
        if self.is_zero():
            raise DivisionByZeroPoly("zero polynomial has no monic form")
        lc = self.lc()
        return Poly(c / lc for c in self.coeffs)

    def __call__(self, x):
        acc = ZERO if not isinstance(x, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly((other,))

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rat(other)
            return Poly(c * a for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly((1,))
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, d):
        if d.is_zero():
            raise DivisionByZeroPoly("division by the zero polynomial")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - d.degree, 0)
        lc = d.lc()
        for k in range(len(rem) - 1, d.degree - 1, -1):
            c = rem[k]
            if not c:
                continue
            t = c / lc
            shift = k - d.degree
            q[shift] = t
            for i, dc in enumerate(d.coeffs):
                rem[shift + i] -= t * dc
        return Poly(q), Poly(rem[: d.degree] if d.degree > 0 else ())

    def __mod__(self, d):
        return divmod(self, d)[1]

    def __floordiv__(self, d):
        return divmod(self, d)[0]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == Poly((other,)).coeffs
        except NonRational:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def poly_rem(a, d):
    """Remainder of ``a`` modulo ``d``; raises DivisionByZeroPoly for d = 0."""
    return a % d


def poly_xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lc()
    return r0 * (1 / lc), s0 * (1 / lc), t0 * (1 / lc)


def poly_gcd(a, b):
    return poly_xgcd(a, b)[0]


def poly_bezout(factors):
    """Bezout certificate: polynomials r_i with sum(r_i * f_i) == 1.

    The factors must have no common nonconstant divisor.  The result is
    normalised so that deg r_i < deg of the product of the other factors,
    and is checked by direct polynomial arithmetic before returning.
    """
    factors = [f if isinstance(f, Poly) else Poly(f) for f in factors]
    if not factors:
        raise Empty("poly_bezout needs at least one factor")
    if any(f.is_zero() for f in factors):
        raise NotCoprime("zero factor")
    k = len(factors)
    if k == 1:
        if not factors[0].is_constant():
            raise NotCoprime(f"single nonconstant factor {factors[0]} is not invertible")
        return [Poly((1 / factors[0].lc(),))]

    # running combination g = sum(coef_i * f_i)
    g = factors[0]
    coef = [Poly((1,))] + [Poly()] * (k - 1)
    for j in range(1, k):
        g2, s, t = poly_xgcd(g, factors[j])
        coef = [s * c for c in coef]
        coef[j] = coef[j] + t
        g = g2
    if not g.is_constant():
        raise NotCoprime(f"common factor {g}")
    inv = 1 / g.lc()
    coef = [c * inv for c in coef]

    # push quotients into the last slot so each r_i is reduced
    others = []
    for i in range(k):
        prod = Poly((1,))
        for j, f in enumerate(factors):
            if j != i:
                prod = prod * f
        others.append(prod)
    for i in range(k - 1):
        q, r = divmod(coef[i], others[i])
        coef[i] = r
        coef[-1] = coef[-1] + q * others[-1]

    check = Poly()
    for r, f in zip(coef, factors):
        check = check + r * f
    if check != Poly((1,)):
        raise NotCoprime("internal: Bezout certificate failed verification")
    return coef


class RatMatrix:
    """Dense matrix of Fractions (row-major)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        self.entries = [[as_rat(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        for row in self.entries:
            if len(row) != cols:
                raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def apply(self, v):
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(row, v)), ZERO) for row in self.entries)

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"


def _integer_rows(m):
    out = []
    for row in m.entries:
        den = reduce(lcm, (x.denominator for x in row), 1)
        out.append([int(x * den) for x in row])
    return out


def _bareiss_echelon(a, cols):
    """In-place fraction-free row echelon; returns the pivot columns."""
    nrows = len(a)
    pivots = []
    prev = 1
    r = 0
    for c in range(cols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prc = a[r][c]
        row_r = a[r]
        for i in range(r + 1, nrows):
            row_i = a[i]
            aic = row_i[c]
            for j in range(c + 1, cols):
                q, rem = divmod(prc * row_i[j] - aic * row_r[j], prev)
                assert not rem, "Bareiss division must be exact"
                row_i[j] = q
            row_i[c] = 0
        prev = prc
        pivots.append(c)
        r += 1
    return pivots


def nullspace(m):
    """Exact basis of the right nullspace of a :class:`RatMatrix`.

    One basis vector per free column, with that free coordinate equal to 1
    and the other free coordinates 0.
    """
    if not isinstance(m, RatMatrix):
        m = RatMatrix(m)
    cols = m.cols
    a = _integer_rows(m)
    pivots = _bareiss_echelon(a, cols)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    basis = []
    for fc in free:
        v = [ZERO] * cols
        v[fc] = ONE
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = a[r]
            s = sum((row[j] * v[j] for j in range(pc + 1, cols) if row[j] and v[j]), ZERO)
            v[pc] = -s / row[pc]
        basis.append(tuple(v))
    return basis


def rank(m):
    """Rank by plain Gauss-Jordan over Fractions (independent of Bareiss)."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix(m)
    a = [list(row) for row in m.entries]
    rk = 0
    for c in range(m.cols):
        piv = next((i for i in range(rk, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = 1 / a[rk][c]
        a[rk] = [x * inv for x in a[rk]]
        for i in range(len(a)):
            if i != rk and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[rk])]
        rk += 1
    return rk


class Echelon:
    """Incremental row echelon form over sparse vectors ``{key: Fraction}``.

    ``order`` maps a key to a sortable value; each stored row is indexed by
    its largest key under that order, so the rows whose leading key lies in
    a down-closed set span exactly the intersection with that set.
    """

    def __init__(self, order):
        self.order = order
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def _lead(self, vec):
        return max(vec, key=self.order)

    def reduce(self, vec):
        vec = {k: v for k, v in vec.items() if v}
        while vec:
            lead = self._lead(vec)
            row = self.rows.get(lead)
            if row is None:
                return vec
            c = vec[lead]
            for k, v in row.items():
                nv = vec.get(k, ZERO) - c * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec

    def add(self, vec):
        """Insert ``vec``; returns the new row, or None if already spanned."""
        red = self.reduce(vec)
        if not red:
            return None
        lead = self._lead(red)
        inv = 1 / red[lead]
        row = {k: v * inv for k, v in red.items()}
        self.rows[lead] = row
        return row

    def contains(self, vec):
        return not self.reduce(vec)

    def leads(self):
        return list(self.rows)
