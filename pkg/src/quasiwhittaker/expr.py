"""Surface syntax for U(S) elements.

Grammar (whitespace is insignificant, juxtaposition is not multiplication)::

    expr     := sign? term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := rational | gen ('^' uint)?
    gen      := 'e' | 'h' | 'f' | 'p' | 'q' | 'z'
    rational := uint ('/' uint)?

The optional leading sign lets printed output be read back.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExprSyntaxError, ZeroDenominator
from .uea import LETTERS, UEAElem, normalize


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    factors: tuple  # ((letter, exponent), ...)


@dataclass(frozen=True)
class ExprAst:
    terms: tuple

    def to_uea(self):
        out = UEAElem()
        for t in self.terms:
            word = tuple(letter for letter, n in t.factors for _ in range(n))
            out = out + normalize(word, t.coeff)
        return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def offset(self, i=None):
        i = self.i if i is None else i
        return len(self.text[:i].encode("utf-8"))

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else None

    def fail(self, expected):
        raise ExprSyntaxError(self.offset(), expected, self.peek())

    def uint(self):
        self.skip()
        start = self.i
        while self.i < len(self.text) and self.text[self.i] in "0123456789":
            self.i += 1
        if start == self.i:
            self.fail({"integer"})
        return int(self.text[start : self.i])

    def factor(self):
        ch = self.peek()
        if ch is not None and ch in LETTERS:
            self.i += 1
            exp = 1
            if self.peek() == "^":
                self.i += 1
                exp = self.uint()
            return ("gen", ch, exp)
        if ch is not None and ch.isdigit():
            num = self.uint()
            if self.peek() == "/":
                self.i += 1
                self.skip()
                at = self.offset()
                den = self.uint()
                if den == 0:
                    raise ZeroDenominator(at)
                return ("num", Fraction(num, den))
            return ("num", Fraction(num))
        self.fail({"integer", "generator"})

    def term(self, sign):
        coeff = Fraction(sign)
        factors = []
        while True:
            fac = self.factor()
            if fac[0] == "num":
                coeff *= fac[1]
            elif fac[2]:
                factors.append((fac[1], fac[2]))
            if self.peek() != "*":
                break
            self.i += 1
        return Term(coeff, tuple(factors))

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.i += 1
        terms = [self.term(sign)]
        while True:
            ch = self.peek()
            if ch is None:
                break
            if ch not in "+-":
                self.fail({"'+'", "'-'", "'*'", "end of input"})
            self.i += 1
            terms.append(self.term(-1 if ch == "-" else 1))
        return ExprAst(tuple(terms))


def parse_expr(text):
    """Parse an expression; raises ExprSyntaxError or ZeroDenominator."""
    return _Parser(text).expr()


def _fmt_rat(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_expr(ast):
    out = []
    for idx, t in enumerate(ast.terms):
        body = "*".join(l if n == 1 else f"{l}^{n}" for l, n in t.factors)
        mag = abs(t.coeff)
        if not body:
            txt = _fmt_rat(mag)
        elif mag == 1:
            txt = body
        else:
            txt = f"{_fmt_rat(mag)}*{body}"
        neg = t.coeff < 0
        if idx == 0:
            out.append(("-" if neg else "") + txt)
        else:
            out.append((" - " if neg else " + ") + txt)
    return "".join(out)


def parse_uea(text):
    return parse_expr(text).to_uea()
