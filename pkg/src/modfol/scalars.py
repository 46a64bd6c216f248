"""Exact scalar arithmetic: rationals, real quadratic extensions a + b*sqrt(d),
and the biquadratic tower Q(sqrt2, sqrt3) with basis {1, sqrt2, sqrt3, sqrt6}.

Everything here is immutable and exact.  The tower is deliberately small:
Q, Q(sqrt2), Q(sqrt3), Q(sqrt2,sqrt3), plus Q(sqrt(-1)) for one covering
identity that can also be arranged to stay rational.  Values print and parse
in a fixed text grammar, e.g. ``-11/2 + 7/3*sqrt(3)``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product


class ScalarError(ArithmeticError):
    pass


def _q(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ScalarError(f"not a rational: {x!r}")


class QuadExt:
    """a + b*sqrt(d) with d a squarefree integer (d may be negative, e.g. -1)."""

    __slots__ = ("d", "a", "b")

    def __init__(self, d, a, b=0):
        d = int(d)
        if d in (0, 1):
            raise ScalarError("radicand must not be 0 or 1")
        self.d = d
        self.a = _q(a)
        self.b = _q(b)

    # -- coercion helpers -------------------------------------------------
    def _lift(self, other):
        if isinstance(other, BiQuadExt):
            return BiQuadExt._coerce(self), other
        if isinstance(other, QuadExt):
            if other.d != self.d and other.b != 0 and self.b != 0:
                if {self.d, other.d} <= {2, 3}:
                    return BiQuadExt._coerce(self), BiQuadExt._coerce(other)
                raise ScalarError(f"incompatible radicands {self.d} and {other.d}")
            d = self.d if self.b != 0 or other.b == 0 else other.d
            return QuadExt(d, self.a, self.b if self.d == d else 0), \
                QuadExt(d, other.a, other.b if other.d == d else 0)
        return self, QuadExt(self.d, _q(other))

    def __add__(self, other):
        x, y = self._lift(other)
        if isinstance(x, BiQuadExt):
            return x + y
        return QuadExt(x.d, x.a + y.a, x.b + y.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(self.d, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadExt) else QuadExt(self.d, -_q(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        x, y = self._lift(other)
        if isinstance(x, BiQuadExt):
            return x * y
        return QuadExt(x.d, x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a)

    __rmul__ = __mul__

    def inv(self):
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise ScalarError("division by zero")
        return QuadExt(self.d, self.a / n, -self.b / n)

    def __truediv__(self, other):
        x, y = self._lift(other)
        return x * y.inv()

    def __rtruediv__(self, other):
        return QuadExt(self.d, _q(other)) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, BiQuadExt):
            return BiQuadExt._coerce(self) == other
        if isinstance(other, QuadExt):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            x, y = self._lift(other)
            if isinstance(x, BiQuadExt):
                return x == y
            return x.a == y.a and x.b == y.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.d, self.a, self.b))

    def conj(self):
        return QuadExt(self.d, self.a, -self.b)

    def norm(self):
        """Field norm a^2 - d*b^2 (a rational)."""
        return self.a * self.a - self.d * self.b * self.b

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def sign_real(self):
        """Sign of the real value under sqrt(d) > 0.  Requires d > 0."""
        if self.d < 0:
            raise ScalarError("not a real embedding")
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        # sign(a + b sqrt d): compare a^2 and d b^2
        sa = 1 if self.a > 0 else -1
        sb = 1 if self.b > 0 else -1
        if sa == sb:
            return sa
        return sa if self.a * self.a > self.d * self.b * self.b else sb

    def __repr__(self):
        return f"QuadExt({self.d}, {self.a}, {self.b})"

    def __str__(self):
        return format_scalar(self)


class BiQuadExt:
    """c0 + c2*sqrt(2) + c3*sqrt(3) + c6*sqrt(6)."""

    __slots__ = ("c",)

    def __init__(self, c0, c2=0, c3=0, c6=0):
        self.c = (_q(c0), _q(c2), _q(c3), _q(c6))

    @property
    def c0(self):
        return self.c[0]

    @property
    def c2(self):
        return self.c[1]

    @property
    def c3(self):
        return self.c[2]

    @property
    def c6(self):
        return self.c[3]

    @staticmethod
    def _coerce(x):
        if isinstance(x, BiQuadExt):
            return x
        if isinstance(x, QuadExt):
            if x.d == 2:
                return BiQuadExt(x.a, x.b, 0, 0)
            if x.d == 3:
                return BiQuadExt(x.a, 0, x.b, 0)
            if x.b == 0:
                return BiQuadExt(x.a)
            raise ScalarError(f"sqrt({x.d}) does not embed in Q(sqrt2,sqrt3)")
        return BiQuadExt(_q(x))

    def __add__(self, other):
        o = self._coerce(other)
        return BiQuadExt(*(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return BiQuadExt(*(-a for a in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        a0, a2, a3, a6 = self.c
        b0, b2, b3, b6 = o.c
        return BiQuadExt(
            a0 * b0 + 2 * a2 * b2 + 3 * a3 * b3 + 6 * a6 * b6,
            a0 * b2 + a2 * b0 + 3 * (a3 * b6 + a6 * b3),
            a0 * b3 + a3 * b0 + 2 * (a2 * b6 + a6 * b2),
            a0 * b6 + a6 * b0 + a2 * b3 + a3 * b2,
        )

    __rmul__ = __mul__

    def conj2(self):
        """sqrt2 -> -sqrt2."""
        return BiQuadExt(self.c0, -self.c2, self.c3, -self.c6)

    def conj3(self):
        """sqrt3 -> -sqrt3."""
        return BiQuadExt(self.c0, self.c2, -self.c3, -self.c6)

    def inv(self):
        # clear sqrt2, then sqrt3
        p = self * self.conj2()            # lives in Q(sqrt3)
        n = p * p.conj3()                  # rational
        if n.c0 == 0:
            raise ScalarError("division by zero")
        return self.conj2() * p.conj3() * BiQuadExt(1 / n.c0)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ScalarError:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        if self.c[1] == self.c[2] == self.c[3] == 0:
            return hash(self.c[0])
        return hash(("biq", self.c))

    def is_zero(self):
        return all(a == 0 for a in self.c)

    def sign_real(self):
        """Sign under the embedding sqrt2, sqrt3 > 0, by interval bisection-free
        exact reasoning: compare via squaring against the Q(sqrt3) part."""
        # write self = u + v*sqrt2 with u = c0 + c3 sqrt3, v = c2 + c6 sqrt3
        u = QuadExt(3, self.c0, self.c3)
        v = QuadExt(3, self.c2, self.c6)
        su = u.sign_real() if not u.is_zero() else 0
        sv = v.sign_real() if not v.is_zero() else 0
        if sv == 0:
            return su
        if su == 0:
            return sv
        if su == sv:
            return su
        cmp = (u * u - 2 * v * v)
        s = cmp.sign_real()
        return su if s > 0 else (sv if s < 0 else 0)

    def __repr__(self):
        return f"BiQuadExt{self.c}"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------------------
# generic operations

TOWER_LEVELS = ("Q", "Q(sqrt2)", "Q(sqrt3)", "Q(sqrt2,sqrt3)", "Q(sqrt-1)")


def ring_arith(op, x, y=None):
    """Dispatcher used by the text-level interfaces; normal code uses operators."""
    if op == "neg":
        return -_as_scalar(x)
    if op == "inv":
        v = _as_scalar(x)
        if isinstance(v, Fraction):
            if v == 0:
                raise ScalarError("division by zero")
            return 1 / v
        return v.inv()
    a, b = _as_scalar(x), _as_scalar(y)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if isinstance(b, Fraction) and b == 0:
            raise ScalarError("division by zero")
        return a / b
    raise ScalarError(f"unknown op {op!r}")


def _as_scalar(x):
    if isinstance(x, (QuadExt, BiQuadExt, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise ScalarError(f"not a scalar: {x!r}")


def galois_conjugates(x):
    """All embeddings of x into the real (or complex, for d<0) numbers,
    as a tuple of scalars at the same tower level."""
    x = _as_scalar(x)
    if isinstance(x, Fraction):
        return (x,)
    if isinstance(x, QuadExt):
        return (x, x.conj())
    return (x, x.conj2(), x.conj3(), x.conj2().conj3())


def totally_positive(x):
    """True iff every real embedding of x is strictly positive."""
    x = _as_scalar(x)
    if isinstance(x, Fraction):
        return x > 0
    if isinstance(x, QuadExt) and x.d < 0:
        raise ScalarError("total positivity needs a totally real field")
    return all(c.sign_real() > 0 for c in galois_conjugates(x))


def coerce(x, level):
    """Embed x into the named tower level; down-coercions must be lossless."""
    x = _as_scalar(x)
    if level == "Q":
        if isinstance(x, Fraction):
            return x
        if isinstance(x, QuadExt) and x.b == 0:
            return x.a
        if isinstance(x, BiQuadExt) and x.c[1] == x.c[2] == x.c[3] == 0:
            return x.c0
        raise ScalarError(f"{x} does not lie in Q")
    m = re.fullmatch(r"Q\(sqrt(-?\d+)\)", level)
    if m:
        d = int(m.group(1))
        if isinstance(x, Fraction):
            return QuadExt(d, x)
        if isinstance(x, QuadExt):
            if x.d == d or x.b == 0:
                return QuadExt(d, x.a, x.b if x.d == d else 0)
            raise ScalarError(f"{x} does not lie in {level}")
        if isinstance(x, BiQuadExt):
            if d == 2 and x.c[2] == x.c[3] == 0:
                return QuadExt(2, x.c0, x.c2)
            if d == 3 and x.c[1] == x.c[3] == 0:
                return QuadExt(3, x.c0, x.c3)
            raise ScalarError(f"{x} does not lie in {level}")
    if level == "Q(sqrt2,sqrt3)":
        return BiQuadExt._coerce(x)
    raise ScalarError(f"unknown tower level {level!r}")


# ---------------------------------------------------------------------------
# text grammar:  p/q | p/q + r/s*sqrt(d) | c0 + c2*sqrt(2) + c3*sqrt(3) + c6*sqrt(6)

_TERM = re.compile(
    r"\s*(?P<sign>[+-]?)\s*"
    r"(?:(?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*)?)?"
    r"(?:sqrt\(\s*(?P<rad>-?\d+)\s*\))?"
)


def parse_scalar(text):
    """Parse the scalar grammar; returns Fraction, QuadExt or BiQuadExt
    (the smallest level containing the written radicands)."""
    s = text.strip()
    if not s:
        raise ScalarError("empty scalar")
    pos, terms = 0, []
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ScalarError(f"cannot parse scalar {text!r} at {s[pos:]!r}")
        if m.group("coef") is None and m.group("rad") is None:
            raise ScalarError(f"cannot parse scalar {text!r} at {s[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        rad = int(m.group("rad")) if m.group("rad") else None
        terms.append((sign * coef, rad))
        pos = m.end()
    rads = sorted({r for _, r in terms if r is not None})
    if not rads:
        return sum((c for c, _ in terms), Fraction(0))
    if set(rads) <= {2, 3, 6}:
        if rads in ([2], [3]) :
            d = rads[0]
            a = sum((c for c, r in terms if r is None), Fraction(0))
            b = sum((c for c, r in terms if r == d), Fraction(0))
            return QuadExt(d, a, b)
        out = BiQuadExt(0)
        slot = {None: 0, 2: 1, 3: 2, 6: 3}
        coeffs = [Fraction(0)] * 4
        for c, r in terms:
            coeffs[slot[r]] += c
        return BiQuadExt(*coeffs)
    if len(rads) == 1:
        d = rads[0]
        a = sum((c for c, r in terms if r is None), Fraction(0))
        b = sum((c for c, r in terms if r == d), Fraction(0))
        return QuadExt(d, a, b)
    raise ScalarError(f"unsupported radicand mix {rads} in {text!r}")


def format_scalar(x):
    """Canonical printer, inverse of parse_scalar."""
    x = _as_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadExt):
        parts = [(x.a, None), (x.b, x.d)]
    else:
        parts = list(zip(x.c, (None, 2, 3, 6)))
    pieces = []
    for c, r in parts:
        if c == 0:
            continue
        body = str(abs(c)) if r is None else (
            f"sqrt({r})" if abs(c) == 1 else f"{abs(c)}*sqrt({r})")
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces) if pieces else "0"


# convenient constants
SQRT2 = QuadExt(2, 0, 1)
SQRT3 = QuadExt(3, 0, 1)
SQRT6 = BiQuadExt(0, 0, 0, 1)
XI = BiQuadExt(0, Fraction(1, 2), 0, Fraction(1, 2))  # 2*cos(pi/12) = (sqrt6+sqrt2)/2
