"""Exact scalars: Gaussian rationals a+bi and prime-field elements.

Real values are kept as ``int`` or ``Fraction`` so that the common real case
runs at native speed; only values with a nonzero imaginary part become
:class:`Gaussian`.  Every helper here accepts the three types interchangeably.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from numbers import Rational

DEFAULT_PRIME = 2**31 - 1


class Gaussian:
    """a + bi with rational a, b and b != 0.

    Do not call the constructor directly when b may vanish; use :func:`gauss`,
    which collapses real results to ``Fraction``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Gaussian):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return Gaussian(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Gaussian):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return Gaussian(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return Gaussian(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            a, b, c, d = self.re, self.im, other.re, other.im
            return gauss(a * c - b * d, a * d + b * c)
        if isinstance(other, Rational):
            if other == 0:
                return Fraction(0)
            return Gaussian(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Gaussian):
            c, d = other.re, other.im
            n = c * c + d * d
            a, b = self.re, self.im
            return gauss((a * c + b * d) / n, (b * c - a * d) / n)
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("Gaussian division by zero")
            return Gaussian(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            n = self.re * self.re + self.im * self.im
            return gauss(other * self.re / n, -other * self.im / n)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** (-k))
        result = Fraction(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


I = Gaussian(0, 1)


def gauss(re, im=0):
    """Build a+bi, returning a ``Fraction`` when the imaginary part is zero."""
    if im == 0:
        return Fraction(re)
    return Gaussian(re, im)


def as_scalar(x):
    """Coerce int / Fraction / Gaussian / complex-with-integral-parts / str."""
    if isinstance(x, (int, Fraction, Gaussian)):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, complex):
        return gauss(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


def field(x):
    """Promote ints to Fraction so that ``/`` stays exact."""
    return Fraction(x) if isinstance(x, int) else x


def conj(x):
    if isinstance(x, Gaussian):
        return Gaussian(x.re, -x.im)
    return x


def real_part(x):
    return x.re if isinstance(x, Gaussian) else Fraction(x)


def imag_part(x):
    return x.im if isinstance(x, Gaussian) else Fraction(0)


def is_real(x):
    return not isinstance(x, Gaussian)


def norm2(x):
    """|x|^2 as a Fraction."""
    if isinstance(x, Gaussian):
        return x.re * x.re + x.im * x.im
    return Fraction(x) * x


def _frac_str(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    """Serialize as ``a/b+c/di``; real values print without the imaginary part."""
    x = as_scalar(x)
    if not isinstance(x, Gaussian):
        return _frac_str(x)
    re_s = _frac_str(x.re)
    im = x.im
    sign = "-" if im < 0 else "+"
    return f"{re_s}{sign}{_frac_str(abs(im))}i"


_NUM = r"\d+(?:/\d+)?"
_SCALAR_RE = _re.compile(
    rf"^\s*(?P<re>[+-]?{_NUM})?\s*(?:(?P<isign>[+-])?\s*(?P<im>{_NUM})?i)?\s*$"
)


def parse_scalar(text):
    """Inverse of :func:`format_scalar`; also accepts ``3``, ``-1/2i``, ``i``."""
    m = _SCALAR_RE.match(text)
    if not m or text.strip() == "":
        raise ValueError(f"malformed scalar {text!r}")
    re_txt, isign, im_txt = m.group("re"), m.group("isign"), m.group("im")
    has_i = text.strip().endswith("i")
    if has_i and re_txt is not None and isign is None and im_txt is None:
        # "-3i" was swallowed as the real part
        return gauss(0, Fraction(re_txt))
    re_val = Fraction(re_txt) if re_txt is not None else Fraction(0)
    if not has_i:
        return re_val
    im_val = Fraction(im_txt) if im_txt is not None else Fraction(1)
    if isign == "-":
        im_val = -im_val
    return gauss(re_val, im_val)


# ---------------------------------------------------------------------------
# prime fields


class GF:
    """Element of the prime field Z/pZ."""

    __slots__ = ("value", "p")

    def __init__(self, value, p=DEFAULT_PRIME):
        self.p = p
        self.value = value % p

    def _coerce(self, other):
        if isinstance(other, GF):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else GF(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return GF(-self.value, self.p)

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return GF(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * GF(o, self.p).inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"GF({self.value}, {self.p})"


def sqrt_minus_one(p):
    """A square root of -1 modulo p, or None when p = 3 (mod 4)."""
    if p % 4 != 1:
        return None
    for a in range(2, p):
        r = pow(a, (p - 1) // 4, p)
        if r * r % p == p - 1:
            return r
    return None


def to_mod_p(x, p=DEFAULT_PRIME, i_root=None):
    """Reduce a Gaussian rational into Z/pZ.

    Imaginary parts need a square root of -1 (``i_root``); the denominator
    must be coprime to p.
    """
    x = as_scalar(x)
    if isinstance(x, Gaussian):
        if i_root is None:
            raise ValueError(f"GF({p}) has no square root of -1")
        return (to_mod_p(x.re, p) + i_root * to_mod_p(x.im, p)) % p
    q = Fraction(x)
    if q.denominator % p == 0:
        raise ZeroDivisionError("denominator not invertible mod p")
    return q.numerator * pow(q.denominator, -1, p) % p
