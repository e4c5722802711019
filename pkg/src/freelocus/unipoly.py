"""Univariate polynomials over Q(i): gcd, square-free part, Sturm chains."""

from __future__ import annotations

from fractions import Fraction

from .scalars import Gaussian, as_scalar, conj, field, format_scalar


class ZeroPolynomial(ValueError):
    pass


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


class UniPoly:
    """Polynomial in t with coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = tuple(_trim(as_scalar(c) for c in coeffs))

    @classmethod
    def t(cls):
        return cls([0, 1])

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def from_roots(cls, roots):
        p = cls([1])
        for r in roots:
            p = p * cls([-as_scalar(r), 1])
        return p

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_real(self):
        return not any(isinstance(c, Gaussian) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly([{', '.join(format_scalar(c) for c in self.coeffs)}])"

    def to_json(self):
        return [format_scalar(c) for c in self.coeffs]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = [field(c) for c in self.coeffs]
        d = other.degree
        lead_inv = 1 / field(other.lead())
        q = [Fraction(0)] * max(len(r) - d, 1)
        while len(r) - 1 >= d and r:
            k = len(r) - 1 - d
            c = r[-1] * lead_inv
            q[k] = c
            for i, b in enumerate(other.coeffs):
                r[k + i] = r[k + i] - c * b
            r = _trim(r)
        return UniPoly(q), UniPoly(r)

    def __floordiv__(self, other):
        return self.divmod(_lift(other))[0]

    def __mod__(self, other):
        return self.divmod(_lift(other))[1]

    def divides(self, other):
        """True when self | other."""
        return other.divmod(self)[1].is_zero()

    def monic(self):
        if self.is_zero():
            return self
        inv = 1 / field(self.lead())
        return UniPoly([c * inv for c in self.coeffs])

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def conj(self):
        """Coefficient-wise conjugate, i.e. the polynomial t -> conj(p(conj t))."""
        return UniPoly([conj(c) for c in self.coeffs])

    def shift_scale(self, a, b):
        """p(a + b t)."""
        out = UniPoly()
        lin = UniPoly([a, b])
        for c in reversed(self.coeffs):
            out = out * lin + UniPoly([c])
        return out


def _lift(x):
    return x if isinstance(x, UniPoly) else UniPoly([x])


def gcd(p, q):
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree_part(p):
    """p / gcd(p, p'), made monic."""
    if p.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if p.degree == 0:
        return UniPoly([1])
    g = gcd(p, p.derivative())
    return (p // g).monic()


# ---------------------------------------------------------------------------
# Sturm sequences (rational coefficients only)


def _require_real(p):
    if not p.is_real():
        raise ValueError("Sturm chains need real rational coefficients")


def sturm_chain(p):
    _require_real(p)
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        r = chain[-2].divmod(chain[-1])[1]
        chain.append(-r)
    chain.pop()
    return chain


def _sign(x):
    return (x > 0) - (x < 0)


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _signs_at(chain, x):
    if x == float("inf"):
        return [_sign(q.lead()) for q in chain]
    if x == float("-inf"):
        return [_sign(q.lead()) * (-1 if q.degree % 2 else 1) for q in chain]
    return [_sign(q(x)) for q in chain]


def sturm_real_root_count(p, interval=None):
    """Number of distinct real roots of p, optionally restricted to [a, b].

    Roots at the interval endpoints are counted.
    """
    if p.is_zero():
        raise ZeroPolynomial("root count of the zero polynomial")
    _require_real(p)
    sf = squarefree_part(p)
    if sf.degree == 0:
        return 0
    chain = sturm_chain(sf)
    if interval is None:
        a, b = float("-inf"), float("inf")
    else:
        a, b = interval
        a = a if a in (float("inf"), float("-inf")) else Fraction(a)
        b = b if b in (float("inf"), float("-inf")) else Fraction(b)
        if a > b:
            return 0
    count = _variations(_signs_at(chain, a)) - _variations(_signs_at(chain, b))
    if a not in (float("-inf"),) and sf(a) == 0:
        count += 1
    return count


def root_bound(p):
    """Cauchy bound: every root has |t| <= bound (rational)."""
    lead = abs(Fraction(p.lead()))
    return 1 + max((abs(Fraction(c)) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_root(p):
    """A rational interval [a, b] containing exactly one real root of p.

    Returns None when p has no real root.
    """
    if sturm_real_root_count(p) == 0:
        return None
    sf = squarefree_part(p)
    bound = root_bound(sf)
    a, b = -bound, bound
    while True:
        if sf(a) == 0:
            return (a, a)
        mid = (a + b) / 2
        left = sturm_real_root_count(sf, (a, mid))
        if left == 1 and sturm_real_root_count(sf, (a, b)) == 1:
            return (a, b)
        if left >= 1:
            b = mid
        else:
            a = mid
        if sturm_real_root_count(sf, (a, b)) == 1:
            return (a, b)


def rational_roots(p):
    """Exact roots of p lying in Q(i) among its linear factors (degree-1 gcd pieces only).

    Only roots reachable cheaply are returned: those of the linear polynomial
    obtained when p itself is linear, plus integer/rational candidates from
    the rational root theorem for rational p.
    """
    if p.degree <= 0:
        return []
    if p.degree == 1:
        return [-field(p.coeffs[0]) / p.coeffs[1]]
    if not p.is_real():
        return []
    from math import lcm as _lcm

    den = _lcm(*(Fraction(c).denominator for c in p.coeffs))
    ints = [int(Fraction(c) * den) for c in p.coeffs]
    while ints and ints[0] == 0:
        ints.pop(0)
    roots = [Fraction(0)] if ints != [int(Fraction(c) * den) for c in p.coeffs] else []
    a0, an = abs(ints[0]), abs(ints[-1])
    if a0 > 10**6 or an > 10**6:
        return roots
    divs = lambda n: [d for d in range(1, n + 1) if n % d == 0]
    for num in divs(a0):
        for dd in divs(an):
            for s in (1, -1):
                r = Fraction(s * num, dd)
                if r not in roots and p(r) == 0:
                    roots.append(r)
    return roots


def interpolate(xs, ys):
    """Newton interpolation through (xs[k], ys[k]); exact."""
    xs = [field(x) for x in xs]
    coef = [field(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        p = p * UniPoly([-xs[i], 1]) + UniPoly([coef[i]])
    return p
