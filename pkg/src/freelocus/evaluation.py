"""Evaluation of matrix polynomials, determinants along lines, randomized
fullness/unit tests, locus degree estimates and a small symbolic oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .freealg import (
    Y,
    YSTAR,
    as_matrix_poly,
    evaluate_map,
    letter,
    letter_is_star,
    letter_var,
)
from .linalg import Matrix, block_diag, det_mod_p, matmul_mod_p
from .scalars import DEFAULT_PRIME, Gaussian, gauss, to_mod_p
from .unipoly import UniPoly, interpolate


class ArityMismatch(ValueError):
    pass


class ModeMismatch(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class MatrixTuple:
    """k square matrices of size n.

    In star mode ``x_j^*`` evaluates to ``X_j^*``; in free mode it evaluates to
    the independent matrix ``ys[j-1]``.  ``slack`` optionally carries values
    for y and y^* (free mode for the slack pair).
    """

    xs: tuple
    ys: tuple | None = None
    star: bool = True
    slack: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        if self.ys is not None:
            object.__setattr__(self, "ys", tuple(self.ys))
        sizes = {m.shape for m in self.xs + (self.ys or ())}
        if any(r != c for r, c in sizes) or len({r for r, _ in sizes}) > 1:
            raise ValueError("matrix tuple entries must be square of equal size")

    @property
    def n(self):
        return self.xs[0].nrows if self.xs else (self.slack[0].nrows if self.slack else 1)

    @property
    def k(self):
        return len(self.xs)

    def letter_values(self):
        vals = {}
        for j, m in enumerate(self.xs, start=1):
            vals[letter(j)] = m
            if self.star:
                vals[letter(j, True)] = m.H
        if not self.star and self.ys is not None:
            for j, m in enumerate(self.ys, start=1):
                vals[letter(j, True)] = m
        if self.slack is not None:
            vals[Y], vals[YSTAR] = self.slack
        return vals

    def direct_sum(self, other):
        ys = None
        if self.ys is not None and other.ys is not None:
            ys = tuple(block_diag(a, b) for a, b in zip(self.ys, other.ys))
        return MatrixTuple(tuple(block_diag(a, b) for a, b in zip(self.xs, other.xs)), ys, self.star)

    def padded(self, k):
        """Extend with zero matrices up to arity k."""
        if self.k >= k:
            return self
        z = Matrix.zeros(self.n)
        return MatrixTuple(self.xs + (z,) * (k - self.k), self.ys, self.star, self.slack)

    def to_json(self):
        out = {"n": self.n, "mode": "star" if self.star else "free", "X": [m.to_json() for m in self.xs]}
        if self.ys is not None:
            out["Y"] = [m.to_json() for m in self.ys]
        return out


@dataclass(frozen=True)
class AffineLine:
    """X(t) = X0 + t X1."""

    base: MatrixTuple
    direction: MatrixTuple

    def at(self, t):
        xs = tuple(a + b.scale(t) for a, b in zip(self.base.xs, self.direction.xs))
        ys = None
        if self.base.ys is not None:
            ys = tuple(a + b.scale(t) for a, b in zip(self.base.ys, self.direction.ys))
        return MatrixTuple(xs, ys, self.base.star)

    @property
    def n(self):
        return self.base.n

    def to_json(self):
        return {"base": self.base.to_json(), "direction": self.direction.to_json()}


def _check_compat(f, X):
    if f.num_vars() > X.k:
        raise ArityMismatch(f"polynomial has {f.num_vars()} variables, tuple has arity {X.k}")
    ls = f.letters()
    if any(letter_var(a) == 0 for a in ls) and X.slack is None:
        raise ModeMismatch("slack letters need slack values")
    if not X.star and X.ys is None and any(letter_is_star(a) and letter_var(a) > 0 for a in ls):
        raise ModeMismatch("free evaluation of starred letters needs the Y components")


def evaluate(f, X):
    """f(X) = sum_w f_w (x) w(X), an exact (delta n) x (delta n) matrix."""
    f = as_matrix_poly(f)
    _check_compat(f, X)
    return evaluate_map(f, X.letter_values(), X.n)


def det_at(f, X):
    return evaluate(f, X).det()


# ---------------------------------------------------------------------------
# prime-field backend


def evaluate_mod_p(f, X, p=DEFAULT_PRIME):
    """f(X) reduced mod p, as a list of int rows.  Needs rational data when
    p = 3 (mod 4)."""
    f = as_matrix_poly(f)
    _check_compat(f, X)
    n = X.n
    vals = {a: [[to_mod_p(x, p) for x in r] for r in m.rows] for a, m in X.letter_values().items()}
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    cache = {(): ident}

    def value(w):
        v = cache.get(w)
        if v is None:
            v = matmul_mod_p(value(w[:-1]), vals[w[-1]], p)
            cache[w] = v
        return v

    r, c = f.nrows, f.ncols
    out = [[0] * (c * n) for _ in range(r * n)]
    for a in range(r):
        for b in range(c):
            for w, coef in f.entries[a][b].terms.items():
                cm = to_mod_p(coef, p)
                m = value(w)
                for i in range(n):
                    for j in range(n):
                        out[a * n + i][b * n + j] = (out[a * n + i][b * n + j] + cm * m[i][j]) % p
    return out


def _modp_ok(f, X):
    return X.star is not None and all(m.is_real() for m in X.xs) and not any(
        isinstance(c, Gaussian) for row in f.entries for e in row for c in e.terms.values()
    )


# ---------------------------------------------------------------------------
# sampling


def random_matrix(rng, n, bound=10, complex_entries=False):
    if complex_entries:
        return Matrix(
            [[gauss(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(n)] for _ in range(n)], n
        )
    return Matrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], n)


def random_tuple(rng, k, n, bound=10, complex_entries=False, star=True):
    return MatrixTuple(tuple(random_matrix(rng, n, bound, complex_entries) for _ in range(k)), None, star)


def random_line(rng, k, n, bound=10, complex_entries=False, star=True):
    return AffineLine(
        random_tuple(rng, k, n, bound, complex_entries, star),
        random_tuple(rng, k, n, bound, complex_entries, star),
    )


def _needs_complex(f):
    return not f.is_analytic()


def _arity(f):
    return max(f.num_vars(), 1)


# ---------------------------------------------------------------------------
# determinants along lines


def det_along_line(f, line):
    """p(t) = det f(X0 + t X1), interpolated exactly at t = 0..D."""
    f = as_matrix_poly(f)
    if f.nrows == 0:
        return UniPoly([1])
    D = f.nrows * line.n * max(f.degree(), 0)
    ts = list(range(D + 1))
    vals = [det_at(f, line.at(t)) for t in ts]
    return interpolate(ts, vals)


# ---------------------------------------------------------------------------
# randomized fullness / unit / degree tests


@dataclass
class Full:
    witness: MatrixTuple
    det: object

    verdict = "Full"

    def to_json(self):
        from .scalars import format_scalar

        return {"verdict": self.verdict, "witness": self.witness.to_json(), "det": format_scalar(self.det)}


@dataclass
class ProbablyNotFull:
    bounds: dict
    note: str

    verdict = "ProbablyNotFull"

    @property
    def failure_bound(self):
        return min(self.bounds.values(), default=1.0)

    def to_json(self):
        return {
            "verdict": self.verdict,
            "failure_bound_per_size": {str(k): v for k, v in sorted(self.bounds.items())},
            "note": self.note,
        }


def sample_space_size(bound, complex_entries):
    s = 2 * bound + 1
    return s * s if complex_entries else s


def schwartz_zippel(degree, space, trials):
    return min(1.0, degree / space) ** trials


def fullness_test(f, n_max=4, trials=20, seed=0, bound=10, prime=DEFAULT_PRIME):
    """Search for X with det f(X) != 0.

    One-sided: ``Full`` carries an exactly verified witness; otherwise the
    Schwartz-Zippel bound per size is reported, which is only meaningful for
    sizes where det f(generic) is not identically zero.
    """
    f = as_matrix_poly(f)
    rng = random.Random(seed)
    cplx = _needs_complex(f)
    k = _arity(f)
    bounds = {}
    if f.is_zero() or f.nrows != f.ncols:
        for n in range(1, n_max + 1):
            bounds[n] = 1.0
        return ProbablyNotFull(bounds, "zero or non-square matrix polynomial")
    for n in range(1, n_max + 1):
        for _ in range(trials):
            X = random_tuple(rng, k, n, bound, cplx)
            if _modp_ok(f, X):
                if det_mod_p(evaluate_mod_p(f, X, prime), prime) == 0:
                    continue
            d = det_at(f, X)
            if d != 0:
                return Full(X, d)
        deg = f.nrows * n * max(f.degree(), 0)
        bounds[n] = schwartz_zippel(deg, sample_space_size(bound, cplx), trials)
    return ProbablyNotFull(bounds, "no invertible evaluation found; sizes beyond the schedule are untested")


@dataclass
class ProbablyUnit:
    sizes: tuple
    trials: int
    constant: object = None

    verdict = "ProbablyUnit"

    def to_json(self):
        from .scalars import format_scalar

        return {"verdict": self.verdict, "sizes": list(self.sizes), "trials": self.trials,
                "constant": None if self.constant is None else format_scalar(self.constant)}


@dataclass
class NotUnit:
    line: AffineLine | None = None
    poly: UniPoly | None = None
    point: MatrixTuple | None = None

    verdict = "NotUnit"

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.line is not None:
            out["line"] = self.line.to_json()
            out["det_along_line"] = self.poly.to_json()
        if self.point is not None:
            out["point"] = self.point.to_json()
        return out


def unit_test(f, n_max=4, trials=20, seed=0, bound=10):
    """Look for a line along which det f is nonconstant (or vanishes)."""
    f = as_matrix_poly(f)
    rng = random.Random(seed)
    cplx = _needs_complex(f)
    k = _arity(f)
    constant = None
    for n in range(1, n_max + 1):
        for _ in range(trials):
            line = random_line(rng, k, n, bound, cplx)
            p = det_along_line(f, line)
            if p.degree >= 1:
                return NotUnit(line=line, poly=p)
            if p.is_zero():
                return NotUnit(point=line.base)
            if n == 1:
                constant = p.coeffs[0]
    return ProbablyUnit(tuple(range(1, n_max + 1)), trials, constant)


@dataclass
class LocusDegree:
    samples: list
    slope: int | None

    def to_json(self):
        return {"samples": [[n, d] for n, d in self.samples], "slope": self.slope}


def estimate_locus_degree(f, sizes=(1, 2, 3, 4), trials=5, seed=0, bound=10):
    """d_n = max degree of det f along sampled lines at size n."""
    f = as_matrix_poly(f)
    rng = random.Random(seed)
    cplx = _needs_complex(f)
    k = _arity(f)
    samples = []
    for n in sizes:
        d = max(det_along_line(f, random_line(rng, k, n, bound, cplx)).degree for _ in range(trials))
        samples.append((n, max(d, 0)))
    slope = None
    for (n1, d1), (n2, d2) in zip(samples, samples[1:]):
        if d1 > 0 and d1 % n1 == 0 and d2 * n1 == d1 * n2:
            slope = d1 // n1
    return LocusDegree(samples, slope)


# ---------------------------------------------------------------------------
# symbolic generic determinant (sympy, n <= 2)


def to_sympy(c):
    import sympy

    if isinstance(c, Gaussian):
        return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator
        )
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def from_sympy(v):
    import sympy

    v = sympy.nsimplify(v) if not v.is_Number and not v.is_Add else v
    re, im = sympy.re(v), sympy.im(v)
    re, im = sympy.Rational(re), sympy.Rational(im)
    return gauss(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def omega(j, i, k, starred=False):
    """Symbol for entry (i, k) of the j-th generic matrix (upsilon when starred)."""
    import sympy

    return sympy.Symbol(f"{'v' if starred else 'w'}_{j}_{i}_{k}")


@dataclass
class GenericDet:
    """det f(generic n x n matrices) as an expanded commutative polynomial."""

    n: int
    expr: object
    symbols: list = dc_field(default_factory=list)

    def is_zero(self):
        return self.expr == 0

    def substitute(self, values):
        return self.expr.xreplace(values)

    def evaluate(self, X):
        """Exact value at a MatrixTuple (starred letters follow X's mode)."""
        vals = {}
        lv = X.letter_values()
        for s in self.symbols:
            kind, j, i, k = s.name.split("_")
            a = letter(int(j), kind == "v")
            vals[s] = to_sympy(lv[a].rows[int(i) - 1][int(k) - 1])
        return from_sympy(self.expr.xreplace(vals).expand())

    def partial(self, j, i, k, starred=False):
        return GenericDet(self.n, self.expr.diff(omega(j, i, k, starred)).expand(), self.symbols)


def symbolic_generic_det(f, n, max_terms=64):
    """Expanded det f(generic matrices) for n in {1, 2}.

    Starred letters x_j^* get their own generic matrices (upsilon symbols).
    """
    import sympy

    f = as_matrix_poly(f)
    if n not in (1, 2):
        raise TooLarge("symbolic determinants only for n <= 2")
    terms = sum(len(e.terms) for row in f.entries for e in row)
    if terms > max_terms or f.nrows * n > 6:
        raise TooLarge(f"input too large for the symbolic oracle ({terms} terms, size {f.nrows * n})")
    used = set()
    letter_mats = {}
    for a in sorted(f.letters()):
        j, st = letter_var(a), letter_is_star(a)
        if j == 0:
            raise TooLarge("slack letters are not supported by the symbolic oracle")
        syms = [[omega(j, i + 1, k + 1, st) for k in range(n)] for i in range(n)]
        used.update(s for r in syms for s in r)
        letter_mats[a] = sympy.Matrix(syms)
    words = f.words()
    cache = {(): sympy.eye(n)}
    for w in words:
        for ell in range(1, len(w) + 1):
            if w[:ell] not in cache:
                cache[w[:ell]] = (cache[w[:ell - 1]] * letter_mats[w[ell - 1]]).expand()
    big = sympy.zeros(f.nrows * n, f.ncols * n)
    for a in range(f.nrows):
        for b in range(f.ncols):
            for w, c in f.entries[a][b].terms.items():
                big[a * n:(a + 1) * n, b * n:(b + 1) * n] += to_sympy(c) * cache[w]
    expr = sympy.expand(big.det(method="berkowitz")) if big.rows else sympy.Integer(1)
    symbols = sorted(used, key=lambda s: s.name)
    return GenericDet(n, expr, symbols)
