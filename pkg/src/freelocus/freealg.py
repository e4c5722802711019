"""Noncommutative polynomials and matrices of them.

Letters are small ints: ``x_j -> 2j``, ``x_j^* -> 2j+1`` (j >= 1), and the
slack pair ``y -> 0``, ``y^* -> 1``.  A word is a tuple of letters and the
involution flips the low bit of each letter while reversing the word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import DimensionMismatch, Matrix, NotHermitian
from .scalars import as_scalar, conj, format_scalar

Y, YSTAR = 0, 1

ANALYTIC = "analytic"
INVOLUTIVE = "involutive"
SLACK = "slack"


class AlphabetMismatch(ValueError):
    pass


class NotScalar(ValueError):
    """A 1x1 (scalar) polynomial was required."""


class NotHereditaryQuadratic(ValueError):
    def __init__(self, word):
        super().__init__(f"word {word_str(word)} is not hereditary quadratic")
        self.word = word


def letter(j, star=False):
    return 2 * j + (1 if star else 0)


def letter_var(a):
    return a >> 1


def letter_is_star(a):
    return bool(a & 1)


def star_word(w):
    return tuple(a ^ 1 for a in reversed(w))


def letter_str(a):
    v = a >> 1
    name = "y" if v == 0 else f"x{v}"
    return name + ("'" if a & 1 else "")


def word_str(w):
    return " ".join(letter_str(a) for a in w) if w else "1"


def letter_key(a):
    v = a >> 1
    return (v if v else 1 << 30, a & 1)


def word_key(w):
    """Graded lexicographic order: length, then letter index, then adjoint flag."""
    return (len(w), tuple(letter_key(a) for a in w))


@dataclass(frozen=True)
class Alphabet:
    """Variable regime of a polynomial: x only, x and x^*, or x, x^*, y, y^*."""

    g: int
    kind: str = ANALYTIC

    def admits(self, other):
        order = {ANALYTIC: 0, INVOLUTIVE: 1, SLACK: 2}
        return self.g >= other.g and order[self.kind] >= order[other.kind]


class Poly:
    """Element of the free algebra over Q(i): a map word -> nonzero scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {tuple(w): as_scalar(c) for w, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, j, star=False):
        return cls({(letter(j, star),): 1})

    @classmethod
    def slack(cls, star=False):
        return cls({(YSTAR if star else Y,): 1})

    @classmethod
    def monomial(cls, word, c=1):
        return cls({tuple(word): c})

    # structure ------------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def is_constant(self):
        return all(len(w) == 0 for w in self.terms)

    def constant_term(self):
        return self.terms.get((), 0)

    def letters(self):
        return {a for w in self.terms for a in w}

    def num_vars(self):
        return max((a >> 1 for a in self.letters()), default=0)

    def alphabet(self):
        ls = self.letters()
        if any(a >> 1 == 0 for a in ls):
            kind = SLACK
        elif any(a & 1 for a in ls):
            kind = INVOLUTIVE
        else:
            kind = ANALYTIC
        return Alphabet(self.num_vars(), kind)

    def is_analytic(self):
        return self.alphabet().kind == ANALYTIC

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))

    def coefficient(self, w):
        return self.terms.get(tuple(w), 0)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _lift_poly(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s == 0:
                out.pop(w, None)
            else:
                out[w] = s
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift_poly(other))

    def __rsub__(self, other):
        return _lift_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_scalar(other)
            if c == 0:
                return Poly()
            return Poly._raw({w: c * a for w, a in self.terms.items()})
        out = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                s = out.get(w, 0) + a * b
                if s == 0:
                    out.pop(w, None)
                else:
                    out[w] = s
        return Poly._raw(out)

    def __rmul__(self, other):
        c = as_scalar(other)
        if c == 0:
            return Poly()
        return Poly._raw({w: a * c for w, a in self.terms.items()})

    def __pow__(self, k):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def star(self):
        return Poly._raw({star_word(w): conj(c) for w, c in self.terms.items()})

    def is_hermitian(self):
        return self == self.star()

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        try:
            return self.terms == Poly.const(as_scalar(other)).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def relabel(self, mapping):
        """Apply a letter -> letter substitution."""
        out = {}
        for w, c in self.terms.items():
            nw = tuple(mapping.get(a, a) for a in w)
            out[nw] = out.get(nw, 0) + c
        return Poly(out)

    def substitute(self, images):
        """Replace letter a by the polynomial images[a] (unlisted letters stay)."""
        out = Poly()
        cache = {}
        for w, c in self.terms.items():
            term = Poly.const(c)
            for a in w:
                img = images.get(a)
                if img is None:
                    img = cache.setdefault(a, Poly.monomial((a,)))
                term = term * img
            out = out + term
        return out

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        return "Poly(" + " + ".join(f"({format_scalar(c)}) {word_str(w)}" for w, c in self.sorted_terms()) + ")"


def _lift_poly(x):
    return x if isinstance(x, Poly) else Poly.const(as_scalar(x))


X1, X2, X3 = Poly.var(1), Poly.var(2), Poly.var(3)


class MatrixPoly:
    """An r x c matrix with free-algebra entries, sum_w f_w (x) w."""

    __slots__ = ("entries", "nrows", "ncols")

    def __init__(self, entries):
        entries = [[_lift_poly(e) for e in row] for row in entries]
        self.entries = entries
        self.nrows = len(entries)
        self.ncols = len(entries[0]) if entries else 0

    @classmethod
    def scalar(cls, p):
        return cls([[p]])

    @classmethod
    def constant(cls, m):
        return cls([[Poly.const(x) for x in row] for row in m.rows]) if m.nrows else cls.empty(0)

    @classmethod
    def empty(cls, n=0):
        obj = cls.__new__(cls)
        obj.entries, obj.nrows, obj.ncols = [], n, n
        return obj

    @classmethod
    def identity(cls, n):
        return cls([[Poly.const(1 if i == j else 0) for j in range(n)] for i in range(n)]) if n else cls.empty(0)

    @classmethod
    def from_coefficients(cls, coeffs, nrows, ncols):
        entries = [[{} for _ in range(ncols)] for _ in range(nrows)]
        for w, m in coeffs.items():
            for i in range(nrows):
                for j in range(ncols):
                    if m.rows[i][j] != 0:
                        entries[i][j][tuple(w)] = m.rows[i][j]
        return cls([[Poly(e) for e in row] for row in entries])

    # structure ------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i, j):
        return self.entries[i][j]

    def words(self):
        ws = {w for row in self.entries for e in row for w in e.terms}
        return sorted(ws, key=word_key)

    def coefficients(self):
        """Dict word -> r x c scalar Matrix (only nonzero coefficients)."""
        out = {}
        for w in self.words():
            out[w] = Matrix([[e.terms.get(w, 0) for e in row] for row in self.entries], self.ncols)
        return out

    def constant_term(self):
        return Matrix([[e.constant_term() for e in row] for row in self.entries], self.ncols)

    def degree(self):
        return max((e.degree() for row in self.entries for e in row), default=-1)

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def num_vars(self):
        return max((e.num_vars() for row in self.entries for e in row), default=0)

    def letters(self):
        return set().union(*(e.letters() for row in self.entries for e in row)) if self.entries else set()

    def alphabet(self):
        kinds = [e.alphabet() for row in self.entries for e in row]
        order = [ANALYTIC, INVOLUTIVE, SLACK]
        kind = max((a.kind for a in kinds), key=order.index, default=ANALYTIC)
        return Alphabet(max((a.g for a in kinds), default=0), kind)

    def is_analytic(self):
        return self.alphabet().kind == ANALYTIC

    def is_square(self):
        return self.nrows == self.ncols

    def __eq__(self, other):
        if not isinstance(other, MatrixPoly):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.entries))

    def __repr__(self):
        return "MatrixPoly(" + repr([[e for e in row] for row in self.entries]) + ")"

    # ring structure -------------------------------------------------------
    def __add__(self, other):
        other = _lift_matrix(other, self.nrows)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return MatrixPoly([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def __neg__(self):
        return MatrixPoly([[-a for a in r] for r in self.entries])

    def __sub__(self, other):
        return self + (-_lift_matrix(other, self.nrows))

    def __matmul__(self, other):
        other = _lift_matrix(other, self.ncols)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                s = Poly()
                for k in range(self.ncols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.terms and b.terms:
                        s = s + a * b
                row.append(s)
            out.append(row)
        if not out:
            return MatrixPoly.empty(0)
        return MatrixPoly(out)

    def __mul__(self, other):
        if isinstance(other, (MatrixPoly, Poly)):
            return self @ _lift_matrix(other, self.ncols)
        c = as_scalar(other)
        return MatrixPoly([[c * a for a in r] for r in self.entries])

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return _lift_matrix(other, self.nrows) @ self
        c = as_scalar(other)
        return MatrixPoly([[c * a for a in r] for r in self.entries])

    def star(self):
        """Involution: conjugate transpose with letters starred and words reversed."""
        return MatrixPoly(
            [[self.entries[i][j].star() for i in range(self.nrows)] for j in range(self.ncols)]
        ) if self.nrows else MatrixPoly.empty(0)

    def is_hermitian(self):
        return self.is_square() and self == self.star()

    def transpose(self):
        return MatrixPoly([[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def map_entries(self, fn):
        return MatrixPoly([[fn(e) for e in row] for row in self.entries]) if self.nrows else self


def _lift_matrix(x, n):
    if isinstance(x, MatrixPoly):
        return x
    if isinstance(x, Poly):
        return MatrixPoly([[x if i == j else Poly() for j in range(n)] for i in range(n)])
    if isinstance(x, Matrix):
        return MatrixPoly.constant(x)
    c = as_scalar(x)
    return MatrixPoly([[Poly.const(c if i == j else 0) for j in range(n)] for i in range(n)])


def as_matrix_poly(f):
    if isinstance(f, MatrixPoly):
        return f
    if isinstance(f, Poly):
        return MatrixPoly.scalar(f)
    if isinstance(f, Matrix):
        return MatrixPoly.constant(f)
    return MatrixPoly.scalar(Poly.const(as_scalar(f)))


def involution(f):
    return as_matrix_poly(f).star()


def mul(f, g):
    return as_matrix_poly(f) @ as_matrix_poly(g)


def direct_sum(*fs):
    fs = [as_matrix_poly(f) for f in fs]
    alph = [f.alphabet() for f in fs if not f.is_zero()]
    kinds = {a.kind for a in alph}
    if SLACK in kinds and len(kinds) > 1:
        raise AlphabetMismatch("cannot mix slack and non-slack polynomials in a direct sum")
    r = sum(f.nrows for f in fs)
    c = sum(f.ncols for f in fs)
    out = [[Poly() for _ in range(c)] for _ in range(r)]
    i0 = j0 = 0
    for f in fs:
        for i in range(f.nrows):
            for j in range(f.ncols):
                out[i0 + i][j0 + j] = f.entries[i][j]
        i0 += f.nrows
        j0 += f.ncols
    return MatrixPoly(out) if r else MatrixPoly.empty(0)


def forget_involution(f, g=None):
    """Treat x_j^* as an independent analytic letter x_{g+j}."""
    f = as_matrix_poly(f)
    g = f.num_vars() if g is None else g
    mapping = {letter(j, True): letter(g + j) for j in range(1, g + 1)}
    if any(letter_var(a) == 0 for a in f.letters()):
        raise AlphabetMismatch("slack letters cannot be forgotten into x letters")
    return f.map_entries(lambda e: e.relabel(mapping))


def remember_involution(f, g):
    """Inverse of :func:`forget_involution` for a 2g-letter analytic polynomial."""
    f = as_matrix_poly(f)
    mapping = {letter(g + j): letter(j, True) for j in range(1, g + 1)}
    return f.map_entries(lambda e: e.relabel(mapping))


# ---------------------------------------------------------------------------
# evaluation core


def word_values(words, letter_values, n):
    """Matrix value of each word under letter -> Matrix (n x n)."""
    cache = {(): Matrix.identity(n)}

    def value(w):
        v = cache.get(w)
        if v is None:
            a = w[-1]
            try:
                la = letter_values[a]
            except KeyError:
                raise KeyError(f"no value for letter {letter_str(a)}") from None
            v = value(w[:-1]) @ la
            cache[w] = v
        return v

    return {w: value(w) for w in words}


def evaluate_map(f, letter_values, n):
    """f evaluated as sum_w f_w (x) w(X) under an explicit letter assignment."""
    f = as_matrix_poly(f)
    vals = word_values(f.words(), letter_values, n)
    r, c = f.nrows, f.ncols
    out = [[0] * (c * n) for _ in range(r * n)]
    for a in range(r):
        for b in range(c):
            e = f.entries[a][b]
            for w, coef in e.terms.items():
                m = vals[w]
                for i in range(n):
                    orow = out[a * n + i]
                    mrow = m.rows[i]
                    for j in range(n):
                        x = mrow[j]
                        if x != 0:
                            orow[b * n + j] = orow[b * n + j] + coef * x
    return Matrix(out, c * n)


# ---------------------------------------------------------------------------
# point-centered ampliation


def ampliation_index(j, i, k, n):
    """Fresh variable index of y_{j i k} (all 1-based): 1 + (j-1)n^2 + (i-1)n + (k-1)."""
    return 1 + (j - 1) * n * n + (i - 1) * n + (k - 1)


def ampliate(f, X):
    """f^X = f(X_1 + (y_{1ik}), ..., X_g + (y_{gik})) in g n^2 fresh variables.

    The result has size (delta n) x (delta n) with block (a, b) equal to the
    n x n polynomial matrix obtained from entry f_ab, so it evaluates in the
    same convention as f(X) = sum_w f_w (x) w(X).
    """
    f = as_matrix_poly(f)
    if not f.is_analytic():
        raise AlphabetMismatch("ampliation needs an analytic polynomial; forget the involution first")
    X = list(X)
    n = X[0].nrows if X else 1
    g = len(X)
    if f.num_vars() > g:
        raise DimensionMismatch(f"polynomial uses {f.num_vars()} variables, point has {g}")
    shifted = {}
    for j in range(1, g + 1):
        shifted[letter(j)] = [
            [Poly({(): X[j - 1].rows[i][k], (letter(ampliation_index(j, i + 1, k + 1, n)),): 1}) for k in range(n)]
            for i in range(n)
        ]

    word_cache = {(): [[Poly.const(1 if i == k else 0) for k in range(n)] for i in range(n)]}

    def value(w):
        v = word_cache.get(w)
        if v is None:
            left = value(w[:-1])
            right = shifted[w[-1]]
            v = [
                [sum((left[i][m] * right[m][k] for m in range(n) if left[i][m].terms and right[m][k].terms), Poly())
                 for k in range(n)]
                for i in range(n)
            ]
            word_cache[w] = v
        return v

    r, c = f.nrows, f.ncols
    out = [[Poly() for _ in range(c * n)] for _ in range(r * n)]
    for a in range(r):
        for b in range(c):
            for w, coef in f.entries[a][b].terms.items():
                v = value(w)
                for i in range(n):
                    for k in range(n):
                        if v[i][k].terms:
                            out[a * n + i][b * n + k] = out[a * n + i][b * n + k] + coef * v[i][k]
    return MatrixPoly(out) if out else MatrixPoly.empty(0)


def canonical_shuffle(delta, n):
    """Permutation matrix S with S (A (x) E) S^T = E (x) A for A delta x delta, E n x n."""
    size = delta * n
    m = Matrix.zeros(size)
    for a in range(delta):
        for i in range(n):
            m.rows[i * delta + a][a * n + i] = 1
    return m


def assemble_block_tuple(Ytilde_values, g, n, m):
    """Y_j = (Ytilde_{j i k})_{i,k}, an (nm) x (nm) block matrix from m x m blocks.

    ``Ytilde_values[idx]`` is the m x m matrix for fresh variable index idx.
    """
    Ys = []
    for j in range(1, g + 1):
        rows = [[0] * (n * m) for _ in range(n * m)]
        for i in range(1, n + 1):
            for k in range(1, n + 1):
                blk = Ytilde_values[ampliation_index(j, i, k, n)]
                for p in range(m):
                    for q in range(m):
                        rows[(i - 1) * m + p][(k - 1) * m + q] = blk.rows[p][q]
        Ys.append(Matrix(rows, n * m))
    return Ys


# ---------------------------------------------------------------------------
# hereditary quadratic forms


@dataclass(frozen=True)
class QuadraticForm:
    """f = alpha + x^* v + v^* x + x^* H x."""

    alpha: Fraction
    v: tuple
    H: Matrix

    def to_poly(self):
        g = len(self.v)
        p = Poly.const(self.alpha)
        for j in range(g):
            p = p + Poly.monomial((letter(j + 1, True),), self.v[j])
            p = p + Poly.monomial((letter(j + 1),), conj(self.v[j]))
            for k in range(g):
                p = p + Poly.monomial((letter(j + 1, True), letter(k + 1)), self.H.rows[j][k])
        return p


def quadratic_parts(f, g=None):
    """Split a hermitian hereditary quadratic polynomial into (alpha, v, H)."""
    if isinstance(f, MatrixPoly):
        if f.shape != (1, 1):
            raise NotScalar("quadratic_parts expects a scalar polynomial")
        f = f.entries[0][0]
    g = f.num_vars() if g is None else g
    for w in f.terms:
        ok = (
            len(w) == 0
            or (len(w) == 1 and letter_var(w[0]) >= 1)
            or (len(w) == 2 and letter_var(w[0]) >= 1 and letter_var(w[1]) >= 1
                and letter_is_star(w[0]) and not letter_is_star(w[1]))
        )
        if not ok:
            raise NotHereditaryQuadratic(w)
    if not f.is_hermitian():
        raise NotHermitian("polynomial is not hermitian")
    alpha = Fraction(f.constant_term())
    v = tuple(f.coefficient((letter(j, True),)) for j in range(1, g + 1))
    H = Matrix([[f.coefficient((letter(i, True), letter(j))) for j in range(1, g + 1)] for i in range(1, g + 1)], g)
    q = QuadraticForm(alpha, v, H)
    assert q.to_poly() == f
    return q
