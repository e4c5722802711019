"""Dense exact matrices over the Gaussian rationals (and Z/pZ helpers).

Entries are ``int``, ``Fraction`` or :class:`~freelocus.scalars.Gaussian`.
Matrices are treated as immutable values; every operation returns a new one.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import NamedTuple

from .scalars import Gaussian, as_scalar, conj, field, format_scalar, gauss


class NotHermitian(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = [list(r) for r in rows]
        self.rows = rows
        self.nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        self.ncols = ncols
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix rows")

    # construction ----------------------------------------------------------
    @classmethod
    def zeros(cls, r, c=None):
        c = r if c is None else c
        return cls([[0] * c for _ in range(r)], c)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def unit(cls, i, j, r, c=None):
        """Matrix unit E_ij (0-based)."""
        m = cls.zeros(r, c)
        m.rows[i][j] = 1
        return m

    @classmethod
    def diag(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def scalar(cls, c, n):
        return cls([[c if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def column(cls, v):
        return cls([[x] for x in v], 1)

    @classmethod
    def parse(cls, data):
        """From nested lists of scalars or ``"a/b+c/di"`` strings."""
        return cls([[as_scalar(x) for x in row] for row in data])

    # basic protocol -------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [r[j] for r in self.rows]

    def copy_rows(self):
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        body = "; ".join(", ".join(format_scalar(x) for x in r) for r in self.rows)
        return f"Matrix([{body}])"

    def to_json(self):
        return [[format_scalar(x) for x in r] for r in self.rows]

    def to_numpy(self):
        import numpy as np

        return np.array([[complex(x) for x in r] for r in self.rows], dtype=complex).reshape(
            self.nrows, self.ncols
        )

    def is_square(self):
        return self.nrows == self.ncols

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def is_real(self):
        return not any(isinstance(x, Gaussian) for r in self.rows for x in r)

    def is_identity(self):
        return self.is_square() and all(
            (x == 1) if i == j else (x == 0)
            for i, r in enumerate(self.rows)
            for j, x in enumerate(r)
        )

    def is_hermitian(self):
        if not self.is_square():
            return False
        n = self.nrows
        rows = self.rows
        return all(rows[i][j] == conj(rows[j][i]) for i in range(n) for j in range(i, n))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        if c == 1:
            return self
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            row = []
            for c in cols:
                s = 0
                for k, a in nz:
                    b = c[k]
                    if b != 0:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return Matrix(out, other.ncols)

    def __pow__(self, k):
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self):
        return Matrix([list(c) for c in zip(*self.rows)] if self.nrows else [[] for _ in range(self.ncols)], self.nrows)

    @property
    def H(self):
        """Conjugate transpose."""
        if not self.nrows:
            return Matrix([[] for _ in range(self.ncols)], 0)
        return Matrix([[conj(x) for x in c] for c in zip(*self.rows)], self.nrows)

    def conj(self):
        return Matrix([[conj(x) for x in r] for r in self.rows], self.ncols)

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), 0)

    def kron(self, other):
        r1, c1 = self.shape
        r2, c2 = other.shape
        out = [[0] * (c1 * c2) for _ in range(r1 * r2)]
        for i in range(r1):
            for j in range(c1):
                a = self.rows[i][j]
                if a == 0:
                    continue
                for k in range(r2):
                    orow = out[i * r2 + k]
                    srow = other.rows[k]
                    for l in range(c2):
                        b = srow[l]
                        if b != 0:
                            orow[j * c2 + l] = a * b
        return Matrix(out, c1 * c2)

    def submatrix(self, rows, cols):
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def flatten(self):
        return [x for r in self.rows for x in r]

    # exact linear algebra -------------------------------------------------
    def det(self):
        if not self.is_square():
            raise DimensionMismatch("det of non-square matrix")
        return det(self.rows)

    def rank(self):
        return len(rref(self.rows, self.ncols)[1])

    def nullspace(self):
        return nullspace(self.rows, self.ncols)

    def inverse(self):
        n = self.nrows
        if not self.is_square():
            raise DimensionMismatch("inverse of non-square matrix")
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix([r[n:] for r in red], n)

    def is_invertible(self):
        return self.is_square() and self.det() != 0

    def signature(self):
        return hermitian_signature(self)


def block_diag(*mats):
    r = sum(m.nrows for m in mats)
    c = sum(m.ncols for m in mats)
    out = [[0] * c for _ in range(r)]
    i0 = j0 = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            out[i0 + i][j0:j0 + m.ncols] = row
        i0 += m.nrows
        j0 += m.ncols
    return Matrix(out, c)


def hstack(mats):
    r = mats[0].nrows
    if any(m.nrows != r for m in mats):
        raise DimensionMismatch("hstack row mismatch")
    return Matrix([sum((m.rows[i] for m in mats), []) for i in range(r)], sum(m.ncols for m in mats))


def vstack(mats):
    c = mats[0].ncols
    if any(m.ncols != c for m in mats):
        raise DimensionMismatch("vstack column mismatch")
    return Matrix([list(r) for m in mats for r in m.rows], c)


def permutation_matrix(perm):
    """P with P e_j = e_{perm[j]}."""
    n = len(perm)
    m = Matrix.zeros(n)
    for j, i in enumerate(perm):
        m.rows[i][j] = 1
    return m


# ---------------------------------------------------------------------------
# elimination kernels on raw row lists


def rref(rows, ncols):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    m = [[field(x) for x in r] for r in rows]
    nr = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nr:
            break
        p = None
        for i in range(r, nr):
            if m[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = 1 / pr[c]
        if inv != 1:
            pr = [x * inv if x != 0 else x for x in pr]
            m[r] = pr
        nzc = [k for k in range(c, ncols) if pr[k] != 0]
        for i in range(nr):
            if i != r:
                a = m[i][c]
                if a != 0:
                    ri = m[i]
                    for k in nzc:
                        ri[k] = ri[k] - a * pr[k]
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace(rows, ncols):
    """Exact basis of {v : M v = 0} as a list of lists."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][free]
        basis.append(v)
    return basis


def _clear_row(row):
    """Scale a row of rationals/Gaussians to integers.  Returns (scale, row)."""
    dens = []
    for x in row:
        if isinstance(x, Gaussian):
            dens.append(x.re.denominator)
            dens.append(x.im.denominator)
        elif isinstance(x, Fraction):
            dens.append(x.denominator)
    s = lcm(*dens) if dens else 1
    return s, row


def det(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    gaussian = any(isinstance(x, Gaussian) for r in rows for x in r)
    scale = 1
    if gaussian:
        mat = []
        for r in rows:
            s, _ = _clear_row(r)
            scale *= s
            out = []
            for x in r:
                if isinstance(x, Gaussian):
                    out.append(((x.re * s).numerator, (x.im * s).numerator))
                else:
                    out.append((int(x * s), 0))
            mat.append(out)
        a, b = _bareiss_gauss(mat)
        return gauss(Fraction(a, scale), Fraction(b, scale))
    mat = []
    for r in rows:
        s, _ = _clear_row(r)
        scale *= s
        if s == 1:
            mat.append([int(x) for x in r])
        else:
            mat.append([int(x * s) for x in r])
    d = _bareiss_int(mat)
    if scale == 1:
        return d
    return Fraction(d, scale)


def _bareiss_int(m):
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        mk = m[k]
        pivot = mk[k]
        for i in range(k + 1, n):
            mi = m[i]
            a = mi[k]
            if a == 0:
                if pivot != prev:
                    for j in range(k + 1, n):
                        mi[j] = mi[j] * pivot // prev
                continue
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pivot - a * mk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def _gmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gdiv_exact(x, y):
    a, b = x
    c, d = y
    n = c * c + d * d
    re = a * c + b * d
    im = b * c - a * d
    return (re // n, im // n)


def _bareiss_gauss(m):
    n = len(m)
    sign = 1
    prev = (1, 0)
    zero = (0, 0)
    for k in range(n - 1):
        if m[k][k] == zero:
            for r in range(k + 1, n):
                if m[r][k] != zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return (0, 0)
        mk = m[k]
        pivot = mk[k]
        for i in range(k + 1, n):
            mi = m[i]
            a = mi[k]
            for j in range(k + 1, n):
                p1 = _gmul(mi[j], pivot)
                p2 = _gmul(a, mk[j])
                mi[j] = _gdiv_exact((p1[0] - p2[0], p1[1] - p2[1]), prev)
        prev = pivot
    a, b = m[n - 1][n - 1]
    return (sign * a, sign * b)


# ---------------------------------------------------------------------------
# hermitian signature


class Signature(NamedTuple):
    pos: int
    neg: int
    zero: int

    def to_json(self):
        return [self.pos, self.neg, self.zero]


def hermitian_signature(h):
    """(pos, neg, zero) of a hermitian matrix by exact congruence.

    Repeatedly takes a Schur complement with respect to a nonzero diagonal
    entry, or, when the diagonal vanishes, a 2x2 hyperbolic block [[0,a],[a*,0]]
    which contributes one positive and one negative square.
    """
    if not isinstance(h, Matrix):
        h = Matrix(h)
    if not h.is_hermitian():
        raise NotHermitian("matrix is not hermitian")
    m = [[field(x) for x in r] for r in h.rows]
    pos = neg = 0
    while m:
        n = len(m)
        k = next((i for i in range(n) if m[i][i] != 0), None)
        if k is not None:
            piv = m[k][k]
            if piv > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in range(n) if i != k]
            m = [
                [m[i][j] - m[i][k] * m[k][j] / piv if m[i][k] != 0 and m[k][j] != 0 else m[i][j] for j in rest]
                for i in rest
            ]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if m[i][j] != 0), None)
        if pair is None:
            break
        i0, j0 = pair
        a = m[i0][j0]
        pos += 1
        neg += 1
        # inverse of [[0, a], [conj(a), 0]] is [[0, 1/conj(a)], [1/a, 0]]
        ia, ica = 1 / a, 1 / conj(a)
        rest = [i for i in range(n) if i not in (i0, j0)]
        new = []
        for i in rest:
            bi0, bj0 = m[i][i0], m[i][j0]
            row = []
            for j in rest:
                c0, c1 = m[i0][j], m[j0][j]
                # B K^{-1} C with B=(bi0,bj0), C=(c0;c1)
                corr = bi0 * ica * c1 + bj0 * ia * c0
                row.append(m[i][j] - corr)
            new.append(row)
        m = new
    zero = h.nrows - pos - neg
    return Signature(pos, neg, zero)


# ---------------------------------------------------------------------------
# incremental echelon basis (used for spans, algebra closures, spins)


class EchelonSpace:
    """Subspace of F^N kept as reduced rows keyed by pivot position."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = {}  # pivot -> row with 1 at pivot
        self.order = []  # pivots in insertion order
        self.originals = []  # vectors as added (independent ones)

    def __len__(self):
        return len(self.order)

    def reduce(self, v):
        v = [field(x) for x in v]
        for p in self.order:
            a = v[p]
            if a != 0:
                r = self.rows[p]
                for k in range(self.dim):
                    if r[k] != 0:
                        v[k] = v[k] - a * r[k]
        return v

    def add(self, v):
        """Add v; returns True when v enlarged the space."""
        w = self.reduce(v)
        p = next((k for k, x in enumerate(w) if x != 0), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for q in self.order:
            r = self.rows[q]
            a = r[p]
            if a != 0:
                self.rows[q] = [x - a * y for x, y in zip(r, w)]
        self.rows[p] = w
        self.order.append(p)
        self.originals.append(list(v))
        return True

    def contains(self, v):
        return all(x == 0 for x in self.reduce(v))

    def basis(self):
        return [self.rows[p] for p in self.order]


# ---------------------------------------------------------------------------
# prime-field kernels (ints mod p)


def det_mod_p(rows, p):
    m = [[x % p for x in r] for r in rows]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        pc = m[c]
        d = d * pc[c] % p
        inv = pow(pc[c], -1, p)
        for i in range(c + 1, n):
            a = m[i][c]
            if a:
                f = a * inv % p
                mi = m[i]
                for k in range(c, n):
                    mi[k] = (mi[k] - f * pc[k]) % p
    return d % p


def rank_mod_p(rows, ncols, p):
    m = [[x % p for x in r] for r in rows]
    nr = len(m)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        for i in range(r + 1, nr):
            a = m[i][c]
            if a:
                f = a * inv % p
                for k in range(c, ncols):
                    m[i][k] = (m[i][k] - f * m[r][k]) % p
        r += 1
        if r == nr:
            break
    return r


def matmul_mod_p(a, b, p):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) % p for c in bt] for r in a]
