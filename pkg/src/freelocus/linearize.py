"""Linear pencils: Higman linearization, reduction to epic form, monicization."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .freealg import (
    MatrixPoly,
    Poly,
    as_matrix_poly,
    letter,
    letter_str,
    word_key,
)
from .linalg import Matrix, nullspace, hstack, vstack
from .scalars import field, format_scalar, parse_scalar


class NotFull(ValueError):
    """Zero, non-square, or a pencil with a constant zero column or row after a basis change."""


class SingularConstantTerm(ValueError):
    pass


class LinearizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LinearPencil:
    """L = A0 + sum_m A_m * letters[m-1] with square d x d coefficients.

    ``letters`` are letter codes (see freealg); by default x_1 .. x_k.
    """

    coeffs: tuple
    letters: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "letters", tuple(self.letters))
        if len(self.coeffs) != len(self.letters) + 1:
            raise ValueError("need one coefficient per letter plus the constant term")
        d = self.coeffs[0].nrows
        if any(m.shape != (d, d) for m in self.coeffs):
            raise ValueError("pencil coefficients must be square of equal size")

    @classmethod
    def make(cls, A0, *As, letters=None):
        if letters is None:
            letters = tuple(letter(j) for j in range(1, len(As) + 1))
        return cls((A0,) + tuple(As), letters)

    @classmethod
    def from_lists(cls, mats, letters=None):
        ms = [m if isinstance(m, Matrix) else Matrix([[parse_scalar(x) if isinstance(x, str) else x for x in r] for r in m]) for m in mats]
        return cls.make(ms[0], *ms[1:], letters=letters)

    @classmethod
    def from_matrix_poly(cls, f, letters=None):
        f = as_matrix_poly(f)
        if f.degree() > 1:
            raise ValueError("matrix polynomial is not affine")
        if letters is None:
            k = f.num_vars()
            ls = f.letters()
            if any(a % 2 for a in ls):
                letters = tuple(sorted(ls, key=lambda a: word_key((a,))))
            else:
                letters = tuple(letter(j) for j in range(1, k + 1))
        coeffs = [f.coefficients().get((), None)]
        cs = f.coefficients()
        d = f.nrows
        coeffs = [cs.get((), Matrix.zeros(d))] + [cs.get((a,), Matrix.zeros(d)) for a in letters]
        extra = set(w for w in cs if w) - {(a,) for a in letters}
        if extra:
            raise ValueError("letters do not cover the pencil")
        return cls(tuple(coeffs), tuple(letters))

    @property
    def d(self):
        return self.coeffs[0].nrows

    @property
    def k(self):
        return len(self.letters)

    @property
    def A0(self):
        return self.coeffs[0]

    @property
    def linear(self):
        return self.coeffs[1:]

    def is_monic(self):
        return self.A0.is_identity()

    def is_epic(self):
        d = self.d
        if d == 0:
            return True
        if not self.linear:
            return False
        return hstack(self.linear).rank() == d and vstack(self.linear).rank() == d

    def to_matrix_poly(self):
        d = self.d
        entries = [[Poly() for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                terms = {}
                if self.A0.rows[i][j] != 0:
                    terms[()] = self.A0.rows[i][j]
                for a, A in zip(self.letters, self.linear):
                    if A.rows[i][j] != 0:
                        terms[(a,)] = A.rows[i][j]
                entries[i][j] = Poly(terms)
        return MatrixPoly(entries) if d else MatrixPoly.empty(0)

    def transform(self, P, Q):
        """P L Q coefficient-wise."""
        return LinearPencil(tuple(P @ A @ Q for A in self.coeffs), self.letters)

    def map_coeffs(self, fn):
        return LinearPencil(tuple(fn(A) for A in self.coeffs), self.letters)

    def with_letters(self, letters):
        """Reindex onto a larger letter list (missing letters get zero)."""
        cur = dict(zip(self.letters, self.linear))
        z = Matrix.zeros(self.d)
        return LinearPencil((self.A0,) + tuple(cur.get(a, z) for a in letters), tuple(letters))

    def direct_sum(self, other):
        from .linalg import block_diag

        letters = tuple(sorted(set(self.letters) | set(other.letters), key=lambda a: word_key((a,))))
        a, b = self.with_letters(letters), other.with_letters(letters)
        return LinearPencil(tuple(block_diag(x, y) for x, y in zip(a.coeffs, b.coeffs)), letters)

    def to_json(self):
        return {
            "size": self.d,
            "letters": [letter_str(a) for a in self.letters],
            "coefficients": [A.to_json() for A in self.coeffs],
            "epic": self.is_epic(),
            "monic": self.is_monic(),
        }

    def __str__(self):
        return str(self.to_matrix_poly())


@dataclass(frozen=True)
class LinearizationResult:
    """det f(X) * alpha^n = det L(X) for X of size n."""

    pencil: LinearPencil
    alpha: object
    steps: int = 0

    def to_json(self):
        out = self.pencil.to_json()
        out["alpha"] = format_scalar(self.alpha)
        return out


# ---------------------------------------------------------------------------
# Higman enlargement


def _pick_split(M):
    """Highest-degree entry, leftmost highest-degree word in it."""
    best = None
    for a, row in enumerate(M):
        for b, p in enumerate(row):
            deg = p.degree()
            if deg >= 2 and (best is None or deg > best[0]):
                best = (deg, a, b)
    if best is None:
        return None
    deg, a, b = best
    p = M[a][b]
    w = min((w for w in p.terms if len(w) == deg), key=word_key)
    return a, b, w[0]


def higman_step(M, a, b, ell):
    """Replace entry (a, b) = r + ell*q by r and border with [ell e_a; -q e_b^T, 1].

    q collects every word of degree >= 2 starting with ``ell``; the Schur
    complement of the new unit pivot is the original matrix.
    """
    p = M[a][b]
    q_terms, r_terms = {}, {}
    for w, c in p.terms.items():
        if len(w) >= 2 and w[0] == ell:
            q_terms[w[1:]] = q_terms.get(w[1:], 0) + c
        else:
            r_terms[w] = c
    q = Poly(q_terms)
    d = len(M)
    out = [list(row) + [Poly()] for row in M]
    out[a][b] = Poly(r_terms)
    out[a][d] = Poly.monomial((ell,))
    last = [Poly() for _ in range(d + 1)]
    last[b] = -q
    last[d] = Poly.const(1)
    out.append(last)
    return out


def linearize(f, letters=None, verify=False, seed=0):
    """Stably associated linear pencil with alpha = 1 (each bordering keeps det)."""
    f = as_matrix_poly(f)
    if f.nrows != f.ncols:
        raise NotFull("non-square matrix polynomials are not full")
    if f.is_zero():
        raise NotFull("the zero polynomial is not full")
    M = [list(row) for row in f.entries]
    steps = 0
    while True:
        pick = _pick_split(M)
        if pick is None:
            break
        M = higman_step(M, *pick)
        steps += 1
    if letters is None:
        letters = _default_letters(f)
    pencil = LinearPencil.from_matrix_poly(MatrixPoly(M) if M else MatrixPoly.empty(0), letters)
    res = LinearizationResult(pencil, 1, steps)
    if verify:
        verify_linearization(f, res, seed=seed)
    return res


def _default_letters(f):
    ls = f.letters()
    if any(a % 2 for a in ls):
        return tuple(sorted(ls, key=lambda a: word_key((a,))))
    return tuple(letter(j) for j in range(1, max(f.num_vars(), 1) + 1))


# ---------------------------------------------------------------------------
# reduction to epic form


def _common_kernel(mats, d):
    rows = [r for A in mats for r in A.rows]
    if not rows:
        return [[1 if i == j else 0 for i in range(d)] for j in range(d)]
    return nullspace(rows, d)


def _complete_basis(v):
    """Invertible matrix whose last column is v."""
    d = len(v)
    piv = next(i for i, x in enumerate(v) if x != 0)
    cols = [[1 if i == j else 0 for i in range(d)] for j in range(d) if j != piv]
    cols.append(list(v))
    return Matrix([[c[i] for c in cols] for i in range(d)], d)


def _strip_column(L, v):
    """L with A_j v = 0 (j >= 1), A0 v != 0: return (smaller pencil, factor)."""
    d = L.d
    Q = _complete_basis(v)
    c = [sum(field(L.A0.rows[i][j]) * v[j] for j in range(d)) for i in range(d)]
    # P c = e_d: P^{-1} has last column c
    Pinv = _complete_basis(c)
    P = Pinv.inverse()
    T = L.transform(P, Q)
    idx = list(range(d - 1))
    small = LinearPencil(tuple(A.submatrix(idx, idx) for A in T.coeffs), L.letters)
    return small, P.det() * Q.det()


def minimize(L, alpha=1):
    """Strip constant columns/rows until the pencil is epic.

    Returns a LinearizationResult; ``alpha`` is updated so that
    alpha_new^n det f = det L_new whenever alpha^n det f = det L.
    """
    if isinstance(L, LinearizationResult):
        L, alpha = L.pencil, L.alpha
    steps = 0
    while L.d > 0:
        v = _first(_common_kernel(L.linear, L.d))
        if v is not None:
            if L.A0.is_zero() or all(
                sum(L.A0.rows[i][j] * v[j] for j in range(L.d)) == 0 for i in range(L.d)
            ):
                raise NotFull("pencil has a zero column after a constant basis change")
            L, fac = _strip_column(L, v)
            alpha = alpha * fac
            steps += 1
            continue
        w = _first(_common_kernel([A.T for A in L.linear], L.d))
        if w is not None:
            Lt = L.map_coeffs(lambda A: A.T)
            if all(sum(Lt.A0.rows[i][j] * w[j] for j in range(L.d)) == 0 for i in range(L.d)):
                raise NotFull("pencil has a zero row after a constant basis change")
            small, fac = _strip_column(Lt, w)
            L = small.map_coeffs(lambda A: A.T)
            alpha = alpha * fac
            steps += 1
            continue
        break
    return LinearizationResult(L, alpha, steps)


def _first(vs):
    return vs[0] if vs else None


def epic_linearization(f, verify=False, seed=0):
    return minimize(linearize(f, verify=verify, seed=seed))


def monicize(L):
    """A0^{-1} L."""
    if isinstance(L, LinearizationResult):
        L = L.pencil
    if L.d == 0:
        return L
    if not L.A0.is_invertible():
        raise SingularConstantTerm("constant coefficient is singular")
    if L.is_monic():
        return L
    inv = L.A0.inverse()
    return LinearPencil(tuple(inv @ A for A in L.coeffs), L.letters)


# ---------------------------------------------------------------------------
# verification


def verify_linearization(f, result, sizes=(1, 2, 3), points=10, seed=0, bound=5):
    """Check det f(X) alpha^n == det L(X) on random points; raise on failure."""
    from .evaluation import det_at, random_tuple

    f = as_matrix_poly(f)
    rng = random.Random(seed)
    cplx = not f.is_analytic()
    k = max(f.num_vars(), result.pencil.k and max((a >> 1) for a in result.pencil.letters), 1)
    g = result.pencil.to_matrix_poly()
    for n in sizes:
        an = field(result.alpha) ** n
        for _ in range(points):
            X = random_tuple(rng, k, n, bound, cplx)
            lhs = det_at(f, X) * an
            rhs = det_at(g, X) if result.pencil.d else 1
            if lhs != rhs:
                raise LinearizationError(f"determinant identity fails at size {n}")
    return True
