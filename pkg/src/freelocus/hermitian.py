"""Real structure: star evaluations, unsignatured witnesses, real line probes,
real containment and the hermitian pencil equivalence."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .evaluation import (
    AffineLine,
    MatrixTuple,
    det_along_line,
    det_at,
    evaluate,
    random_line,
    random_tuple,
    symbolic_generic_det,
)
from .freealg import as_matrix_poly, forget_involution, involution, letter_is_star
from .linalg import Matrix, NotHermitian, hermitian_signature
from .linearize import LinearPencil
from .scalars import Gaussian, conj, format_scalar, gauss
from .structure import (
    ContainmentVerdict,
    _grid_points,
    locus_contains,
    pencil_equiv,
)
from .unipoly import gcd, isolate_real_root, squarefree_part, sturm_real_root_count


class NotAnalytic(ValueError):
    pass


class NotAtom(ValueError):
    pass


class InvalidWitness(ValueError):
    pass


class NeedsFieldExtension(ValueError):
    pass


def star_evaluate(f, X):
    """f(X, X^*) for a star-mode tuple."""
    if not X.star:
        X = MatrixTuple(X.xs, None, True)
    return evaluate(f, X)


def _require_hermitian(f):
    if not as_matrix_poly(f).is_hermitian():
        raise NotHermitian("polynomial is not hermitian")


# ---------------------------------------------------------------------------
# unsignatured witnesses


@dataclass
class UnsignaturedWitness:
    n: int
    X: MatrixTuple
    Y: MatrixTuple
    sig_X: object
    sig_Y: object

    verdict = "Unsignatured"

    def verify(self, f):
        sx = hermitian_signature(star_evaluate(f, self.X))
        sy = hermitian_signature(star_evaluate(f, self.Y))
        return sx.zero == 0 and sy.zero == 0 and sx != sy and sx == self.sig_X and sy == self.sig_Y

    def to_json(self):
        return {"verdict": self.verdict, "n": self.n, "X": self.X.to_json(), "Y": self.Y.to_json(),
                "sig_X": self.sig_X.to_json(), "sig_Y": self.sig_Y.to_json()}


@dataclass
class KnownByMonicPencil:
    note: str = "hermitian monic pencils are unsignatured"

    verdict = "KnownByMonicPencil"

    def to_json(self):
        return {"verdict": self.verdict, "note": self.note}


@dataclass
class Unknown:
    samples: int
    signatures: list  # distinct signatures of invertible samples
    singular: int

    verdict = "Unknown"

    def to_json(self):
        return {"verdict": self.verdict, "samples": self.samples, "singular_samples": self.singular,
                "signatures": [list(s) for s in self.signatures]}


def _is_monic_pencil(f):
    return f.degree() <= 1 and f.constant_term().is_identity()


def unsignatured_search(f, n_max=3, trials=400, seed=0, bound=3, sizes=None):
    """Random star evaluations until two invertible values differ in signature."""
    f = as_matrix_poly(f)
    _require_hermitian(f)
    rng = random.Random(seed)
    k = max(f.num_vars(), 1)
    sizes = sizes or range(1, n_max + 1)
    seen = []
    count = singular = 0
    for n in sizes:
        first = None
        for _ in range(trials):
            X = random_tuple(rng, k, n, bound, complex_entries=True)
            count += 1
            sig = hermitian_signature(star_evaluate(f, X))
            if sig.zero:
                singular += 1
                continue
            if sig not in seen:
                seen.append(sig)
            if first is None:
                first = (X, sig)
            elif sig != first[1]:
                w = UnsignaturedWitness(n, first[0], X, first[1], sig)
                if not w.verify(f):
                    raise AssertionError("unsignatured witness failed exact verification")
                return w
    if _is_monic_pencil(f):
        return KnownByMonicPencil()
    return Unknown(count, seen, singular)


# ---------------------------------------------------------------------------
# real line probes


@dataclass
class RealRefutation:
    line: AffineLine | None
    interval: tuple | None
    factor: object = None
    point: MatrixTuple | None = None

    verdict = "Refuted"

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.point is not None:
            out["point"] = self.point.to_json()
        if self.line is not None:
            out["line"] = self.line.to_json()
            out["interval"] = [format_scalar(x) for x in self.interval]
            out["factor"] = self.factor.to_json()
        return out


@dataclass
class Consistent:
    lines: int
    n: int

    verdict = "Consistent"

    def to_json(self):
        return {"verdict": self.verdict, "lines": self.lines, "n": self.n}


def _real_zero_poly(p):
    """Polynomial with the same real roots as p (p itself when real)."""
    if p.is_real():
        return p
    return gcd(p, p.conj())


def _real_line(rng, k, n, bound):
    """Real-rational line (entries in Q), used for analytic inputs."""
    return random_line(rng, k, n, bound, complex_entries=False)


def real_line_probe(f, h, n=1, trials=50, seed=0, bound=5, real_lines=None, require_hermitian=True):
    """Search for a real point in Z_re(f) outside Z_re(h).

    Lines are X(t) = X0 + t X1 with real t.  Refutations carry an interval
    isolating a real root of r = sf(p) / gcd(sf(p), q qbar).
    """
    f, h = as_matrix_poly(f), as_matrix_poly(h)
    if require_hermitian:
        _require_hermitian(f)
    k = max(f.num_vars(), h.num_vars(), 1)
    if real_lines is None:
        real_lines = f.is_analytic() and h.is_analytic()
    for X in _grid_points(k):
        if det_at(f, X) == 0 and det_at(h, X) != 0:
            return RealRefutation(None, None, point=X)
    rng = random.Random(seed)
    for _ in range(trials):
        line = _real_line(rng, k, n, bound) if real_lines else random_line(rng, k, n, bound, True)
        p = det_along_line(f, line)
        if p.is_zero():
            q = det_along_line(h, line)
            if not q.is_zero():
                t = next(t for t in range(q.degree + 2) if q(t) != 0)
                return RealRefutation(None, None, point=line.at(t))
            continue
        if require_hermitian and not p.is_real():
            raise AssertionError("hermitian determinant along a real line must be real")
        P = _real_zero_poly(p)
        if P.degree < 1:
            continue
        q = det_along_line(h, line)
        qq = q * q.conj()
        sf = squarefree_part(P)
        r = sf if qq.is_zero() else sf // gcd(sf, qq)
        if qq.is_zero():
            continue
        if r.degree >= 1 and sturm_real_root_count(r) > 0:
            iv = isolate_real_root(r)
            pt = line.at(iv[0]) if iv[0] == iv[1] else None
            return RealRefutation(line, iv, r, pt)
    return Consistent(trials, n)


def real_containment_montecarlo(f, h, sizes=(1, 2), trials=50, seed=0):
    """Sampled real containment: Refuted with an exact certificate or consistent."""
    for n in sizes:
        res = real_line_probe(f, h, n, trials, seed + n, require_hermitian=as_matrix_poly(f).is_hermitian())
        if isinstance(res, RealRefutation):
            return ContainmentVerdict("Refuted", res.to_json())
    return ContainmentVerdict("ConsistentUpTo", {"path": "montecarlo", "sizes": list(sizes), "lines_per_size": trials})


# ---------------------------------------------------------------------------
# real containment decisions


def _forget_pair(fs):
    fs = [as_matrix_poly(f) for f in fs]
    g = max(max(f.num_vars() for f in fs), 1)
    return [forget_involution(f, g) for f in fs], g


def real_containment_analytic(f, h, n_max=3, trials=20, seed=0):
    """Z_re(f) subset Z_re(h) for an analytic atom f: test f and f^* against h
    in the 2g-letter context (certified)."""
    f = as_matrix_poly(f)
    if not f.is_analytic():
        raise NotAnalytic("f must not contain starred letters")
    from .structure import is_atom

    if is_atom(f, seed=seed).status == "no":
        raise NotAtom("f is not an atom")
    (fa, fs, ha), g = _forget_pair([f, involution(f), h])
    verdicts = {}
    for tag, cand in (("f", fa), ("f*", fs)):
        v = locus_contains(cand, ha, n_max=n_max, trials=trials, seed=seed, mode="certified")
        verdicts[tag] = v
        if v.status == "Proved":
            return ContainmentVerdict("Proved", {"via": tag, **v.witness})
    if all(v.status == "Refuted" for v in verdicts.values()):
        probe = real_line_probe(f, h, 1, 50, seed, require_hermitian=False)
        if isinstance(probe, RealRefutation):
            return ContainmentVerdict("Refuted", {"real": True, **probe.to_json()})
        return ContainmentVerdict("Refuted", {"real": False, "note": "complex refutation only",
                                              "f": verdicts["f"].witness.get("kind"),
                                              "f*": verdicts["f*"].witness.get("kind")})
    return ContainmentVerdict("ConsistentUpTo", {"f": verdicts["f"].to_json(), "f*": verdicts["f*"].to_json()})


def real_containment_hermitian(f, h, witness, n_max=3, trials=20, seed=0):
    """Z_re(f) subset Z_re(h) for an unsignatured hermitian atom f."""
    f = as_matrix_poly(f)
    _require_hermitian(f)
    if witness is None or not isinstance(witness, UnsignaturedWitness) or not witness.verify(f):
        raise InvalidWitness("an exactly verified unsignatured witness is required")
    from .structure import is_atom

    if is_atom(f, seed=seed).status == "no":
        raise NotAtom("f is not an atom")
    (fa, ha), _ = _forget_pair([f, h])
    v = locus_contains(fa, ha, n_max=n_max, trials=trials, seed=seed, mode="certified")
    if v.status == "Refuted":
        probe = real_line_probe(f, h, witness.n, 50, seed, real_lines=False)
        if isinstance(probe, RealRefutation):
            return ContainmentVerdict("Refuted", {"real": True, **probe.to_json()})
    return v


# ---------------------------------------------------------------------------
# pencil Gleichstellensaetze


def pencil_star(L):
    """L^*: coefficient of a letter's adjoint is the conjugate transpose."""
    return LinearPencil((L.A0.H,) + tuple(A.H for A in L.linear), tuple(a ^ 1 for a in L.letters))


def pencil_is_hermitian(L):
    from .structure import _union_letters

    Ls = pencil_star(L)
    ls = _union_letters([L, Ls])
    return L.with_letters(ls).coeffs == Ls.with_letters(ls).coeffs


def gleichstellensatz_analytic(L, M, seed=0):
    """(witness, tag) with M = P L Q (tag "L") or M = P L^* Q (tag "L*"), or None."""
    if any(letter_is_star(a) for a in L.letters):
        raise NotAnalytic("L must be analytic")
    if L.d != M.d:
        return None
    w = pencil_equiv(L, M, seed)
    if w is not None:
        return w, "L"
    w = pencil_equiv(pencil_star(L), M, seed)
    if w is not None:
        return w, "L*"
    return None


def _rational_sqrt(q):
    q = Fraction(q)
    from math import isqrt

    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def norm_preimage(q):
    """c in Q(i) with |c|^2 = q (q > 0 rational), or None."""
    q = Fraction(q)
    r = _rational_sqrt(q)
    if r is not None:
        return r
    from sympy.solvers.diophantine.diophantine import sum_of_squares

    n = q.numerator * q.denominator
    for u, v in sum_of_squares(n, 2, zeros=True):
        return gauss(Fraction(u, q.denominator), Fraction(v, q.denominator))
    return None


@dataclass
class HermitianEquivalence:
    sign: int
    P: Matrix

    def verify(self, L, M):
        from .structure import _union_letters

        ls = _union_letters([L, M])
        a, b = L.with_letters(ls), M.with_letters(ls)
        return all((self.P @ A @ self.P.H).scale(self.sign) == B for A, B in zip(a.coeffs, b.coeffs))

    def to_json(self):
        return {"sign": self.sign, "P": self.P.to_json()}


def gleichstellensatz_hermitian(L, M, witness=None, seed=0):
    """(sign, P) with M = sign * P L P^*, or None.

    From M = P L Q and hermitian symmetry, Q = beta P^* with real beta;
    P is rescaled by c with |c|^2 = |beta|.
    """
    if not pencil_is_hermitian(L) or not pencil_is_hermitian(M):
        raise NotHermitian("both pencils must be hermitian")
    if witness is not None and not isinstance(witness, KnownByMonicPencil):
        if not witness.verify(L.to_matrix_poly()):
            raise InvalidWitness("unsignatured witness does not verify")
    if L.d != M.d:
        return None
    w = pencil_equiv(L, M, seed)
    if w is None:
        return None
    P, Q = w.P, w.Q
    Ph = P.H
    i, j = next((i, j) for i in range(L.d) for j in range(L.d) if Ph.rows[i][j] != 0)
    beta = Q.rows[i][j] / Ph.rows[i][j]
    if isinstance(beta, Gaussian) or Q != Ph.scale(beta):
        raise AssertionError("stabilizer argument failed: Q is not a real multiple of P^*")
    sign = 1 if beta > 0 else -1
    c = norm_preimage(abs(beta))
    if c is None:
        raise NeedsFieldExtension(f"|beta| = {beta} is not a norm from Q(i)")
    res = HermitianEquivalence(sign, P.scale(c))
    if not res.verify(L, M):
        raise AssertionError("hermitian equivalence failed exact verification")
    return res


# ---------------------------------------------------------------------------
# gradient conjugation


def gradient_conjugation_check(f, X):
    """Exact check of d det f / d w_{j i k} at X == conj(d det f^* / d v_{j k i} at X^*).

    Returns the list of (j, i, k, lhs, rhs) compared; raises on mismatch.
    """
    f = as_matrix_poly(f)
    if not f.is_analytic():
        raise NotAnalytic("gradient conjugation is stated for analytic f")
    n = X.n
    Df = symbolic_generic_det(f, n)
    Ds = symbolic_generic_det(involution(f), n)
    Xs = MatrixTuple(X.xs, None, True)
    out = []
    for j in range(1, max(f.num_vars(), 1) + 1):
        for i in range(1, n + 1):
            for k in range(1, n + 1):
                lhs = Df.partial(j, i, k).evaluate(Xs)
                rhs = conj(Ds.partial(j, k, i, starred=True).evaluate(Xs))
                if lhs != rhs:
                    raise AssertionError(f"gradient conjugation fails at ({j},{i},{k})")
                out.append((j, i, k, lhs, rhs))
    return out


def finite_difference_gradient(f, X, h=1e-5):
    """Central differences of det f at X in every entry (numpy, complex)."""
    import numpy as np

    f = as_matrix_poly(f)
    n = X.n
    base = [m.to_numpy() for m in X.xs]
    def det_of(mats):
        d = f.nrows
        big = np.zeros((d * n, d * n), dtype=complex)
        for a in range(d):
            for b in range(d):
                acc = np.zeros((n, n), dtype=complex)
                for w, c in f.entries[a][b].terms.items():
                    m = np.eye(n, dtype=complex)
                    for ell in w:
                        m = m @ mats[(ell >> 1) - 1]
                    acc += (complex(c) if isinstance(c, Gaussian) else float(c)) * m
                big[a * n:(a + 1) * n, b * n:(b + 1) * n] = acc
        return np.linalg.det(big)

    grads = {}
    for j in range(len(base)):
        for i in range(n):
            for k in range(n):
                plus = [m.copy() for m in base]
                minus = [m.copy() for m in base]
                plus[j][i, k] += h
                minus[j][i, k] -= h
                grads[(j + 1, i + 1, k + 1)] = (det_of(plus) - det_of(minus)) / (2 * h)
    return grads
