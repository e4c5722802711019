"""Rewriting modulo the slack ideal (f - y^*y), membership and
Positivstellensatz certificate checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .evaluation import MatrixTuple, evaluate, random_matrix
from .freealg import (
    Y,
    YSTAR,
    MatrixPoly,
    NotScalar,
    Poly,
    letter_var,
    quadratic_parts,
)
from .linalg import Matrix, hermitian_signature
from .scalars import norm2

PATTERN = (YSTAR, Y)


class ConstantF(ValueError):
    pass


class SlackInF(ValueError):
    pass


class NoPositivityWitness(RuntimeError):
    pass


class MalformedCertificate(ValueError):
    pass


def _scalar(p):
    if isinstance(p, MatrixPoly):
        if p.shape != (1, 1):
            raise NotScalar("expected a scalar polynomial")
        return p.entries[0][0]
    if isinstance(p, Poly):
        return p
    return Poly.const(p)


def _check_f(f):
    f = _scalar(f)
    if f.is_constant():
        raise ConstantF("the slack ideal needs a nonconstant f")
    if any(letter_var(a) == 0 for a in f.letters()):
        raise SlackInF("f must not contain y or y^*")
    return f


def _sites(w):
    return [i for i in range(len(w) - 1) if w[i] == YSTAR and w[i + 1] == Y]


def slack_generator(f):
    """f - y^*y."""
    f = _check_f(f)
    return f - Poly.monomial(PATTERN)


def reduce(h, f, rng=None):
    """Normal form of h modulo (f - y^*y): rewrite y^*y -> f until no word
    contains it.  Leftmost site by default; a random site when ``rng`` is
    given (the result is the same either way)."""
    f = _check_f(f)
    h = _scalar(h)
    fterms = list(f.terms.items())
    memo = {}

    def nf(w):
        if rng is None and w in memo:
            return memo[w]
        sites = _sites(w)
        if not sites:
            out = {w: 1}
        else:
            i = rng.choice(sites) if rng is not None else sites[0]
            u, v = w[:i], w[i + 2:]
            out = {}
            for fw, c in fterms:
                for ww, cc in nf(u + fw + v).items():
                    out[ww] = out.get(ww, 0) + c * cc
        if rng is None:
            memo[w] = out
        return out

    acc = {}
    words = list(h.terms.items())
    if rng is not None:
        rng.shuffle(words)
    for w, c in words:
        for ww, cc in nf(w).items():
            acc[ww] = acc.get(ww, 0) + c * cc
    return Poly(acc)


def is_normal(h):
    return not any(_sites(w) for w in _scalar(h).terms)


@dataclass
class Membership:
    member: bool
    normal_form: Poly

    @property
    def verdict(self):
        return "yes" if self.member else "no"

    def to_json(self):
        from .parser import to_text

        return {"verdict": self.verdict, "normal_form": to_text(self.normal_form)}


def is_member(h, f):
    nf = reduce(h, f)
    return Membership(nf.is_zero(), nf)


# ---------------------------------------------------------------------------
# hard-zero sampling


@dataclass
class ConsistencyReport:
    samples: int
    max_deviation: float
    all_zero: bool
    n: int

    def to_json(self):
        return {"samples": self.samples, "n": self.n, "max_deviation": self.max_deviation, "all_zero": self.all_zero}


def sample_hard_zero_consistency(f, h, n=2, samples=10, seed=0, bound=5):
    """Evaluate h at x -> X, x^* -> X' (independent), y -> Y, y^* -> f(X, X') Y^{-1}.

    On such points y^*y = f holds exactly, so members of the slack ideal
    vanish identically.
    """
    f = _check_f(f)
    h = _scalar(h)
    rng = random.Random(seed)
    k = max(f.num_vars(), h.num_vars(), 1)
    worst = 0.0
    zero = True
    for _ in range(samples):
        xs = tuple(random_matrix(rng, n, bound) for _ in range(k))
        ys = tuple(random_matrix(rng, n, bound) for _ in range(k))
        Yv = random_matrix(rng, n, bound)
        while not Yv.is_invertible():
            Yv = random_matrix(rng, n, bound)
        X = MatrixTuple(xs, ys, star=False)
        F = evaluate(f, X)
        Ys = F @ Yv.inverse()
        Z = MatrixTuple(xs, ys, star=False, slack=(Yv, Ys))
        val = evaluate(h, Z)
        for r in val.rows:
            for x in r:
                if x != 0:
                    zero = False
                    worst = max(worst, float(norm2(x)) ** 0.5)
    return ConsistencyReport(samples, worst, zero, n)


# ---------------------------------------------------------------------------
# Positivstellensatz certificates


@dataclass
class PsatzCertificate:
    """h = f0 + sum_j f_j^* f_j with f0 in the slack ideal."""

    fjs: list = dc_field(default_factory=list)

    def sos(self):
        acc = Poly()
        for fj in self.fjs:
            fj = _scalar(fj)
            acc = acc + fj.star() * fj
        return acc

    def residual(self, h):
        return _scalar(h) - self.sos()

    def to_json(self):
        from .parser import to_text

        return {"fj": [to_text(_scalar(p)) for p in self.fjs]}


@dataclass
class PsatzResult:
    accepted: bool
    residual: Poly
    spot_check_min_eig: float | None = None
    spot_points: int = 0

    @property
    def verdict(self):
        return "Accept" if self.accepted else "Reject"

    def to_json(self):
        from .parser import to_text

        return {
            "verdict": self.verdict,
            "residual_normal_form": to_text(self.residual),
            "spot_check_points": self.spot_points,
            "spot_check_min_eigenvalue": self.spot_check_min_eig,
        }


def positivity_witness(f, n_max=3, trials=50, seed=0):
    """A star-evaluation point X with f(X, X^*) positive definite."""
    f = _scalar(f)
    rng = random.Random(seed)
    k = max(f.num_vars(), 1)
    for n in range(1, n_max + 1):
        candidates = [MatrixTuple(tuple(Matrix.zeros(n) for _ in range(k)))]
        for _ in range(trials):
            candidates.append(MatrixTuple(tuple(random_matrix(rng, n, 2, True) for _ in range(k))))
        for X in candidates:
            s = hermitian_signature(evaluate(f, X))
            if s.pos == n:
                return X
    return None


def _eval_float(p, vals, n):
    import numpy as np

    out = np.zeros((n, n), dtype=complex)
    for w, c in p.terms.items():
        m = np.eye(n, dtype=complex)
        for a in w:
            m = m @ vals[a]
        out += complex(c) * m
    return out


def psatz_spot_check(h, f, points=50, n=2, seed=0, tries=2000):
    """Min eigenvalue of h(X, X^*, Y, Y^*) over sampled X with f(X, X^*) >= 0,
    where Y^*Y = f(X, X^*) (hermitian square root)."""
    import numpy as np

    h, f = _scalar(h), _scalar(f)
    rng = np.random.default_rng(seed)
    k = max(f.num_vars(), h.num_vars(), 1)
    got = 0
    worst = None
    for _ in range(tries):
        if got >= points:
            break
        scale = rng.uniform(0.05, 1.5)
        xs = [scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n) for _ in range(k)]
        vals = {}
        for j, m in enumerate(xs, start=1):
            vals[2 * j] = m
            vals[2 * j + 1] = m.conj().T
        F = _eval_float(f, vals, n)
        F = (F + F.conj().T) / 2
        ev, U = np.linalg.eigh(F)
        if ev.min() < 0:
            continue
        root = U @ np.diag(np.sqrt(ev)) @ U.conj().T
        vals[Y] = root
        vals[YSTAR] = root.conj().T
        H = _eval_float(h, vals, n)
        H = (H + H.conj().T) / 2
        m = float(np.linalg.eigvalsh(H).min())
        worst = m if worst is None else min(worst, m)
        got += 1
    return worst, got


def verify_psatz(h, f, cert, positivity_point=None, spot_points=50, seed=0):
    """Accept iff h - sum f_j^* f_j lies in (f - y^*y)."""
    f = _scalar(f)
    quadratic_parts(f)
    if not isinstance(cert, PsatzCertificate):
        raise MalformedCertificate("certificate must be a PsatzCertificate")
    X = positivity_point if positivity_point is not None else positivity_witness(f, seed=seed)
    if X is None or hermitian_signature(evaluate(f, X)).pos != X.n:
        raise NoPositivityWitness("no point with f(X, X^*) positive definite found")
    res = reduce(cert.residual(h), f)
    if not res.is_zero():
        return PsatzResult(False, res)
    worst, got = psatz_spot_check(h, f, spot_points, seed=seed) if spot_points else (None, 0)
    if worst is not None and worst < -1e-8:
        raise AssertionError(f"accepted certificate fails the positivity spot check ({worst})")
    return PsatzResult(True, res, worst, got)
