"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or through pytest; the
lines also appear in the pytest terminal summary.
"""

import time
from contextlib import contextmanager

import sympy

from freelocus.cli import RunConfig, render, run
from freelocus.evaluation import MatrixTuple, det_at, random_tuple
from freelocus.freealg import Poly, letter
from freelocus.hermitian import (
    UnsignaturedWitness,
    Unknown,
    finite_difference_gradient,
    gleichstellensatz_hermitian,
    gradient_conjugation_check,
    pencil_is_hermitian,
    real_containment_analytic,
    real_containment_montecarlo,
    unsignatured_search,
)
from freelocus.linalg import Matrix
from freelocus.linearize import LinearPencil, linearize, minimize, verify_linearization
from freelocus.parser import parse, to_text
from freelocus.slack import (
    PsatzCertificate,
    is_member,
    reduce,
    sample_hard_zero_consistency,
    slack_generator,
    verify_psatz,
)
from freelocus.structure import (
    Indecomposable,
    contain_intersection,
    equivalence_space,
    is_atom,
    is_indecomposable,
    locus_contains,
    pencil_equiv,
    refuting_point,
    stable_assoc,
)

from cli_fixtures import CORPUS
from gen import rand_invertible, rand_matrix, rand_poly, rng

RESULTS = {}


@contextmanager
def criterion(n):
    t0 = time.time()
    ok = False
    try:
        yield
        ok = True
    finally:
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({time.time() - t0:.1f}s)"
        RESULTS[n] = line
        print(line)


def test_criterion_1_linearization_identity():
    with criterion(1):
        t0 = time.time()
        r = rng(1)
        done = 0
        while done < 200:
            f = rand_poly(r, g=3, deg=3, terms=6)
            res = minimize(linearize(f).pencil)
            verify_linearization(f, res, sizes=(1, 2, 3), points=10, seed=done)
            done += 1
        assert time.time() - t0 < 60


def test_criterion_2_reference_commutator():
    with criterion(2):
        reference = LinearPencil.from_matrix_poly(parse("[-1, 0, x2; 0, -1, x1; x1, -x2, 0]"))
        ours = minimize(linearize(parse("x1 x2 - x2 x1")).pencil).pencil
        w = pencil_equiv(ours, reference)
        assert w is not None and w.verify(ours, reference)
        cs = sympy.symbols("c0:3")
        G = sympy.zeros(3)
        for A, c in zip(reference.coeffs, cs):
            G += c * sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in A.rows])
        assert sympy.expand(G.det()) == 0


def test_criterion_3_atomicity():
    with criterion(3):
        t0 = time.time()
        for text in ("x1", "x1 + x2 x3", "x1 x2 - x2 x1"):
            v = is_atom(parse(text))
            assert v.status == "yes", text
            assert v.certificate["closure_dim"] == v.certificate["ampliated_size"] ** 2
        for text in ("x1 x2", "0", "[1, x1; 0, 1]"):
            assert is_atom(parse(text)).status == "no", text
        assert time.time() - t0 < 120


def test_criterion_4_equivalence_round_trip():
    with criterion(4):
        r = rng(4)
        done = 0
        while done < 50:
            d, g = r.randint(1, 4), r.randint(1, 3)
            L = LinearPencil.make(Matrix.identity(d), *[rand_matrix(r, d) for _ in range(g)])
            if not isinstance(is_indecomposable(L), Indecomposable):
                continue
            P, Q = rand_invertible(r, d), rand_invertible(r, d)
            M = L.transform(P, Q)
            w = pencil_equiv(L, M, seed=done)
            assert w is not None and w.verify(L, M)
            assert len(equivalence_space(L, L)) == 1
            done += 1


def _random_atoms(count, seed):
    r = rng(seed)
    atoms = []
    while len(atoms) < count:
        t = {(): r.randint(-3, 3)}
        for _ in range(r.randint(1, 3)):
            t[tuple(letter(r.randint(1, 2)) for _ in range(r.randint(1, 2)))] = r.randint(-3, 3)
        f = Poly(t)
        if f.degree() >= 1 and is_atom(f).status == "yes":
            atoms.append(f)
    return atoms


def test_criterion_5_containment():
    with criterion(5):
        atoms = _random_atoms(60, 5)
        for i in range(30):
            f, h = atoms[2 * i], atoms[2 * i + 1]
            assert locus_contains(f, f * h, mode="certified", seed=i).status == "Proved"
            mc = locus_contains(f, f * h, n_max=2, trials=50, seed=i)
            assert mc.status == "ConsistentUpTo" and mc.witness["lines"] == 100
        v = locus_contains(parse("x1"), parse("x2"))
        X = refuting_point(v)
        assert v.status == "Refuted" and X.n == 1
        assert X == MatrixTuple((Matrix([[0]]), Matrix([[1]])))
        fs, h = [parse("x1"), parse("x2")], parse("x3")
        j, v = contain_intersection(fs, h)
        X = refuting_point(v)
        assert j is None and v.status == "Refuted" and v.witness["kind"] == "direct-sum"
        X3 = X.padded(3)
        assert all(det_at(f, X3) == 0 for f in fs) and det_at(h, X3) != 0


def test_criterion_6_real_suite():
    with criterion(6):
        w = unsignatured_search(parse("x1 x1' - x1' x1"), n_max=3, trials=333)
        assert isinstance(w, UnsignaturedWitness) and w.n <= 3
        const_sig = parse("[1 + x1 x1', x1; x1', -1 - x1' x1]")
        u = unsignatured_search(const_sig, sizes=[1], trials=500)
        assert isinstance(u, Unknown) and u.samples >= 500
        assert [list(s) for s in u.signatures] == [[1, 1, 0]] and u.singular == 0
        v = real_containment_analytic(parse("x1"), parse("x1'"))
        assert v.status == "Proved" and v.witness["via"] == "f*"
        f, h = parse("x1 x1' + x2 x2'"), parse("x1")
        assert real_containment_montecarlo(f, h).status == "ConsistentUpTo"
        assert stable_assoc(f, h) is None


def test_criterion_7_hermitian_gleichstellensatz():
    with criterion(7):
        r = rng(7)
        done = 0
        while done < 20:
            d, g = r.randint(1, 3), r.randint(1, 2)
            coeffs, letters = [Matrix.identity(d)], []
            for j in range(1, g + 1):
                A = rand_matrix(r, d, bound=3, cplx=True)
                coeffs += [A, A.H]
                letters += [letter(j), letter(j, True)]
            L = LinearPencil(tuple(coeffs), tuple(letters))
            assert pencil_is_hermitian(L)
            if not isinstance(is_indecomposable(L), Indecomposable):
                continue
            P = rand_invertible(r, d, cplx=True)
            s = r.choice([1, -1])
            M = L.transform(P.scale(s), P.H)
            res = gleichstellensatz_hermitian(L, M, seed=done)
            assert res.sign == s and res.verify(L, M)
            done += 1


def _slack_poly(r, terms, deg):
    return Poly({tuple(r.choice([0, 1, 2, 3, 4, 5]) for _ in range(r.randint(0, deg))): r.randint(-3, 3)
                 for _ in range(terms)})


def test_criterion_8_slack_ideal():
    with criterion(8):
        r = rng(8)
        f = parse("x1 x1' - x2 + 1")
        g = slack_generator(f)
        members = []
        for _ in range(500):
            h = Poly()
            for _ in range(r.randint(1, 3)):
                h = h + _slack_poly(r, 2, 2) * g * _slack_poly(r, 2, 2)
            assert is_member(h, f).member
            members.append(h)
        for _ in range(100):
            h = reduce(_slack_poly(r, 4, 4), f)
            h = h - Poly.const(h.terms.get((), 0)) + Poly.const(r.choice([1, -1, 2, -7]))
            assert not is_member(h, f).member
        for _ in range(100):
            h = _slack_poly(r, 4, 4)
            nf = reduce(h, f)
            assert all(reduce(h, f, rng=r) == nf for _ in range(10))
        for i, h in enumerate(members[:25]):
            assert sample_hard_zero_consistency(f, h, n=2, samples=2, seed=i).all_zero


def test_criterion_9_psatz():
    with criterion(9):
        r = rng(9)
        f = parse("1 - x1' x1 - x2' x2")
        g = slack_generator(f)
        for i in range(5):
            a, b = _slack_poly(r, 2, 2), _slack_poly(r, 2, 2)
            fjs = [rand_poly(r, g=2, deg=2, terms=3, star=True) for _ in range(r.randint(0, 3))]
            f0 = a * g * b + g
            h = f0 + sum((p.star() * p for p in fjs), Poly())
            res = verify_psatz(h, f, PsatzCertificate(fjs), spot_points=50, seed=i)
            assert res.accepted and res.spot_points == 50 and res.spot_check_min_eig >= -1e-8
        bad = verify_psatz(parse("-1"), f, PsatzCertificate([]))
        assert not bad.accepted


def test_criterion_10_gradient_conjugation():
    with criterion(10):
        r = rng(10)
        for i in range(20):
            f = rand_poly(r, g=2, deg=3, terms=4, cplx=i % 2 == 1)
            n = 1 + i % 2
            X = random_tuple(r, 2, n, 3, complex_entries=True)
            exact = gradient_conjugation_check(f, X)
            fd = finite_difference_gradient(f, X)
            for j, a, b, lhs, _ in exact:
                val = complex(lhs)
                assert abs(val - fd[(j, a, b)]) <= 1e-6 * max(1.0, abs(val))


def test_criterion_11_cli():
    with criterion(11):
        for command, items, flags, expected in CORPUS:
            cfg = RunConfig(seed=3, certified="--certified" in flags)
            c1, d1 = run(command, items, cfg)
            c2, d2 = run(command, items, cfg)
            assert c1 == expected, (command, items, c1)
            assert render(d1, "json") == render(d2, "json")
        r = rng(11)
        for k in range(500):
            p = rand_poly(r, g=3, deg=3, terms=5, star=True, cplx=k % 2 == 0)
            assert parse(to_text(p)) == p


def pytest_report_lines():
    return [RESULTS[n] for n in sorted(RESULTS)]


if __name__ == "__main__":
    import sys

    names = [k for k in globals() if k.startswith("test_criterion_")]
    fns = [globals()[k] for k in sorted(names, key=lambda k: int(k.split("_")[2]))]
    failed = 0
    for fn in fns:
        try:
            fn()
        except Exception:
            failed += 1
    sys.exit(1 if failed else 0)
