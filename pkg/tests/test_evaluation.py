from fractions import Fraction

import pytest
import sympy

from freelocus.evaluation import (
    AffineLine,
    ArityMismatch,
    Full,
    MatrixTuple,
    ModeMismatch,
    NotUnit,
    ProbablyNotFull,
    ProbablyUnit,
    TooLarge,
    det_along_line,
    det_at,
    estimate_locus_degree,
    evaluate,
    evaluate_mod_p,
    fullness_test,
    omega,
    random_line,
    random_tuple,
    schwartz_zippel,
    symbolic_generic_det,
    unit_test,
)
from freelocus.freealg import Poly
from freelocus.linalg import Matrix, det_mod_p
from freelocus.parser import parse
from freelocus.scalars import DEFAULT_PRIME

from gen import rand_matrix_poly, rand_poly, rng

COMM = parse("x1 x2 - x2 x1")


def test_evaluate_examples():
    E12, E21 = Matrix.unit(0, 1, 2), Matrix.unit(1, 0, 2)
    assert evaluate(COMM, MatrixTuple((E12, E21))) == Matrix.diag([1, -1])
    X = random_tuple(rng(1), 2, 3, 5)
    assert evaluate(Poly.const(Fraction(7, 2)), X) == Matrix.scalar(Fraction(7, 2), 3)
    f = parse("x1 x2 + 3 x2 x2 x1 - 1")
    s = MatrixTuple((Matrix([[2]]), Matrix([[5]])))
    assert evaluate(f, s) == Matrix([[2 * 5 + 3 * 25 * 2 - 1]])


def test_evaluate_errors():
    with pytest.raises(ArityMismatch):
        evaluate(parse("x3"), MatrixTuple((Matrix([[1]]),)))
    with pytest.raises(ModeMismatch):
        evaluate(parse("y"), MatrixTuple((Matrix([[1]]),)))
    with pytest.raises(ValueError):
        MatrixTuple((Matrix.zeros(2), Matrix.zeros(3)))


def test_det_along_line_examples():
    line = AffineLine(MatrixTuple((Matrix([[0]]),)), MatrixTuple((Matrix([[1]]),)))
    assert det_along_line(parse("x1"), line).coeffs == (0, 1)
    r = rng(2)
    assert det_along_line(COMM, random_line(r, 2, 1, 5)).is_zero()
    line = random_line(r, 2, 2, 5)
    p = det_along_line(COMM, line)
    assert p.degree <= 4
    for _ in range(5):
        t0 = Fraction(r.randint(-20, 20), r.randint(1, 7))
        assert p(t0) == det_at(COMM, line.at(t0))


def test_fullness_examples():
    v = fullness_test(COMM, seed=3)
    assert isinstance(v, Full) and v.witness.n == 2 and det_at(COMM, v.witness) == v.det != 0
    assert isinstance(fullness_test(Poly(), n_max=2), ProbablyNotFull)
    outer = parse("[x1 x1, x1 x2; x2 x1, x2 x2]")
    v = fullness_test(outer, n_max=3, trials=10)
    assert isinstance(v, ProbablyNotFull)
    assert all(0 <= b <= 1 for b in v.bounds.values())


def test_unit_examples():
    assert isinstance(unit_test(Poly.const(3), n_max=2), ProbablyUnit)
    v = unit_test(parse("x1"), seed=4)
    assert isinstance(v, NotUnit) and v.poly.degree == 1
    assert isinstance(unit_test(parse("[1, x1; 0, 1]"), n_max=3), ProbablyUnit)


def test_locus_degree_examples():
    assert estimate_locus_degree(parse("x1"), seed=5).samples == [(1, 1), (2, 2), (3, 3), (4, 4)]
    d = estimate_locus_degree(parse("x1 x2"), seed=6)
    assert d.samples == [(n, 2 * n) for n in (1, 2, 3, 4)] and d.slope == 2
    d = estimate_locus_degree(COMM, seed=7)
    assert d.samples[0] == (1, 0)
    ds = dict(d.samples)
    assert ds[2] < ds[3] < ds[4]


def test_degree_superadditivity():
    r = rng(8)
    for _ in range(8):
        f = rand_poly(r, g=2, deg=3, terms=4)
        ds = dict(estimate_locus_degree(f, sizes=(1, 2, 3), trials=3, seed=r.randint(0, 99)).samples)
        assert ds[1] + ds[1] <= ds[2]
        assert ds[1] + ds[2] <= ds[3]


def test_det_multiplicativity():
    r = rng(9)
    for _ in range(100):
        f, g = rand_matrix_poly(r, 2), rand_matrix_poly(r, 2)
        X = random_tuple(r, 2, r.randint(1, 2), 4)
        assert det_at(f @ g, X) == det_at(f, X) * det_at(g, X)


def test_direct_sum_of_points():
    r = rng(10)
    for _ in range(30):
        f = rand_matrix_poly(r, 2)
        X, Y = random_tuple(r, 2, 1, 4), random_tuple(r, 2, 2, 4)
        assert det_at(f, X.direct_sum(Y)) == det_at(f, X) * det_at(f, Y)


def test_mod_p_consistency():
    p = DEFAULT_PRIME
    r = rng(11)
    for _ in range(40):
        f = rand_matrix_poly(r, 2)
        xs = tuple(Matrix([[Fraction(r.randint(-9, 9), r.randint(1, 4)) for _ in range(2)] for _ in range(2)]) for _ in range(2))
        X = MatrixTuple(xs)
        exact = evaluate(f, X)
        mod = evaluate_mod_p(f, X, p)
        want = [[(x.numerator * pow(x.denominator, -1, p)) % p for x in map(Fraction, row)] for row in exact.rows]
        assert mod == want
        assert det_mod_p(mod, p) == (Fraction(exact.det()).numerator * pow(Fraction(exact.det()).denominator, -1, p)) % p


def test_schwartz_zippel_bound():
    assert schwartz_zippel(4, 21, 1) == pytest.approx(4 / 21)
    assert schwartz_zippel(40, 21, 3) == 1.0


def test_symbolic_examples():
    w111, w112, w121, w122 = (omega(1, i, k) for i, k in ((1, 1), (1, 2), (2, 1), (2, 2)))
    assert symbolic_generic_det(parse("x1"), 1).expr == w111
    assert symbolic_generic_det(COMM, 1).expr == 0
    assert sympy.expand(symbolic_generic_det(parse("x1"), 2).expr - (w111 * w122 - w112 * w121)) == 0
    with pytest.raises(TooLarge):
        symbolic_generic_det(parse("x1"), 3)


def test_symbolic_matches_evaluation():
    r = rng(12)
    for _ in range(10):
        f = rand_matrix_poly(r, r.randint(1, 2), g=2, deg=2, terms=2)
        G = symbolic_generic_det(f, 2)
        X = random_tuple(r, 2, 2, 5)
        assert G.evaluate(X) == det_at(f, X)
