import pytest

from freelocus.evaluation import MatrixTuple, evaluate, random_tuple
from freelocus.freealg import (
    ANALYTIC,
    INVOLUTIVE,
    SLACK,
    MatrixPoly,
    NotHereditaryQuadratic,
    Poly,
    Y,
    ampliate,
    ampliation_index,
    as_matrix_poly,
    assemble_block_tuple,
    canonical_shuffle,
    direct_sum,
    forget_involution,
    involution,
    letter,
    mul,
    quadratic_parts,
    remember_involution,
    word_key,
)
from freelocus.linalg import Matrix, block_diag
from freelocus.linearize import LinearPencil
from freelocus.parser import parse
from freelocus.scalars import I

from gen import rand_matrix, rand_matrix_poly, rand_poly, rand_word, rng

x1, x2 = Poly.var(1), Poly.var(2)
x1s, x2s = Poly.var(1, True), Poly.var(2, True)


def test_involution_examples():
    assert involution(x1 * x2) == as_matrix_poly(x2s * x1s)
    assert involution(MatrixPoly.constant(Matrix([[I]]))) == MatrixPoly.constant(Matrix([[-I]]))
    h = x1 + x1s
    assert h.star() == h and h.is_hermitian()


def test_involution_is_antimultiplicative():
    r = rng(21)
    for _ in range(50):
        f, g = rand_poly(r, star=True, cplx=True), rand_poly(r, star=True, cplx=True)
        assert (f * g).star() == g.star() * f.star()
        assert f.star().star() == f
        assert f.star().degree() == f.degree()


def test_mul_examples():
    p = mul(x1, x2)
    assert p.entries[0][0].terms == {(letter(1), letter(2)): 1}
    f = rand_matrix_poly(rng(22), 2)
    assert mul(f, MatrixPoly.identity(2)) == f
    comm = x1 * x2 - x2 * x1
    r = rng(23)
    for _ in range(5):
        X = random_tuple(r, 2, 2, 5)
        A, B = X.xs
        assert evaluate(comm, X) == A @ B - B @ A
        assert evaluate(mul(x1, x2) - mul(x2, x1), X) == evaluate(comm, X)


def test_degree_bookkeeping():
    r = rng(24)
    for _ in range(40):
        f, g = rand_poly(r), rand_poly(r)
        assert (f * g).degree() <= f.degree() + g.degree()
        u = Poly.monomial(rand_word(r, 3, r.randint(0, 4)), 2)
        v = Poly.monomial(rand_word(r, 3, r.randint(0, 4)), 3)
        assert (u * v).degree() == u.degree() + v.degree()


def test_evaluation_commutes_with_involution():
    r = rng(25)
    for _ in range(100):
        f = rand_matrix_poly(r, r.randint(1, 2), g=2, star=True)
        X = random_tuple(r, 2, r.randint(1, 2), 4, complex_entries=True)
        assert evaluate(f.star(), X) == evaluate(f, X).H


def test_evaluation_is_homomorphism():
    r = rng(26)
    for _ in range(40):
        f, g = rand_matrix_poly(r, 2), rand_matrix_poly(r, 2)
        X = random_tuple(r, 2, 2, 4)
        assert evaluate(f @ g, X) == evaluate(f, X) @ evaluate(g, X)
        assert evaluate(f + g, X) == evaluate(f, X) + evaluate(g, X)


def test_direct_sum_examples():
    r = rng(27)
    f, g = rand_matrix_poly(r, 2), rand_matrix_poly(r, 1)
    X = random_tuple(r, 2, 2, 4)
    assert evaluate(direct_sum(f, f), X) == block_diag(evaluate(f, X), evaluate(f, X))
    assert evaluate(direct_sum(f, g), X).det() == evaluate(f, X).det() * evaluate(g, X).det()
    one = Poly.const(1)
    assert direct_sum(one, one) == MatrixPoly.identity(2)


def test_ampliation_examples():
    fx = ampliate(x1, [Matrix.zeros(2)])
    for i in range(2):
        for k in range(2):
            assert fx.entries[i][k] == Poly.var(ampliation_index(1, i + 1, k + 1, 2))
    N = Matrix([[0, 1], [0, 0]])
    fn = ampliate(x1, [N])
    assert fn == fx + MatrixPoly.constant(N)


def test_ampliation_of_pencil_matches_shuffled_kronecker():
    r = rng(28)
    A0, A1 = rand_matrix(r, 3), rand_matrix(r, 3)
    L = LinearPencil.make(A0, A1).to_matrix_poly()
    LX = ampliate(L, [Matrix.zeros(2)])
    idx = ampliation_index(1, 1, 2, 2)
    coef = LX.coefficients()[(letter(idx),)]
    S = canonical_shuffle(3, 2)
    assert S @ coef @ S.T == Matrix.unit(0, 1, 2).kron(A1)


@pytest.mark.parametrize("m", [1, 2])
def test_ampliation_bijection(m):
    r = rng(29 + m)
    for _ in range(6):
        g, n = 2, r.randint(1, 2)
        f = rand_matrix_poly(r, r.randint(1, 2), g=g, deg=2)
        X = [rand_matrix(r, n, n, 3) for _ in range(g)]
        fX = ampliate(f, X)
        tilde = {ampliation_index(j, i, k, n): rand_matrix(r, m, m, 3)
                 for j in range(1, g + 1) for i in range(1, n + 1) for k in range(1, n + 1)}
        Ys = assemble_block_tuple(tilde, g, n, m)
        K = g * n * n
        lhs = evaluate(fX, MatrixTuple(tuple(tilde[q] for q in range(1, K + 1))))
        shifted = MatrixTuple(tuple(Xj.kron(Matrix.identity(m)) + Yj for Xj, Yj in zip(X, Ys)))
        assert lhs == evaluate(f, shifted)


def test_ampliation_preserves_products():
    r = rng(31)
    for _ in range(6):
        f, g = rand_matrix_poly(r, 2), rand_matrix_poly(r, 2)
        X = [rand_matrix(r, 2, 2, 3) for _ in range(2)]
        assert ampliate(f @ g, X) == ampliate(f, X) @ ampliate(g, X)


def test_quadratic_parts_examples():
    q = quadratic_parts(Poly.const(1) - x1s * x1)
    assert q.alpha == 1 and q.v == (0,) and q.H == Matrix([[-1]])
    q = quadratic_parts(x1s * x2 + x2s * x1)
    assert q.alpha == 0 and q.v == (0, 0) and q.H == Matrix([[0, 1], [1, 0]])
    with pytest.raises(NotHereditaryQuadratic):
        quadratic_parts(x1 * x1s)


def test_quadratic_parts_reconstructs():
    f = parse("2 + (1+i) x1' + (1-i) x1 + 3 x1' x1 - i x1' x2 + i x2' x1")
    q = quadratic_parts(f)
    assert q.to_poly() == f


def test_alphabet_descriptor():
    assert x1.alphabet().kind == ANALYTIC
    assert (x1 + x1s).alphabet().kind == INVOLUTIVE
    assert (x1 + Poly.monomial((Y,))).alphabet().kind == SLACK
    assert (x1 + x2s).alphabet().admits(x1.alphabet())


def test_forget_and_remember_involution():
    f = parse("x1 x2' + x2 x1'")
    a = forget_involution(f, 2)
    assert a.is_analytic()
    assert remember_involution(a, 2) == as_matrix_poly(f)


def test_word_order_is_graded():
    ws = [(), (letter(2),), (letter(1, True),), (letter(1),), (letter(1), letter(1))]
    assert sorted(ws, key=word_key) == [(), (letter(1),), (letter(1, True),), (letter(2),), (letter(1), letter(1))]
