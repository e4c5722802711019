from fractions import Fraction

import numpy as np
import pytest

from freelocus.unipoly import (
    UniPoly,
    ZeroPolynomial,
    gcd,
    interpolate,
    isolate_real_root,
    rational_roots,
    squarefree_part,
    sturm_real_root_count,
)
from freelocus.scalars import I

from gen import rng

t = UniPoly.t()


def test_sturm_examples():
    assert sturm_real_root_count(t * t + UniPoly.const(1)) == 0
    assert sturm_real_root_count(t * t - UniPoly.const(2)) == 2
    # roots -1, 0, 1; endpoints of [0, 2] are counted
    assert sturm_real_root_count(t * t * t - t, (0, 2)) == 2
    assert sturm_real_root_count(t * t * t - t, (-1, 0)) == 2


def test_sturm_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        sturm_real_root_count(UniPoly())


def test_squarefree_examples():
    p = UniPoly.from_roots([1, 1, -2])
    assert squarefree_part(p) == UniPoly.from_roots([1, -2])
    assert squarefree_part(t) == t
    assert squarefree_part(UniPoly.const(5)) == UniPoly.const(1)


def test_squarefree_properties():
    r = rng(11)
    for _ in range(60):
        roots = [r.randint(-4, 4) for _ in range(r.randint(1, 6))]
        p = UniPoly.from_roots(roots) * UniPoly.const(r.choice([1, -3, Fraction(1, 2)]))
        sf = squarefree_part(p)
        assert sf.divides(p)
        assert gcd(sf, sf.derivative()).degree == 0
        assert sf.degree == len(set(roots))
        assert sturm_real_root_count(p) == len(set(roots))


def test_gcd_is_monic_common_divisor():
    a = UniPoly.from_roots([1, 2, 3])
    b = UniPoly.from_roots([2, 3, 5]) * UniPoly.const(7)
    g = gcd(a, b)
    assert g == UniPoly.from_roots([2, 3])
    assert g.lead() == 1


def test_gaussian_coefficients():
    p = UniPoly.from_roots([I, -I])
    assert p == t * t + UniPoly.const(1)
    q = UniPoly.from_roots([I, 2])
    assert not q.is_real()
    assert gcd(q, q.conj()) == UniPoly.from_roots([2])


def test_root_count_matches_numpy():
    r = rng(12)
    for _ in range(60):
        cs = [r.randint(-6, 6) for _ in range(r.randint(2, 7))]
        p = UniPoly(cs)
        if p.degree < 1:
            continue
        roots = np.roots(list(reversed(p.coeffs)))
        real = sorted(x.real for x in roots if abs(x.imag) < 1e-7)
        distinct = [x for k, x in enumerate(real) if k == 0 or abs(x - real[k - 1]) > 1e-6]
        assert sturm_real_root_count(p) == len(distinct)


def test_isolation_interval_contains_one_root():
    r = rng(13)
    for _ in range(40):
        p = UniPoly([r.randint(-6, 6) for _ in range(r.randint(2, 6))])
        if p.degree < 1:
            continue
        iv = isolate_real_root(p)
        if sturm_real_root_count(p) == 0:
            assert iv is None
            continue
        a, b = iv
        assert sturm_real_root_count(p, (a, b)) == 1


def test_rational_roots_and_interpolation():
    p = UniPoly.from_roots([Fraction(1, 2), -3]) * (t * t + UniPoly.const(1))
    assert sorted(rational_roots(p)) == [-3, Fraction(1, 2)]
    xs = list(range(5))
    assert interpolate(xs, [p(x) for x in xs]) == p
