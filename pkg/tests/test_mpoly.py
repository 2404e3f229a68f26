import numpy as np
import pytest
from hypothesis import given, strategies as st

from loidreau.gf import Field
from loidreau.mpoly import (DivisionError, MPoly, frobenius_poly, gcd_univariate, mp_eval,
                            mp_exact_div, newton_interpolate, resultant_bivariate,
                            resultant_univariate, roots_dense, roots_exhaustive,
                            roots_univariate, u_divmod, u_eval, u_from_roots, u_gcd, u_mul,
                            u_trim)

F = Field(12)
F24 = Field(24)


def rand_poly(rng, nv, deg, field=F):
    terms = {}
    for _ in range(6):
        e = tuple(int(x) for x in rng.integers(0, deg + 1, nv))
        terms[e] = int(field.random(rng))
    return MPoly(field, nv, terms)


def test_ring_identities():
    X, Y = MPoly.gens(F, 2)
    assert (X + Y) ** 2 == X ** 2 + Y ** 2           # characteristic 2
    assert (X + 1) * (X + 1) == X * X + 1
    assert X - X == MPoly(F, 2)
    assert (X * 3).terms == {(1, 0): 3}


@given(st.integers(0, 10_000))
def test_evaluation_is_a_ring_map(seed):
    rng = np.random.default_rng(seed)
    p, q = rand_poly(rng, 2, 4), rand_poly(rng, 2, 4)
    pt = tuple(int(v) for v in F.random(rng, 2))
    assert mp_eval(p * q, pt) == F.mul(mp_eval(p, pt), mp_eval(q, pt))
    assert mp_eval(p + q, pt) == mp_eval(p, pt) ^ mp_eval(q, pt)
    assert (p * q).eval_many(np.array([pt]))[0] == mp_eval(p * q, pt)


def test_partial_evaluation():
    X, Y = MPoly.gens(F, 2)
    p = X * Y + X ** 2 + 7
    part = mp_eval(p, (3, None))
    assert mp_eval(part, (0, 5)) == mp_eval(p, (3, 5))


@given(st.integers(0, 10_000))
def test_exact_division_round_trip(seed):
    rng = np.random.default_rng(seed)
    p, q = rand_poly(rng, 2, 3), rand_poly(rng, 2, 3)
    if q.is_zero():
        return
    assert mp_exact_div(p * q, q) == p


def test_inexact_division_raises():
    X, Y = MPoly.gens(F, 2)
    with pytest.raises(DivisionError):
        mp_exact_div(X * X + Y, X)


def test_frobenius_poly():
    rng = np.random.default_rng(1)
    p = rand_poly(rng, 2, 3)
    pt = tuple(int(v) for v in F.random(rng, 2))
    assert mp_eval(frobenius_poly(p, 1), pt) == F.frobenius(mp_eval(p, pt), 1)
    assert frobenius_poly(p, 1) == p * p
    with pytest.raises(ValueError):
        frobenius_poly(p, -1)


def test_grlex_leading_term():
    X, Y = MPoly.gens(F, 2)
    p = X ** 3 + X * Y ** 2 + Y ** 3
    assert p.leading_term()[0] == (3, 0)
    assert [e for e, _ in p.sorted_terms()] == [(3, 0), (1, 2), (0, 3)]


@given(st.integers(0, 10_000))
def test_univariate_division(seed):
    rng = np.random.default_rng(seed)
    a, b = F.random(rng, 9), F.random(rng, 4) | np.uint64(1)
    q, r = u_divmod(F, a, b)
    back = u_mul(F, q, b)
    full = np.zeros(max(back.size, r.size, 9), dtype=np.uint64)
    full[: back.size] ^= back
    full[: r.size] ^= r
    assert np.array_equal(u_trim(full), u_trim(a))
    assert r.size < 4


def test_gcd_of_products():
    g = u_from_roots(F, [3, 9])
    a = u_mul(F, g, u_from_roots(F, [1, 2]))
    b = u_mul(F, g, u_from_roots(F, [5]))
    assert np.array_equal(u_gcd(F, a, b), g)
    A = MPoly.from_dense(F, a)
    B = MPoly.from_dense(F, b)
    assert gcd_univariate(A, B) == MPoly.from_dense(F, g)


@given(st.lists(st.integers(0, (1 << 12) - 1), min_size=1, max_size=12))
def test_roots_match_exhaustive(rts):
    p = u_from_roots(F, rts)
    assert roots_dense(F, p, np.random.default_rng(0)) == sorted(set(rts))
    assert roots_exhaustive(F, p) == sorted(set(rts))


def test_roots_of_irreducible_quadratic():
    # X^2 + X + c has no root when Tr(c) = 1
    def trace(c):
        return int(np.bitwise_xor.reduce([F.frobenius(c, i) for i in range(F.m)]))
    c = next(c for c in range(1, F.order) if trace(c) == 1)
    p = np.array([c, 1, 1], dtype=np.uint64)
    assert roots_dense(F, p) == [] == roots_exhaustive(F, p)


def test_roots_big_field():
    rng = np.random.default_rng(2)
    rts = sorted(set(int(x) for x in F24.random(rng, 30)))
    p = u_from_roots(F24, rts + rts[:5])
    assert roots_univariate(MPoly.from_dense(F24, p), rng) == rts


def test_newton_interpolation():
    rng = np.random.default_rng(3)
    p = F.random(rng, 8)
    xs = np.arange(1, 9, dtype=np.uint64)
    assert np.array_equal(newton_interpolate(F, xs, u_eval(F, p, xs)), u_trim(p))


def test_univariate_resultant_vanishes_on_common_root():
    a = u_from_roots(F, [4, 7])
    b = u_from_roots(F, [7, 11, 12])
    assert resultant_univariate(F, a, b) == 0
    c = u_from_roots(F, [1, 2])
    assert resultant_univariate(F, a, c) != 0
    # Res(X - r, g) = g(r) up to sign
    assert resultant_univariate(F, np.array([4, 1], dtype=np.uint64), c) == int(u_eval(F, c, 4))


@given(st.integers(0, 10_000))
def test_resultant_methods_agree(seed):
    rng = np.random.default_rng(seed)
    p, q = rand_poly(rng, 2, 3), rand_poly(rng, 2, 3)
    if p.is_zero() or q.is_zero():
        return
    r1 = resultant_bivariate(p, q, 1, "interpolate")
    r2 = resultant_bivariate(p, q, 1, "sylvester")
    assert r1 == r2


def test_resultant_vanishes_at_common_zero():
    X, Y = MPoly.gens(F, 2)
    # both vanish at (X, Y) = (5, 9)
    p = (X + 5) * (Y + 1) + (Y + 9) * X
    q = (Y + 9) * (X * X + 1) + (X + 5) * Y * Y
    R = resultant_bivariate(p, q, 1)
    assert mp_eval(R, (5,)) == 0
    assert R.total_degree() <= p.total_degree() * q.total_degree()


def test_resultant_small_field_falls_back():
    F4 = Field(2)
    X, Y = MPoly.gens(F4, 2)
    p = X ** 3 * Y ** 2 + X * Y + 1
    q = Y ** 3 + X ** 2 * Y + X
    R = resultant_bivariate(p, q, 1)
    assert R == resultant_bivariate(p, q, 1, "sylvester")
