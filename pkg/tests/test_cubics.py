import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicunits import (
    InvalidParamsError,
    MonicCubic,
    RationalPoint,
    discriminant,
    eval_scaled,
    is_irreducible,
    is_totally_real,
    isolating_intervals,
    norm_linear_form,
    poly_from_json,
    poly_to_json,
    scale_root,
)

from .oracles import disc_from_roots, disc_oracle, roots_oracle

coeffs = st.integers(min_value=-200, max_value=200)
cubics = st.builds(MonicCubic, coeffs, coeffs, coeffs)


def test_eval_examples():
    f = MonicCubic(0, -3, -1)
    assert f(Fraction(2)) == 1
    assert f(0) == -1
    # a^3 f(b/a) expanded: b^3 + p2 b^2 a + p1 b a^2 + p0 a^3
    assert eval_scaled(f, 1, 2) == 1 + 0 - 12 - 8
    assert eval_scaled(f, 0, 1) == -1
    assert norm_linear_form(f, 1, 0) == 1  # N(theta) = -p0 for monic cubics


def test_eval_scaled_rejects_zero_denominator():
    with pytest.raises(InvalidParamsError):
        eval_scaled(MonicCubic(0, 0, -2), 1, 0)


def test_discriminant_frozen_values():
    assert discriminant(MonicCubic(0, -3, -1)) == 81
    # t=1 member of the classical one-parameter cyclic family
    assert discriminant(MonicCubic(-1, -4, -1)) == 169
    assert discriminant(MonicCubic(0, 0, -2)) == -108
    assert discriminant(MonicCubic(0, -1, 0)) == 4


@settings(max_examples=300, deadline=None)
@given(cubics)
def test_discriminant_matches_resultant_oracle(f):
    assert discriminant(f) == disc_oracle(f.p2, f.p1, f.p0)


@settings(max_examples=100, deadline=None)
@given(cubics)
def test_discriminant_matches_root_product(f):
    d = discriminant(f)
    if d == 0:
        return  # repeated roots sink the generic numeric solver
    approx = disc_from_roots(f.p2, f.p1, f.p0)
    assert abs(approx - d) <= mp.ldexp(max(1, abs(d)), -64)


@settings(max_examples=100, deadline=None)
@given(cubics, st.integers(min_value=1, max_value=40),
       st.integers(min_value=-40, max_value=40))
def test_eval_scaled_is_scaled_evaluation(f, a, b):
    exact = eval_scaled(f, b, a)
    assert exact == a ** 3 * f(Fraction(b, a))
    approx = a ** 3 * float(f(Fraction(b, a)))
    assert math.isclose(float(exact), approx, rel_tol=1e-9, abs_tol=1e-6)


@settings(max_examples=100, deadline=None)
@given(cubics, st.integers(min_value=-6, max_value=6).filter(lambda n: n != 0))
def test_disc_scaling_degree_six(f, n):
    assert discriminant(scale_root(f, n)) == n ** 6 * discriminant(f)


def test_scale_root_moves_roots():
    f = MonicCubic(0, -3, -1)
    g = scale_root(f, 2)  # roots double
    assert g == MonicCubic(0, -12, -8)
    with mp.workprec(256):
        for r in roots_oracle(0, -3, -1):
            v = (2 * r) ** 3 + g.p2 * (2 * r) ** 2 + g.p1 * (2 * r) + g.p0
            assert abs(v) < 1e-60


def test_totally_real_classification():
    assert is_totally_real(MonicCubic(0, -3, -1))
    assert not is_totally_real(MonicCubic(0, 0, -2))  # one real root
    # x^3 - x is totally real (roots -1, 0, 1) even though reducible
    assert is_totally_real(MonicCubic(0, -1, 0))


def test_irreducibility():
    assert is_irreducible(MonicCubic(0, -3, -1))
    assert is_irreducible(MonicCubic(0, 0, -2))
    assert not is_irreducible(MonicCubic(0, -1, 0))  # x(x-1)(x+1)
    assert not is_irreducible(MonicCubic(-2, 0, 1))  # root x=1
    assert not is_irreducible(MonicCubic(5, 0, 0))  # root x=0


def test_isolating_intervals_bracket_single_roots():
    f = MonicCubic(0, -3, -1)
    ivs = isolating_intervals(f)
    assert len(ivs) == 3
    rs = sorted(r.real for r in roots_oracle(0, -3, -1))
    for (lo, hi), r in zip(ivs, rs):
        assert float(lo) < r <= float(hi)
    # pairwise disjoint and ordered
    for k in range(2):
        assert ivs[k][1] <= ivs[k + 1][0]


@settings(max_examples=150, deadline=None)
@given(cubics)
def test_isolating_intervals_on_random_totally_real(f):
    if discriminant(f) <= 0:
        return
    ivs = isolating_intervals(f)
    assert len(ivs) == 3
    rs = sorted(r.real for r in roots_oracle(f.p2, f.p1, f.p0))
    for (lo, hi), r in zip(ivs, rs):
        assert float(lo) - 1e-50 < r <= float(hi) + 1e-50


def test_rational_point_normalizes():
    p = RationalPoint(2, -4)
    assert (p.num, p.den) == (-1, 2)
    with pytest.raises(InvalidParamsError):
        RationalPoint(1, 0)


def test_poly_json_roundtrip():
    f = MonicCubic(-(10 ** 30), 7, -1)
    assert poly_from_json(poly_to_json(f)) == f


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=-10 ** 12, max_value=10 ** 12),
       st.integers(min_value=-10 ** 12, max_value=10 ** 12),
       st.integers(min_value=-10 ** 12, max_value=10 ** 12))
def test_poly_json_roundtrip_property(p2, p1, p0):
    f = MonicCubic(p2, p1, p0)
    assert poly_from_json(poly_to_json(f)) == f
