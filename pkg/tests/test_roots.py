"""Certified root isolation and refinement, plus family asymptotics."""

import json
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicunits import (
    DEFAULT_POLICY,
    DomainError,
    IsolatedRoot,
    MonicCubic,
    OneUnitParams,
    PrecisionPolicy,
    TwoUnitParams,
    asymptotic_roots,
    asymptotic_threshold,
    build_one_unit,
    build_two_unit,
    eval_scaled,
    isolate_real_roots,
    newton_hypotheses,
    refine_root,
    refined_roots,
    root_to_json,
    simplest_cubic,
)

from .oracles import roots_oracle

SEED = MonicCubic(0, -3, -1)


def test_seed_roots_are_cosines():
    # roots of x^3 - 3x - 1 are 2cos(pi/9), 2cos(5pi/9), 2cos(7pi/9)
    rts = refined_roots(SEED)
    with mp.workprec(300):
        expect = sorted(2 * mp.cos(k * mp.pi / 9) for k in (1, 5, 7))
        for r, e in zip(rts, expect):
            assert abs(r.value - e) <= r.err + mp.ldexp(1, -280)


def test_refined_roots_certified_brackets():
    for f in (SEED, simplest_cubic(5), MonicCubic(0, -1, 0)):
        rts = refined_roots(f)
        assert len(rts) == 3
        assert rts == sorted(rts, key=lambda r: r.lo)
        for r in rts:
            assert r.lo <= r.hi
            assert r.err <= mp.ldexp(1, -DEFAULT_POLICY.target_bits) * 1.001
            if r.lo == r.hi:
                # exact rational root
                assert eval_scaled(f, r.lo.numerator, r.lo.denominator) == 0
            else:
                slo = eval_scaled(f, r.lo.numerator, r.lo.denominator)
                shi = eval_scaled(f, r.hi.numerator, r.hi.denominator)
                assert (slo > 0) != (shi > 0)


def test_rational_roots_enclosed_tightly():
    # x^3 - x has roots -1, 0, 1; enclosures must contain them at full width
    rts = refined_roots(MonicCubic(0, -1, 0))
    for r, k in zip(rts, (-1, 0, 1)):
        assert r.lo <= k <= r.hi
        assert r.hi - r.lo <= Fraction(2, 1 << DEFAULT_POLICY.target_bits)
        assert abs(r.value - k) <= r.err


def test_refine_exact_endpoint_root():
    # a bracket whose endpoint is the root short-circuits to a width-0 result
    f = MonicCubic(0, -1, 0)
    seed = IsolatedRoot(Fraction(0), Fraction(1, 2), mp.mpf("0.25"), mp.mpf("0.25"), 64)
    r = refine_root(f, seed)
    assert r.lo == r.hi == Fraction(0)
    assert r.err == 0 and r.value == 0


def test_isolation_rejects_complex_roots():
    with pytest.raises(DomainError):
        isolate_real_roots(MonicCubic(0, 0, -2))


def test_refine_respects_policy():
    pol = PrecisionPolicy(target_bits=400, max_bits=4096)
    r = refined_roots(SEED, pol)[2]
    assert r.err <= mp.ldexp(1, -400)
    with mp.workprec(500):
        assert abs(r.value - 2 * mp.cos(mp.pi / 9)) < mp.ldexp(1, -398)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=10 ** 6))
def test_simplest_cubic_roots_match_oracle(t):
    f = simplest_cubic(t)
    rts = refined_roots(f)
    with mp.workprec(320):
        oracle = sorted(r.real for r in roots_oracle(f.p2, f.p1, f.p0))
        for r, e in zip(rts, oracle):
            assert abs(r.value - e) < max(mp.ldexp(abs(e), -180), mp.ldexp(1, -180))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=40),
       st.integers(min_value=10 ** 3, max_value=10 ** 7))
def test_one_unit_member_roots_bracketed(b, t):
    f = build_one_unit(OneUnitParams(1, b), t)
    for r in isolate_real_roots(f):
        assert r.lo < r.hi
        slo = eval_scaled(f, r.lo.numerator, r.lo.denominator)
        shi = eval_scaled(f, r.hi.numerator, r.hi.denominator)
        assert (slo > 0) != (shi > 0)


# ---------------------------------------------------------------------------
# Newton hypothesis checks and asymptotic predictions
# ---------------------------------------------------------------------------


def test_newton_hypotheses_simplest_cubic():
    t = 1000
    f = simplest_cubic(t)
    good = newton_hypotheses(f, Fraction(t + 1))
    assert good.all_ok
    assert good.ratio < Fraction(3, t)
    bad = newton_hypotheses(f, Fraction(t))
    assert not bad.all_ok  # anchor t is a unit distance off, ratio ~ 1


def test_newton_hypotheses_zero_derivative():
    h = newton_hypotheses(MonicCubic(0, -3, 0), Fraction(1))
    assert not h.deriv_nonzero and not h.all_ok


def test_asymptotic_threshold():
    assert asymptotic_threshold(OneUnitParams(1, 1)) == 16 * 27
    assert asymptotic_threshold(TwoUnitParams(3, 1, 2, 1)) == 16 * 343


def test_asymptotic_roots_one_unit():
    p = OneUnitParams(1, 1)
    t = 10 ** 6
    res = asymptotic_roots(p, t)
    assert res.reliable
    preds = [pr.value for pr in res.predictions]
    assert preds == sorted(preds)
    actual = refined_roots(build_one_unit(p, t))
    for pv, r in zip(preds, actual):
        with mp.workprec(220):
            assert abs(mp.mpf(pv.numerator) / pv.denominator - r.value) < 1e-8
    # magnitude tags travel with the sorted predictions
    small = min(res.predictions, key=lambda pr: abs(pr.value))
    assert "near 0" in small.tag


def test_asymptotic_roots_below_threshold():
    res = asymptotic_roots(OneUnitParams(1, 1), 100)
    assert not res.reliable
    assert res.threshold == 432


def test_asymptotic_roots_two_unit():
    p = TwoUnitParams(3, 1, 2, 1)
    t = 10 ** 8
    res = asymptotic_roots(p, t)
    assert res.reliable
    anchored = [pr for pr in res.predictions if pr.anchor is not None]
    assert sorted(pr.anchor for pr in anchored) == [Fraction(1, 3), Fraction(1, 2)]
    actual = refined_roots(build_two_unit(p, t))
    for pv, r in zip([pr.value for pr in res.predictions], actual):
        with mp.workprec(260):
            assert abs(mp.mpf(pv.numerator) / pv.denominator - r.value) < mp.mpf("1e-6") * max(1, abs(r.value))


def test_asymptotic_roots_rejects_unknown_params():
    with pytest.raises(DomainError):
        asymptotic_roots("simplest", 10)


def test_root_to_json():
    r = refined_roots(SEED)[2]
    d = json.loads(root_to_json(r))
    assert d["value"].startswith("1.8793852415718")
    assert d["err"].startswith("2^-")
    exact = IsolatedRoot(Fraction(1, 2), Fraction(1, 2), mp.mpf("0.5"), mp.mpf(0), 64)
    d = json.loads(root_to_json(exact))
    assert d["err"] == "0"
    assert d["value"].startswith("0.5")
