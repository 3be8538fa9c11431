"""Validated isolation and refinement of the three real roots.

Isolation is exact (Sturm over Fractions, shared with the irreducibility
test). Refinement runs Newton in mpmath but certifies the final enclosure
by exact integer sign evaluation at dyadic endpoints, so the returned
interval is unconditionally correct; Newton only decides how fast we get
there. Asymptotic predictions for the constructed families are exact
rational Newton steps from the designed anchor points, with the theorem's
hypotheses checked as finite inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import families
from .cubics import MonicCubic, discriminant, eval_scaled, is_totally_real, isolating_intervals
from .errors import DomainError, InternalInconsistencyError, PrecisionExhaustedError
from .precision import DEFAULT_POLICY, PrecisionPolicy, fraction_to_mpf, mpf_to_fraction

__all__ = [
    "IsolatedRoot",
    "PrecisionPolicy",
    "isolate_real_roots",
    "refine_root",
    "refined_roots",
    "newton_hypotheses",
    "NewtonHypotheses",
    "RootPrediction",
    "AsymptoticRoots",
    "asymptotic_roots",
    "asymptotic_threshold",
    "root_to_json",
]


@dataclass(frozen=True)
class IsolatedRoot:
    """One real root: exact bracketing interval [lo, hi] plus a floating
    midpoint. err is an absolute radius bound: |true root - value| <= err."""

    lo: Fraction
    hi: Fraction
    value: mp.mpf
    err: mp.mpf
    prec: int  # bits the value was computed at


def _sign_at(f: MonicCubic, q: Fraction) -> int:
    # Fraction keeps den > 0, so the sign of a^3 f(b/a) is the sign of f(q).
    v = eval_scaled(f, q.numerator, q.denominator)
    return (v > 0) - (v < 0)


def isolate_real_roots(f: MonicCubic, prec: int = 64) -> list[IsolatedRoot]:
    """Three disjoint certified brackets, ascending. Input must have three
    distinct real roots."""
    if not is_totally_real(f):
        raise DomainError(f"not totally real (disc={discriminant(f)}): {f}")
    out = []
    for lo, hi in isolating_intervals(f):
        if _sign_at(f, lo) * _sign_at(f, hi) >= 0:
            raise InternalInconsistencyError(f"isolation returned a non-bracketing interval for {f}")
        with mp.workprec(prec):
            mid = fraction_to_mpf((lo + hi) / 2, prec)
            rad = fraction_to_mpf((hi - lo) / 2, prec) * (1 + mp.mpf(2) ** (8 - prec))
        out.append(IsolatedRoot(lo, hi, mid, rad, prec))
    if len(out) != 3:
        raise InternalInconsistencyError(f"expected 3 real roots, isolated {len(out)} for {f}")
    return out


def refine_root(f: MonicCubic, r: IsolatedRoot, pol: PrecisionPolicy = DEFAULT_POLICY) -> IsolatedRoot:
    """Shrink the enclosure to absolute radius <= 2^-target_bits.

    Newton from the interval midpoint at escalating precision; the result
    interval [x-eps, x+eps] is accepted only after an exact sign change
    check and containment in the original bracket.
    """
    lo, hi = r.lo, r.hi
    slo = _sign_at(f, lo)
    if slo == 0:  # exact rational root at the endpoint: width-0 enclosure
        v = fraction_to_mpf(lo, pol.target_bits)
        return IsolatedRoot(lo, lo, v, mp.mpf(0), pol.target_bits)
    target = pol.target_bits
    eps_fr = Fraction(1, 1 << target)
    # working precision must absorb the root magnitude (err bound is absolute)
    mag_bits = max(abs(lo).numerator.bit_length(), abs(hi).numerator.bit_length())
    for bits in pol.ladder(start_extra=mag_bits + 64):
        with mp.workprec(bits):
            x = fraction_to_mpf((lo + hi) / 2, bits)
            ok = False
            for _ in range(bits.bit_length() * 8 + 40):
                fx = f(x)
                dfx = f.deriv(x)
                if dfx == 0:
                    break
                dx = fx / dfx
                x = x - dx
                if abs(dx) < mp.ldexp(1, -(target + 4)):
                    ok = True
                    break
            if ok:
                xf = mpf_to_fraction(x)
                cand_lo, cand_hi = xf - eps_fr, xf + eps_fr
                if lo <= cand_lo and cand_hi <= hi:
                    sl, sh = _sign_at(f, cand_lo), _sign_at(f, cand_hi)
                    if sl == 0:
                        return IsolatedRoot(cand_lo, cand_lo, fraction_to_mpf(cand_lo, bits), mp.mpf(0), bits)
                    if sh == 0:
                        return IsolatedRoot(cand_hi, cand_hi, fraction_to_mpf(cand_hi, bits), mp.mpf(0), bits)
                    if sl != sh:
                        v = fraction_to_mpf(xf, bits)
                        return IsolatedRoot(cand_lo, cand_hi, v, mp.ldexp(1, -target), bits)
        # Newton failed to certify at this precision: tighten the exact
        # bracket by bisection (always sound) and escalate.
        for _ in range(64):
            mid = (lo + hi) / 2
            sm = _sign_at(f, mid)
            if sm == 0:
                v = fraction_to_mpf(mid, bits)
                return IsolatedRoot(mid, mid, v, mp.mpf(0), bits)
            if sm == slo:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 2 * eps_fr:
                mid = (lo + hi) / 2
                v = fraction_to_mpf(mid, bits)
                return IsolatedRoot(lo, hi, v, fraction_to_mpf((hi - lo) / 2, 64), bits)
    raise PrecisionExhaustedError(f"could not certify root of {f} to 2^-{target} within {pol.max_bits} bits")


def refined_roots(f: MonicCubic, pol: PrecisionPolicy = DEFAULT_POLICY) -> list[IsolatedRoot]:
    """Convenience: isolate + refine all three, ascending."""
    return [refine_root(f, r, pol) for r in isolate_real_roots(f)]


# ---------------------------------------------------------------------------
# Family asymptotics: anchored Newton predictions with checkable hypotheses.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonHypotheses:
    """Finite-t proxies for the root-approximation theorem's hypotheses at
    an anchor alpha: nonzero derivative, small Newton ratio |h/h'|, and the
    second-order product small uniformly on [alpha-1, alpha+1] (h'' of a
    cubic is linear, so its sup there is attained at an endpoint)."""

    deriv_nonzero: bool
    ratio: Fraction  # |h(alpha)/h'(alpha)|, 0 if derivative vanished
    ratio_small: bool  # ratio <= 1/4
    product: Fraction  # ratio * sup|h''|/|h'(alpha)|
    product_small: bool  # product <= 1/8

    @property
    def all_ok(self) -> bool:
        return self.deriv_nonzero and self.ratio_small and self.product_small


def newton_hypotheses(f: MonicCubic, alpha: Fraction) -> NewtonHypotheses:
    alpha = Fraction(alpha)
    d = f.deriv(alpha)
    if d == 0:
        return NewtonHypotheses(False, Fraction(0), False, Fraction(0), False)
    ratio = abs(Fraction(f(alpha)) / d)
    sup_dd = max(abs(f.deriv2(alpha - 1)), abs(f.deriv2(alpha + 1)))
    product = ratio * Fraction(sup_dd) / abs(d)
    return NewtonHypotheses(True, ratio, ratio <= Fraction(1, 4),
                            product, product <= Fraction(1, 8))


@dataclass(frozen=True)
class RootPrediction:
    value: Fraction  # exact anchored Newton step alpha - h(alpha)/h'(alpha)
    tag: str  # order-of-magnitude description of the true root
    anchor: Fraction | None  # None for the trace-completed third root


@dataclass(frozen=True)
class AsymptoticRoots:
    predictions: tuple[RootPrediction, RootPrediction, RootPrediction]
    reliable: bool  # |t| above threshold AND all hypothesis checks passed
    threshold: int
    hypotheses: tuple[NewtonHypotheses, ...]


def asymptotic_threshold(params) -> int:
    """|t| >= 16*(|a|+|b|+|c|+|d|)^3 before predictions are marked reliable.
    Engineering heuristic (the theorem's constants are not effective); the
    one-unit family counts as (a, b, 1, 0)."""
    if isinstance(params, families.OneUnitParams):
        s = abs(params.a) + abs(params.b) + 1
    else:
        s = abs(params.a) + abs(params.b) + abs(params.c) + abs(params.d)
    return 16 * s ** 3


def asymptotic_roots(params, t: int) -> AsymptoticRoots:
    """Predicted roots for a family member, with magnitude tags.

    One-unit params: anchors 0 and b/a; third root ~ -(a*t).
    Two-unit params: anchors b/a and d/c; third root ~ -(a*c*t).
    The anchored predictions are exact rationals; the third is completed
    from the trace. Below threshold (or with failing hypothesis checks)
    the same numbers come back flagged unreliable rather than raising.
    """
    if isinstance(params, families.OneUnitParams):
        f = families.build_one_unit(params, t)
        anchors = [Fraction(0), Fraction(params.b, params.a)]
        tags = [
            f"Theta(1/|t*b|) near 0 (b={params.b})",
            f"{params.b}/{params.a} + Theta(1/(a^2 b^2 t))",
            f"-(a*t) + O(1) = -({params.a}*{t}) + O(1)",
        ]
    elif isinstance(params, families.TwoUnitParams):
        f = families.build_two_unit(params, t)
        anchors = [Fraction(params.b, params.a), Fraction(params.d, params.c)]
        tags = [
            f"{params.b}/{params.a} + Theta(1/(a^3(bc-ad)t))",
            f"{params.d}/{params.c} + Theta(1/(c^3(bc-ad)t))",
            f"-(a*c*t) + O(1) = -({params.a}*{params.c}*{t}) + O(1)",
        ]
    else:
        raise DomainError(f"no asymptotic model for {type(params).__name__}")

    hyps = tuple(newton_hypotheses(f, al) for al in anchors)
    preds = []
    for al, tag, hy in zip(anchors, tags, hyps):
        step = Fraction(f(al)) / f.deriv(al) if hy.deriv_nonzero else Fraction(0)
        preds.append(RootPrediction(al - step, tag, al))
    third = -f.p2 - preds[0].value - preds[1].value
    preds.append(RootPrediction(third, tags[2], None))
    preds.sort(key=lambda p: p.value)  # ascending, matching isolate_real_roots
    reliable = abs(t) >= asymptotic_threshold(params) and all(h.all_ok for h in hyps)
    return AsymptoticRoots(tuple(preds), reliable, asymptotic_threshold(params), hyps)


def root_to_json(r: IsolatedRoot) -> str:
    import json

    digits = max(20, int(r.prec * 0.302) + 4)
    with mp.workprec(r.prec + 16):
        val = mp.nstr(r.value, digits, strip_zeros=False)
    if r.err == 0:
        err = "0"
    else:
        err = f"2^{int(mp.floor(mp.log(r.err, 2)))}"
    return json.dumps({"value": val, "err": err})
