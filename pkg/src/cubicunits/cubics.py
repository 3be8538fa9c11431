"""Exact integer arithmetic on monic cubics.

Everything in this module is exact: big integers and Fractions only, no
floating point. The numeric side (isolated root refinement, logs, shapes)
lives elsewhere and consumes these polynomials.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InternalInconsistencyError, InvalidParamsError

__all__ = [
    "MonicCubic",
    "RationalPoint",
    "eval_scaled",
    "norm_linear_form",
    "discriminant",
    "is_totally_real",
    "is_irreducible",
    "scale_root",
    "poly_to_json",
    "poly_from_json",
    "isolating_intervals",
]


@dataclass(frozen=True)
class MonicCubic:
    """x^3 + p2*x^2 + p1*x + p0 with exact integer coefficients."""

    p2: int
    p1: int
    p0: int

    def __post_init__(self):
        for name in ("p2", "p1", "p0"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise InvalidParamsError(f"coefficient {name} must be an int, got {type(v).__name__}")

    def __call__(self, x):
        # Horner; works for int, Fraction, mpf, anything with ring ops.
        return ((x + self.p2) * x + self.p1) * x + self.p0

    def deriv(self, x):
        """f'(x) = 3x^2 + 2*p2*x + p1."""
        return (3 * x + 2 * self.p2) * x + self.p1

    def deriv2(self, x):
        """f''(x) = 6x + 2*p2."""
        return 6 * x + 2 * self.p2

    def __str__(self):
        def term(c, mon):
            if c == 0:
                return ""
            s = "+" if c > 0 else "-"
            a = abs(c)
            body = mon if (a == 1 and mon) else (f"{a}{mon}" if mon else f"{a}")
            return f" {s} {body}"

        return ("x^3" + term(self.p2, "x^2") + term(self.p1, "x") + term(self.p0, "")).strip()


@dataclass(frozen=True)
class RationalPoint:
    """Reduced rational b/a with positive denominator."""

    num: int
    den: int

    def __post_init__(self):
        if self.den == 0:
            raise InvalidParamsError("zero denominator")
        g = gcd(self.num, self.den)
        s = -1 if self.den < 0 else 1
        object.__setattr__(self, "num", s * self.num // g)
        object.__setattr__(self, "den", s * self.den // g)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)


def eval_scaled(f: MonicCubic, b: int, a: int) -> int:
    """a^3 * f(b/a), exactly, as an integer.

    This is the quantity whose value +-1 decides whether a*theta - b is a
    unit of Z[theta] (up to sign, see norm_linear_form).
    """
    if a == 0:
        raise InvalidParamsError("eval_scaled requires a != 0")
    return b * b * b + f.p2 * b * b * a + f.p1 * b * a * a + f.p0 * a * a * a


def norm_linear_form(f: MonicCubic, a: int, b: int) -> int:
    """N(a*theta - b) = -a^3 f(b/a) for theta a root of the irreducible f.

    Caller is responsible for irreducibility; the formula itself is just
    the resultant identity and always returns the exact integer.
    """
    return -eval_scaled(f, b, a)


def discriminant(f: MonicCubic) -> int:
    """prod_{i<j} (theta_i - theta_j)^2 via the closed coefficient formula.

    Cross-validated in the test suite against a Sylvester-resultant oracle
    and against root products.
    """
    p2, p1, p0 = f.p2, f.p1, f.p0
    return (
        18 * p2 * p1 * p0
        - 4 * p2 ** 3 * p0
        + p2 ** 2 * p1 ** 2
        - 4 * p1 ** 3
        - 27 * p0 ** 2
    )


def is_totally_real(f: MonicCubic) -> bool:
    """True iff f has three distinct real roots (positive discriminant)."""
    return discriminant(f) > 0


def scale_root(f: MonicCubic, n: int) -> MonicCubic:
    """The monic cubic whose roots are n * (roots of f): n^3 f(x/n)."""
    if n == 0:
        raise InvalidParamsError("scale_root requires n != 0")
    return MonicCubic(n * f.p2, n * n * f.p1, n * n * n * f.p0)


# ---------------------------------------------------------------------------
# Exact real-root isolation (Sturm chain over Fractions).
#
# Used here for the integer-root irreducibility test; the numeric module
# reuses it to seed refinement. Cubics only, so the chain has at most 4
# entries and degenerate cases are easy to enumerate.
# ---------------------------------------------------------------------------


def _poly_eval(coeffs, x: Fraction):
    # coeffs high-to-low degree
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_rem(num, den):
    """Remainder of polynomial division, coefficients as Fractions (high-to-low)."""
    num = list(num)
    dn = len(den) - 1
    while len(num) - 1 >= dn and any(num):
        if num[0] == 0:
            num.pop(0)
            continue
        q = num[0] / den[0]
        for i in range(len(den)):
            num[i] -= q * den[i]
        num.pop(0)
    while num and num[0] == 0:
        num.pop(0)
    return num


def _sturm_chain(f: MonicCubic):
    chain = [
        [Fraction(1), Fraction(f.p2), Fraction(f.p1), Fraction(f.p0)],
        [Fraction(3), Fraction(2 * f.p2), Fraction(f.p1)],
    ]
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    if chain[-1] and len(chain[-1]) == 1 and chain[-1][0] == 0:
        chain.pop()
    return chain


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, r in zip(signs, signs[1:]) if s != r)


def _root_bound(f: MonicCubic) -> int:
    # Cauchy: every real root has |x| < 1 + max|coeff|.
    return 1 + max(abs(f.p2), abs(f.p1), abs(f.p0))


def isolating_intervals(f: MonicCubic) -> list[tuple[Fraction, Fraction]]:
    """Half-open intervals (lo, hi], each containing exactly one distinct
    real root of f. Exact; handles any cubic (1 or 3 real roots, even with
    repeated roots, which are counted once)."""
    chain = _sturm_chain(f)
    B = _root_bound(f)
    lo, hi = Fraction(-B), Fraction(B)
    total = _sign_variations(chain, lo) - _sign_variations(chain, hi)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, total)]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = _split_point(f, a, b)
        va, vm, vb = (_sign_variations(chain, x) for x in (a, mid, b))
        stack.append((a, mid, va - vm))
        stack.append((mid, b, vm - vb))
    out.sort(key=lambda iv: iv[0])
    return out


def _split_point(f: MonicCubic, a: Fraction, b: Fraction) -> Fraction:
    # Sturm counts need f != 0 at the evaluation point; a cubic has at most
    # three roots, so one of these split ratios always works.
    for k in (Fraction(1, 2), Fraction(9, 16), Fraction(17, 32), Fraction(31, 64)):
        mid = a + (b - a) * k
        if f(mid) != 0:
            return mid
    raise InternalInconsistencyError("cubic with four roots?")


def _narrow_to_unit(f: MonicCubic, lo: Fraction, hi: Fraction):
    """Shrink a bracketing interval until its width is < 1 (bisection on the
    Sturm count, so it works even when f does not change sign, e.g. at a
    double root)."""
    chain = _sturm_chain(f)
    while hi - lo >= 1:
        mid = _split_point(f, lo, hi)
        if _sign_variations(chain, lo) - _sign_variations(chain, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def is_irreducible(f: MonicCubic) -> bool:
    """Irreducible over Q iff the monic cubic has no integer root.

    Candidates are located next to the isolated real roots (at most three),
    then confirmed by exact evaluation; no divisor enumeration of p0.
    """
    if f.p0 == 0:
        return False
    for lo, hi in isolating_intervals(f):
        lo, hi = _narrow_to_unit(f, lo, hi)
        kset = set()
        for edge in (lo, hi):
            fl = edge.numerator // edge.denominator  # floor
            kset.update((fl, fl + 1))
        for k in kset:
            if lo < k <= hi or lo == k:  # inside or on the half-open boundary
                if f(k) == 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# Serialization: {"p2": "...", "p1": "...", "p0": "..."} decimal strings.
# ---------------------------------------------------------------------------


def poly_to_json(f: MonicCubic) -> str:
    return json.dumps({"p2": str(f.p2), "p1": str(f.p1), "p0": str(f.p0)})


def poly_from_json(s: str | dict) -> MonicCubic:
    d = json.loads(s) if isinstance(s, str) else s
    try:
        return MonicCubic(int(d["p2"]), int(d["p1"]), int(d["p0"]))
    except (KeyError, ValueError) as e:
        raise InvalidParamsError(f"bad polynomial JSON: {e}") from e
