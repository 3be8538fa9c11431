"""Independent reference implementations used only by the tests.

Nothing here imports the package's own formulas: the discriminant oracle
goes through an exact Sylvester resultant (fraction-free Bareiss
elimination), the numeric oracles go through mpmath's generic polynomial
root finder. Expected values frozen in the test files were produced by
these routines.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp


def bareiss_det(rows: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    assert all(len(r) == n for r in m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant_cubic_deriv(p2: int, p1: int, p0: int) -> int:
    """Res(f, f') for monic f = x^3 + p2 x^2 + p1 x + p0 via the 5x5
    Sylvester matrix (rows: two shifts of f, three shifts of f')."""
    f = [1, p2, p1, p0]
    g = [3, 2 * p2, p1]
    rows = [
        f + [0],
        [0] + f,
        g + [0, 0],
        [0] + g + [0],
        [0, 0] + g,
    ]
    return bareiss_det(rows)


def disc_oracle(p2: int, p1: int, p0: int) -> int:
    """disc(f) = -Res(f, f') for monic cubics."""
    return -resultant_cubic_deriv(p2, p1, p0)


def roots_oracle(p2: int, p1: int, p0: int, prec: int = 256):
    """All three complex roots via mpmath's generic solver."""
    with mp.workprec(prec):
        return mp.polyroots([1, p2, p1, p0], maxsteps=200, extraprec=prec)


def disc_from_roots(p2: int, p1: int, p0: int, prec: int = 256) -> mp.mpf:
    """prod_{i<j} (r_i - r_j)^2, numerically."""
    with mp.workprec(prec):
        r = roots_oracle(p2, p1, p0, prec)
        v = (r[0] - r[1]) ** 2 * (r[0] - r[2]) ** 2 * (r[1] - r[2]) ** 2
        return v.real


def norm_from_roots(p2: int, p1: int, p0: int, a: int, b: int,
                    prec: int = 256) -> mp.mpf:
    """prod_i (a r_i - b), numerically (real for real-coefficient cubics)."""
    with mp.workprec(prec):
        r = roots_oracle(p2, p1, p0, prec)
        v = (a * r[0] - b) * (a * r[1] - b) * (a * r[2] - b)
        return v.real


def bisect_root(p2: int, p1: int, p0: int, lo: Fraction, hi: Fraction,
                steps: int = 200) -> Fraction:
    """Plain exact bisection of f on [lo, hi]; requires a sign change."""
    def sgn(q: Fraction) -> int:
        v = q ** 3 + p2 * q ** 2 + p1 * q + p0
        return (v > 0) - (v < 0)

    slo, shi = sgn(lo), sgn(hi)
    assert slo != 0 and shi != 0 and slo != shi, "bracket must straddle a root"
    for _ in range(steps):
        mid = (lo + hi) / 2
        sm = sgn(mid)
        if sm == 0:
            return mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def iroot(n: int, k: int) -> int:
    """floor(n**(1/k)) for n >= 0, exact integer arithmetic."""
    assert n >= 0 and k >= 1
    if n < 2:
        return n
    hi = 1 << ((n.bit_length() + k - 1) // k + 1)
    lo = 0
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid ** k <= n:
            lo = mid
        else:
            hi = mid
    return lo


def floor_power(t: int, num: int, den: int) -> int:
    """floor(t**(num/den)) for t >= 0 (used for the b_t = floor(t^alpha) scans)."""
    return iroot(t ** num, den)
