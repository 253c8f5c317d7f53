"""Maximal prime-power congruences between roots of coprime integer polynomials.

Two routes: the congruence-number method (fast, exact in the favourable
cases of the reduction criteria) and the Newton-polygon method on the
root-difference polynomial (always exact, slower).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import is_prime, valuation
from .intpoly import (
    IntPoly,
    factor_over_z,
    gcd_over_q,
    hnf_with_transform,
    resultant,
    sylvester_matrix,
)
from .padic import exponent_from_slope, newton_polygon


class NotCoprimeError(ValueError):
    """Inputs share a factor over the rationals; factor first."""


@dataclass(frozen=True)
class CongruenceNumberResult:
    """c = r*P + s*Q with c the smallest such positive constant."""

    c: int
    r: IntPoly
    s: IntPoly
    p: IntPoly
    q: IntPoly

    def __post_init__(self):
        if self.r * self.p + self.s * self.q != IntPoly([self.c]):
            raise ValueError("cofactor identity r*P + s*Q = c fails")
        if self.q.degree > 0 and self.r.degree >= self.q.degree:
            raise ValueError("deg(r) must be below deg(Q)")
        if self.p.degree > 0 and self.s.degree >= self.p.degree:
            raise ValueError("deg(s) must be below deg(P)")


@dataclass(frozen=True)
class CongruenceBounds:
    """Exponent bounds for a congruence of roots at a fixed prime."""

    ell: int
    lower: int
    upper: int
    exact: bool
    case_tag: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound above upper bound")
        if self.exact != (self.lower == self.upper):
            raise ValueError("exact flag inconsistent with bounds")


def congruence_number(p, q):
    """Congruence number c(P, Q) with cofactors, via the Hermite form of the
    Sylvester matrix: c is the bottom-right pivot, the cofactors come from
    the bottom row of the transformation matrix."""
    _check_coprime(p, q)
    if p.degree == 0 or q.degree == 0:
        # Constant input must be a unit for monic/primitive coprime pairs.
        const = p if p.degree == 0 else q
        c = abs(const.coeffs[0])
        if p.degree == 0:
            return CongruenceNumberResult(c, IntPoly([c // const.coeffs[0]]), IntPoly(), p, q)
        return CongruenceNumberResult(c, IntPoly(), IntPoly([c // const.coeffs[0]]), p, q)
    s_mat = sylvester_matrix(p, q)
    h, b = hnf_with_transform(s_mat)
    size = s_mat.nrows
    c = h[size - 1, size - 1]
    assert c > 0 and all(h[size - 1, j] == 0 for j in range(size - 1))
    bottom = b.rows[-1]
    n, m = q.degree, p.degree
    r = IntPoly(list(reversed(bottom[:n])))  # rows X^(n-1)P .. P
    s = IntPoly(list(reversed(bottom[n:])))  # rows X^(m-1)Q .. Q
    return CongruenceNumberResult(c, r, s, p, q)


def _check_coprime(p, q):
    if p.is_zero or q.is_zero:
        raise ValueError("zero polynomial input")
    if p.degree > 0 and q.degree > 0 and resultant(p, q) == 0:
        raise NotCoprimeError("not coprime: inputs share a factor; factor first")


def _reduce_mod(poly, ell):
    return [c % ell for c in poly.coeffs]


def _gcd_mod(a, b, ell):
    """Monic gcd of the reductions modulo ell (coefficient lists)."""
    from .intpoly import _pm_gcd, _pm_trim

    return _pm_gcd(_pm_trim(list(a)), _pm_trim(list(b)), ell)


def _squarefree_mod(poly, ell):
    red = _reduce_mod(poly, ell)
    dred = _reduce_mod(poly.derivative(), ell)
    return len(_gcd_mod(red, dred, ell)) == 1


def _coprime_mod(a, b, ell):
    return len(_gcd_mod(_reduce_mod(a, ell), _reduce_mod(b, ell), ell)) == 1


def common_root_mod_ell(p, q, ell):
    """True iff the reductions of P and Q mod ell share a nontrivial factor."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    by_number = congruence_number(p, q).c % ell == 0
    by_gcd = not _coprime_mod(p, q, ell)
    assert by_number == by_gcd, "congruence number disagrees with mod-ell gcd"
    return by_number


def _bounds_irreducible_pair(p, q, ell):
    """Case analysis for P, Q whose reductions' multiple factors are tolerated
    but which are squarefree over Q themselves."""
    res = congruence_number(p, q)
    n = valuation(ell, res.c)
    if n == 0:
        return CongruenceBounds(ell, 0, 0, True, "a")
    if n == 1:
        return CongruenceBounds(ell, 1, 1, True, "b")
    p_sqf = _squarefree_mod(p, ell)
    q_sqf = _squarefree_mod(q, ell)
    if p_sqf and q_sqf:
        return CongruenceBounds(ell, n, n, True, "c-i")
    if q_sqf and _coprime_mod(res.s, q, ell):
        return CongruenceBounds(ell, n, n, True, "c-ii")
    if p_sqf and _coprime_mod(res.r, p, ell):
        return CongruenceBounds(ell, n, n, True, "c-iii")
    if _coprime_mod(res.s, q, ell):
        m = -(-n // q.degree)
        return CongruenceBounds(ell, m, n, m == n, "d-i")
    if _coprime_mod(res.r, p, ell):
        m = -(-n // p.degree)
        return CongruenceBounds(ell, m, n, m == n, "d-ii")
    return CongruenceBounds(ell, 1, n, n == 1, "d-iii")


def bounds_via_congruence_number(p, q, ell):
    """Exponent bounds from the congruence-number case analysis.

    Inputs with repeated factors over Q are factored into irreducibles first;
    the result aggregates the maximal lower and upper bound over all pairs.
    """
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    _check_coprime(p, q)
    p_rep = gcd_over_q(p, p.derivative()).degree > 0 if p.degree > 0 else False
    q_rep = gcd_over_q(q, q.derivative()).degree > 0 if q.degree > 0 else False
    if not (p_rep or q_rep):
        return _bounds_irreducible_pair(p, q, ell)
    p_factors = [f for f, _ in factor_over_z(p)]
    q_factors = [f for f, _ in factor_over_z(q)]
    lower = upper = 0
    for pf in p_factors:
        for qf in q_factors:
            if abs(resultant(pf, qf)) == 1:
                continue  # unit resultant pairs contribute nothing
            b = _bounds_irreducible_pair(pf, qf, ell)
            lower = max(lower, b.lower)
            upper = max(upper, b.upper)
    return CongruenceBounds(ell, lower, upper, lower == upper, "factored")


def difference_root_poly(p, q):
    """F(Y) = Res_X(P(X), Q(X+Y)): its roots are the root differences.

    Computed by evaluation at consecutive integers and exact interpolation;
    a non-integer interpolated coefficient would signal a bug and is rejected.
    """
    if p.degree < 1 or q.degree < 1:
        raise ValueError("difference_root_poly needs degrees >= 1")
    deg = p.degree * q.degree
    xs = []
    k = 0
    while len(xs) < deg + 1:
        xs.append(k)
        if k > 0 and len(xs) < deg + 1:
            xs.append(-k)
        k += 1
    ys = [resultant(p, q.compose_add(y)) for y in xs]
    coeffs = _interpolate(xs, ys)
    f = IntPoly(coeffs)
    assert f.degree == deg
    return f


def _interpolate(xs, ys):
    """Exact Newton interpolation; returns integer coefficients."""
    n = len(xs)
    divided = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * n
    acc = [Fraction(1)]  # product (x - xs[0]) ... as coefficients
    for j in range(n):
        for i, a in enumerate(acc):
            coeffs[i] += divided[j] * a
        if j < n - 1:
            acc = [Fraction(0)] + acc
            for i in range(len(acc) - 1):
                acc[i] -= xs[j] * acc[i + 1]
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise AssertionError("interpolation produced a non-integer coefficient")
        out.append(c.numerator)
    return out


def exact_exponent_newton(p, q, ell):
    """Exact maximal exponent via the Newton polygon of F(Y)."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    _check_coprime(p, q)
    f = difference_root_poly(p, q)
    assert f[0] != 0, "coprime inputs must give F(0) != 0"
    polygon = newton_polygon(ell, f)
    top = polygon.max_slope
    if top is None or top <= 0:
        return 0
    return exponent_from_slope(top)


def solve_problem_2_4(p, q, ell):
    """Maximal n such that P and Q have roots congruent modulo ell^n.

    Returns (n, method) where method records whether the congruence-number
    route sufficed ("cn") or the Newton-polygon fallback ran ("np").
    """
    bounds = bounds_via_congruence_number(p, q, ell)
    if bounds.exact:
        return bounds.lower, "cn"
    return exact_exponent_newton(p, q, ell), "np"
