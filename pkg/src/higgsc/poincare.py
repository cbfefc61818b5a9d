"""Closed-form Poincare polynomials of the moduli spaces and their identities.

Conventions: the ``t`` variable is cohomological degree; invariant-subring
series use the complex grading variable ``T`` (half degrees).  Every division
is exact; :class:`~higgsc.algebra.NotDivisible` escaping from here means a
transcription or parameter bug.

Infinite-dimensional spaces (the classifying spaces, the infinite symmetric
product, the infinite-pole moduli space) are returned as truncations to a
caller-supplied degree; there is no default truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Optional

from .algebra import UniPoly, exact_div, rational_series


class ParameterError(ValueError):
    pass


class Space(Enum):
    JACOBIAN = "J"
    SYM_PROD = "Sigma"
    SYM_PROD_INFTY = "SigmaInf"
    BG = "BG"
    BGBAR = "BGbar"
    N = "N"
    NTILDE = "Ntilde"
    F = "F"
    M = "M"
    MTILDE = "Mtilde"
    M_GAMMA_INV = "MGamma"
    MK = "Mk"
    MTILDE_K = "MtildeK"
    Z = "Z"
    MBAR = "Mbar"
    MTILDE_INFTY = "MtildeInf"


@dataclass(frozen=True)
class GenusParams:
    g: int
    n: Optional[int] = None
    d: Optional[int] = None
    k: Optional[int] = None
    trunc: Optional[int] = None

    def __post_init__(self):
        if self.g < 2:
            raise ParameterError("genus must be at least 2")

    def require(self, name):
        v = getattr(self, name)
        if v is None:
            raise ParameterError(f"space requires parameter '{name}'")
        return v


def _t():
    return UniPoly.monomial(1)


def jacobian(g: int) -> UniPoly:
    return (1 + _t()) ** (2 * g)


def sym_prod(n: int, g: int) -> UniPoly:
    """P_t(Sigma_n) as the x^n coefficient of (1+xt)^2g/((1-x)(1-xt^2)).

    Computed through the equivalent exact recurrence
    P_n = (1+t^2) P_{n-1} - t^2 P_{n-2} + C(2g,n) t^n.
    Negative n gives 0 (empty symmetric product), used by the k-pole strata.
    """
    if n < 0:
        return UniPoly.zero()
    t = _t()
    prev2, prev = UniPoly.zero(), UniPoly.zero()
    cur = UniPoly.one()
    for m in range(1, n + 1):
        prev2, prev = prev, cur
        cur = (1 + t * t) * prev - (t * t) * prev2 + UniPoly.monomial(m, comb(2 * g, m))
    return cur


def sym_prod_closed(n: int, g: int) -> UniPoly:
    """Projective-fibration closed form, valid for n > 2g-2."""
    if n <= 2 * g - 2:
        raise ParameterError("closed form only valid for n > 2g-2")
    t = _t()
    num = (1 + t) ** (2 * g) * (1 - UniPoly.monomial(2 * (n - g + 1)))
    return exact_div(num, 1 - t * t)


def sym_prod_infty(g: int, trunc: int) -> UniPoly:
    return rational_series((1 + _t()) ** (2 * g), 1 - _t() ** 2, trunc)


def bg(g: int, trunc: int) -> UniPoly:
    t = _t()
    num = ((1 + t) * (1 + t ** 3)) ** (2 * g)
    den = (1 - t * t) ** 2 * (1 - t ** 4)
    return rational_series(num, den, trunc)


def bgbar(g: int, trunc: int) -> UniPoly:
    t = _t()
    num = ((1 + t) * (1 + t ** 3)) ** (2 * g)
    den = (1 - t * t) * (1 - t ** 4)
    return rational_series(num, den, trunc)


def space_n(g: int) -> UniPoly:
    """Harder-Narasimhan formula for the stable-bundle moduli space."""
    t = _t()
    num = (1 + t ** 3) ** (2 * g) - UniPoly.monomial(2 * g) * (1 + t) ** (2 * g)
    den = (1 - t * t) * (1 - t ** 4)
    return exact_div(num, den)


def ntilde(g: int) -> UniPoly:
    return jacobian(g) * space_n(g)


def dbar(d: int, g: int) -> int:
    return 2 * g - 2 * d - 1


def f_d(d: int, g: int, k: int = 0) -> UniPoly:
    """Critical submanifold F_d: the invariant part is a symmetric product,
    plus a non-invariant summand of dimension (2^2g - 1) C(2g-2, dbar) sitting
    in the middle degree dbar."""
    if not 1 <= d <= g - 1 + k:
        raise ParameterError("d out of range for F_d")
    n = dbar(d, g) + k
    extra = (2 ** (2 * g) - 1) * comb(2 * g - 2, n)
    return sym_prod(n, g) + UniPoly.monomial(n, extra) if n >= 0 else UniPoly.zero()


def m(g: int) -> UniPoly:
    """Poincare polynomial of the Higgs moduli space via the perfect
    Hitchin stratification, never via the residue form."""
    acc = space_n(g)
    for d in range(1, g):
        acc = acc + UniPoly.monomial(2 * (g + 2 * d - 2)) * f_d(d, g)
    return acc


def m_gamma_inv(g: int, k: int = 0) -> UniPoly:
    """Gamma-invariant Poincare polynomial of M (or of M_k for k > 0)."""
    acc = space_n(g)
    for d in range(1, g + k):
        acc = acc + UniPoly.monomial(2 * (g + 2 * d - 2)) * sym_prod(dbar(d, g) + k, g)
    return acc


def mtilde(g: int) -> UniPoly:
    return jacobian(g) * m_gamma_inv(g)


def mtilde_k(g: int, k: int) -> UniPoly:
    return jacobian(g) * m_gamma_inv(g, k)


def z(g: int) -> UniPoly:
    """Poincare polynomial of the compactification divisor Z."""
    t2 = UniPoly.monomial(2)
    top = UniPoly.monomial(6 * g - 6)
    acc = exact_div(top - 1, t2 - 1) * space_n(g)
    for d in range(1, g):
        acc = acc + exact_div(top - UniPoly.monomial(2 * g - 4 + 4 * d), t2 - 1) * f_d(d, g)
    return acc


def mbar(g: int) -> UniPoly:
    return m(g) + UniPoly.monomial(2) * z(g)


def poincare(space: Space, params: GenusParams) -> UniPoly:
    g = params.g
    if space is Space.JACOBIAN:
        return jacobian(g)
    if space is Space.SYM_PROD:
        return sym_prod(params.require("n"), g)
    if space is Space.SYM_PROD_INFTY:
        return sym_prod_infty(g, params.require("trunc"))
    if space is Space.BG:
        return bg(g, params.require("trunc"))
    if space is Space.BGBAR:
        return bgbar(g, params.require("trunc"))
    if space is Space.N:
        return space_n(g)
    if space is Space.NTILDE:
        return ntilde(g)
    if space is Space.F:
        return f_d(params.require("d"), g, params.k or 0)
    if space is Space.M:
        return m(g)
    if space is Space.MTILDE:
        return mtilde(g)
    if space is Space.M_GAMMA_INV:
        return m_gamma_inv(g)
    if space is Space.MK:
        return m_gamma_inv(g, params.require("k"))
    if space is Space.MTILDE_K:
        return mtilde_k(g, params.require("k"))
    if space is Space.Z:
        return z(g)
    if space is Space.MBAR:
        return mbar(g)
    if space is Space.MTILDE_INFTY:
        return bgbar(g, params.require("trunc"))
    raise ParameterError(f"unknown space {space}")


# -- perfect-stratification assembler ------------------------------------------


def assemble_stratification(strata) -> UniPoly:
    """Sum of t^index * P_stratum over a perfect stratification."""
    strata = list(strata)
    if not strata:
        raise ParameterError("stratification must be non-empty")
    acc = UniPoly.zero()
    for p, index in strata:
        if index % 2 or index < 0:
            raise ParameterError("stratum indices must be even and non-negative")
        acc = acc + UniPoly.monomial(index) * p
    return acc


# -- invariant (complex-graded) Poincare polynomials ---------------------------


def invariant_sym_prod(n: int, g: int) -> UniPoly:
    """P_T^I(Sigma_n): the eta^q sigma^s basis with q + 2s <= n."""
    if not 0 <= n <= 2 * g - 2:
        raise ParameterError("invariant symmetric-product series needs 0 <= n <= 2g-2")
    coeffs = {}
    for q in range(n + 1):
        for s in range((n - q) // 2 + 1):
            coeffs[q + s] = coeffs.get(q + s, 0) + 1
    return UniPoly([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


def invariant_n(g: int) -> UniPoly:
    coeffs = {}
    for r in range(g):
        for s in range(g - r):
            for t in range(g - r - s):
                d = r + 2 * s + 3 * t
                coeffs[d] = coeffs.get(d, 0) + 1
    return UniPoly([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


def invariant_m(g: int) -> UniPoly:
    coeffs = {}
    bound = 3 * g - 3
    for r in range(bound + 1):
        for s in range((bound - r) // 3 + 1):
            for t in range((bound - r - 3 * s) // 3 + 1):
                d = r + 2 * s + 3 * t
                coeffs[d] = coeffs.get(d, 0) + 1
    return UniPoly([coeffs.get(i, 0) for i in range(max(coeffs) + 1)])


def invariant_poincare(space: Space, params: GenusParams) -> UniPoly:
    if space is Space.SYM_PROD:
        return invariant_sym_prod(params.require("n"), params.g)
    if space is Space.N:
        return invariant_n(params.g)
    if space is Space.M:
        return invariant_m(params.g)
    raise ParameterError("invariant series exist for Sigma_n, N and M only")


# -- identity and stabilization suite ------------------------------------------


@dataclass
class IdentityResult:
    name: str
    passed: bool
    detail: str = ""


def minimal_stabilization_k(g: int, degree: int, k_max: int = 60) -> Optional[int]:
    """Smallest k with P_t(Mtilde_k) == P_t(BGbar) through ``degree``."""
    target = bgbar(g, degree)
    for k in range(k_max + 1):
        if mtilde_k(g, k).truncate(degree) == target:
            return k
    return None


def identity_suite(g: int, stab_degree: int = 10) -> list:
    """Cross-checks among the closed forms; every identity must hold exactly."""
    results = []
    trunc = max(4 * g, stab_degree) + 6
    t2 = UniPoly.monomial(2)

    lhs = ((1 - t2) * bg(g, trunc + 2)).truncate(trunc)
    results.append(IdentityResult(
        "classifying-space-quotient", lhs == bgbar(g, trunc),
        "(1-t^2) P(BG) == P(BGbar)"))

    pm, pz = m(g), z(g)
    results.append(IdentityResult(
        "compactification-sum", mbar(g) == pm + t2 * pz,
        "P(Mbar) == P(M) + t^2 P(Z)"))

    strata = [(space_n(g), 0)] + [
        (f_d(d, g), 2 * (g + 2 * d - 2)) for d in range(1, g)
    ]
    results.append(IdentityResult(
        "hitchin-stratification", assemble_stratification(strata) == pm,
        "stratum assembly reproduces P(M)"))

    results.append(IdentityResult(
        "euler-characteristic-N", space_n(g).evaluate(-1) == 0,
        "P_{-1}(N) == 0"))

    pn = space_n(g)
    results.append(IdentityResult(
        "poincare-duality", pn.is_palindromic(6 * g - 6)
        and pz.is_palindromic(2 * (6 * g - 7))
        and mbar(g).is_palindromic(2 * (6 * g - 6))
        and all(sym_prod(n, g).is_palindromic(2 * n) for n in range(2 * g)),
        "palindromy of P(N), P(Z), P(Mbar), P(Sigma_n)"))

    results.append(IdentityResult(
        "varying-determinant-N", ntilde(g) == jacobian(g) * pn,
        "P(Ntilde) == (1+t)^2g P(N)"))
    results.append(IdentityResult(
        "varying-determinant-M", mtilde(g) == jacobian(g) * m_gamma_inv(g),
        "P(Mtilde) == (1+t)^2g (P(M))^Gamma"))

    inv = invariant_n(g)
    for d in range(1, g):
        inv = inv + UniPoly.monomial(g + 2 * d - 2) * invariant_sym_prod(dbar(d, g), g)
    results.append(IdentityResult(
        "invariant-decomposition", inv == invariant_m(g),
        "P_T^I(M) == P_T^I(N) + sum_d T^(g+2d-2) P_T^I(Sigma_dbar)"))

    top = m(g)[6 * g - 6]
    results.append(IdentityResult(
        "middle-betti", top == g and (m(g).degree == 6 * g - 6),
        f"top Betti number of M is g (got {top})"))

    k = minimal_stabilization_k(g, stab_degree)
    results.append(IdentityResult(
        "stabilization", k is not None,
        f"P(Mtilde_k) == P(BGbar) through degree {stab_degree} from k = {k}"))

    return results
