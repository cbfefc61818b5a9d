"""Intersection calculus on the invariant subring of a symmetric product.

The subring is generated by eta (complex degree 1) and sigma (complex degree
1); evaluation against the fundamental class goes through Zagier's residue
formula, and the zero test is the Poincare pairing against all complementary
eta^i sigma^j monomials.  Individual odd generators are never materialized.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .algebra import MultiPoly, TruncatedSeries, UniPoly, VarSpec

ETA_SIGMA = VarSpec.of(("eta", 1), ("sigma", 1))
ETA_SIGMA_U = VarSpec.of(("eta", 1), ("sigma", 1), ("u", 1))


def eta_sigma_poly(terms) -> MultiPoly:
    """Build an invariant class from {(eta_exp, sigma_exp): coeff}."""
    return MultiPoly(ETA_SIGMA, {k: Fraction(v) for k, v in terms.items()})


def zagier_eval(a: UniPoly, b: UniPoly, n: int, g: int) -> Fraction:
    """A(eta) exp(B(eta) sigma) [Sigma_n] = Res_{eta=0} A (1 + eta B)^g / eta^{n+1}.

    The residue is the eta^n coefficient of A(eta)(1 + eta B(eta))^g.
    """
    if n < 0:
        return Fraction(0)
    t = UniPoly.monomial(1)
    num = a * (1 + t * b) ** g
    return num[n]


def pair_monomial(a: int, b: int, n: int, g: int) -> Fraction:
    """eta^a sigma^b [Sigma_n]: zero unless a + b = n, else b! C(g, b)."""
    if a < 0 or b < 0 or a + b != n:
        return Fraction(0)
    return Fraction(factorial(b) * comb(g, b))


def _pair_against(p: MultiPoly, i: int, j: int, n: int, g: int) -> Fraction:
    """(p * eta^i sigma^j)[Sigma_n] for p in eta, sigma."""
    ei = p.spec.index("eta")
    si = p.spec.index("sigma")
    acc = Fraction(0)
    for e, c in p.terms.items():
        acc += c * pair_monomial(e[ei] + i, e[si] + j, n, g)
    return acc


def zero_witness(p: MultiPoly, n: int, g: int):
    """None if p vanishes in the invariant subring of Sigma_n, else a
    witnessing (i, j) with (p * eta^i sigma^j)[Sigma_n] != 0.

    Inhomogeneous inputs are tested componentwise; classes of degree above n
    vanish vacuously (nothing to pair against).
    """
    for d in p.degrees_present():
        comp = p.homogeneous_part(d)
        for i in range(n - d + 1):
            j = n - d - i
            if _pair_against(comp, i, j, n, g):
                return (i, j)
    return None


def is_zero_invariant(p: MultiPoly, n: int, g: int) -> bool:
    return zero_witness(p, n, g) is None


def lemma_expression_part(k: int, m: int, l: int) -> MultiPoly:
    """Degree-l part of exp(sigma) eta^k / (1+eta)^m as an eta-sigma class."""
    terms = {}
    for j in range(max(0, l - k) + 1):
        i = l - k - j
        if i < 0:
            continue
        if i == 0:
            c = Fraction(1, factorial(j))
        elif m == 0:
            continue
        else:
            c = Fraction((-1) ** i * comb(m + i - 1, i), factorial(j))
        if c:
            terms[(k + i, j)] = terms.get((k + i, j), Fraction(0)) + c
    return MultiPoly(ETA_SIGMA, terms)


def vanishing_lemma_hypotheses(n: int, k: int, m: int, l: int, g: int) -> bool:
    return n - g + m <= l and g + k - m < l


def vanishing_lemma_check(n: int, k: int, m: int, l: int, g: int) -> bool:
    """Expand the lemma expression and test its degree-l part on Sigma_n."""
    return is_zero_invariant(lemma_expression_part(k, m, l), n, g)


# -- the beta^g restriction check ----------------------------------------------


def _series_u(g: int, d: int) -> TruncatedSeries:
    """e^{sigma u} (1-(eta-u)(eta-2u))^{d-1} / (1-eta(eta-u))^d to degree 2g."""
    trunc = 2 * g
    eta = MultiPoly.var(ETA_SIGMA_U, "eta")
    sigma = MultiPoly.var(ETA_SIGMA_U, "sigma")
    u = MultiPoly.var(ETA_SIGMA_U, "u")
    exp_su = TruncatedSeries(sigma * u, trunc).exp()
    numer = TruncatedSeries(1 - (eta - u) * (eta - 2 * u), trunc) ** (d - 1)
    denom_inv = TruncatedSeries(1 - eta * (eta - u), trunc).inverse() ** d
    return exp_su * numer * denom_inv


def _u_slices_at_degree(series: TruncatedSeries, degree: int):
    """The degree-``degree`` slice as a list of (u_power, eta-sigma class)."""
    slice_poly = series.poly.homogeneous_part(degree)
    out = {}
    ui = series.spec.index("u")
    for e, c in slice_poly.terms.items():
        r = e[ui]
        key = (e[series.spec.index("eta")], e[series.spec.index("sigma")])
        out.setdefault(r, {})[key] = c
    return [(r, MultiPoly(ETA_SIGMA, terms)) for r, terms in sorted(out.items())]


def beta_g_restriction_witness(g: int, d: int):
    """None if every u-power of the degree-2g slice vanishes on Sigma_dbar,
    else (u_power, (i, j)) locating the first nonzero pairing."""
    if not 1 <= d <= g - 1:
        raise ValueError("need 1 <= d <= g-1")
    n = 2 * g - 2 * d - 1
    for r, cls in _u_slices_at_degree(_series_u(g, d), 2 * g):
        w = zero_witness(cls, n, g)
        if w is not None:
            return (r, w)
    return None


def beta_g_restriction_check(g: int, d: int) -> bool:
    return beta_g_restriction_witness(g, d) is None


def beta_g_term_check(g: int, d: int, i: int) -> bool:
    """Term-by-term form of the restriction vanishing: the i-th summand
    C(d+i-1,i) eta^{2i} e^{sigma u} (1+eta u)^{-(d+i)} (1-(eta-u)(eta-2u))^{d-1}
    has vanishing degree-2g part on Sigma_dbar.

    The summation index here starts at i = 0 with binomial C(d+i-1, i): the
    direct binomial expansion of the displayed rational function, which this
    module treats as authoritative.
    """
    trunc = 2 * g
    n = 2 * g - 2 * d - 1
    eta = MultiPoly.var(ETA_SIGMA_U, "eta")
    sigma = MultiPoly.var(ETA_SIGMA_U, "sigma")
    u = MultiPoly.var(ETA_SIGMA_U, "u")
    term = (
        TruncatedSeries(sigma * u, trunc).exp()
        * TruncatedSeries(1 - (eta - u) * (eta - 2 * u), trunc) ** (d - 1)
        * (TruncatedSeries(1 + eta * u, trunc).inverse() ** (d + i))
        * comb(d + i - 1, i)
        * TruncatedSeries(eta ** (2 * i), trunc)
    )
    return all(
        zero_witness(cls, n, g) is None for _, cls in _u_slices_at_degree(term, 2 * g)
    )


def term_sum_matches_closed_form(g: int, d: int) -> bool:
    """Cross-check that the i-indexed summands add up to the closed form."""
    trunc = 2 * g
    eta = MultiPoly.var(ETA_SIGMA_U, "eta")
    sigma = MultiPoly.var(ETA_SIGMA_U, "sigma")
    u = MultiPoly.var(ETA_SIGMA_U, "u")
    exp_su = TruncatedSeries(sigma * u, trunc).exp()
    numer = TruncatedSeries(1 - (eta - u) * (eta - 2 * u), trunc) ** (d - 1)
    inv1pu = TruncatedSeries(1 + eta * u, trunc).inverse()
    acc = TruncatedSeries(MultiPoly.zero(ETA_SIGMA_U), trunc)
    for i in range(g + 1):  # eta^{2i} beyond degree 2g contributes nothing
        acc = acc + exp_su * numer * (inv1pu ** (d + i)) * comb(d + i - 1, i) * TruncatedSeries(
            eta ** (2 * i), trunc
        )
    return acc == _series_u(g, d)
