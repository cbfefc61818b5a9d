"""Buchberger Groebner bases over Q with weighted-graded-lex orders.

Supports homogeneous ideals only (asserted at construction), optional degree
caps (exact below the cap for homogeneous input), normal forms carrying an
exact membership certificate, and Hilbert series of the graded quotient read
off the leading-monomial staircase.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebra import AlgebraError, MultiPoly, UniPoly, VarSpec, ZERO


class GroebnerError(AlgebraError):
    pass


class CapExceeded(GroebnerError):
    pass


class ResourceLimit(GroebnerError):
    """Raised when a wall-time limit is hit; carries partial progress."""

    def __init__(self, message, degree_reached=None, pairs_remaining=None):
        super().__init__(message)
        self.degree_reached = degree_reached
        self.pairs_remaining = pairs_remaining


@dataclass(frozen=True)
class MonomialOrder:
    """Weighted-graded order, ties broken lexicographically.

    The variable order declared in the VarSpec is the lex order (first variable
    greatest), which for (alpha, beta, gamma) makes the leading monomial of
    each rho relation the pure monomial alpha^r beta^s gamma^t.
    """

    spec: VarSpec

    def key(self, exps):
        return (sum(e * w for e, w in zip(exps, self.spec.weights)), exps)

    def compare_gt(self, a, b):
        return self.key(a) > self.key(b)


def lead_term(p: MultiPoly, order: MonomialOrder):
    """(exponent tuple, coefficient) of the leading term; None for zero."""
    if p.is_zero():
        return None
    e = max(p.terms, key=order.key)
    return e, p.terms[e]


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _exp_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def make_monic(p: MultiPoly, order: MonomialOrder) -> MultiPoly:
    lt = lead_term(p, order)
    if lt is None:
        return p
    return p * (Fraction(1) / lt[1])


@dataclass(frozen=True)
class IdealPresentation:
    generators: tuple
    order: MonomialOrder

    def __post_init__(self):
        for g in self.generators:
            if g.is_zero():
                raise GroebnerError("ideal generators must be nonzero")
            if not g.is_homogeneous():
                raise GroebnerError("generators must be homogeneous")

    @classmethod
    def of(cls, generators, order):
        return cls(tuple(generators), order)


@dataclass(frozen=True)
class GroebnerBasis:
    basis: tuple
    order: MonomialOrder
    degree_cap: Optional[int] = None
    leads: tuple = field(default=(), compare=False)

    @property
    def spec(self):
        return self.order.spec

    def serialize(self):
        """Canonical text form with an order-descriptor header."""
        spec = self.spec
        header = "order weighted-graded-lex " + " ".join(
            f"{n}:{w}" for n, w in zip(spec.names, spec.weights)
        )
        lines = [header, f"cap {self.degree_cap}"]
        lines += [p.to_text() for p in self.basis]
        return "\n".join(lines)

    @classmethod
    def deserialize(cls, spec: VarSpec, text: str):
        lines = text.splitlines()
        cap = lines[1].split()[1]
        cap = None if cap == "None" else int(cap)
        order = MonomialOrder(spec)
        basis = tuple(MultiPoly.from_text(spec, ln) for ln in lines[2:])
        return cls(basis, order, cap, tuple(lead_term(p, order)[0] for p in basis))


@dataclass
class MembershipCertificate:
    """input = sum(multiplier * basis[index]) + remainder, exactly."""

    quotients: list  # (MultiPoly multiplier, basis index)
    remainder: MultiPoly

    def reconstruct(self, gb: GroebnerBasis) -> MultiPoly:
        acc = self.remainder
        for mult, idx in self.quotients:
            acc = acc + mult * gb.basis[idx]
        return acc

    @property
    def in_ideal(self):
        return self.remainder.is_zero()


def _reduce(p, basis, leads, order, with_certificate=False):
    """Multivariate division of p by basis; returns (remainder, quotients)."""
    spec = p.spec
    quotients = [MultiPoly.zero(spec) for _ in basis] if with_certificate else None
    rem_terms = {}
    work = dict(p.terms)
    key = order.key
    while work:
        e = max(work, key=key)
        c = work.pop(e)
        if not c:
            continue
        for i, le in enumerate(leads):
            if _divides(le, e):
                q = _exp_sub(e, le)
                lc = basis[i].terms[le]
                f = c / lc
                if with_certificate:
                    quotients[i] = quotients[i] + MultiPoly(spec, {q: f})
                # work -= f * x^q * basis[i]  (lead cancels by construction)
                for be, bc in basis[i].terms.items():
                    ne = tuple(a + b for a, b in zip(q, be))
                    s = work.get(ne, ZERO) - f * bc
                    if ne == e:
                        continue
                    if s:
                        work[ne] = s
                    else:
                        work.pop(ne, None)
                break
        else:
            rem_terms[e] = rem_terms.get(e, ZERO) + c
    remainder = MultiPoly(spec, rem_terms)
    if with_certificate:
        quots = [(q, i) for i, q in enumerate(quotients) if not q.is_zero()]
        return remainder, quots
    return remainder, None


def buchberger(
    ideal: IdealPresentation,
    degree_cap: Optional[int] = None,
    time_limit: Optional[float] = None,
    progress=None,
) -> GroebnerBasis:
    """Reduced Groebner basis via Buchberger's algorithm.

    Pairs are processed in increasing lcm degree (normal strategy), with the
    coprime-lead and chain criteria for pruning.  With a degree cap the result
    is exact in all weighted degrees <= cap (valid because the input is
    homogeneous).  ``time_limit`` (seconds) aborts with ResourceLimit.
    """
    order = ideal.order
    spec = order.spec
    deadline = time.monotonic() + time_limit if time_limit else None

    basis = []
    for g in ideal.generators:
        basis.append(make_monic(g, order))
    leads = [lead_term(p, order)[0] for p in basis]

    def pair_degree(i, j):
        l = _lcm(leads[i], leads[j])
        return sum(e * w for e, w in zip(l, spec.weights))

    pairs = {(i, j) for i in range(len(basis)) for j in range(i)}
    degree_reached = 0
    while pairs:
        if deadline and time.monotonic() > deadline:
            raise ResourceLimit(
                "Groebner computation hit the wall-time limit",
                degree_reached=degree_reached,
                pairs_remaining=len(pairs),
            )
        i, j = min(pairs, key=lambda ij: (pair_degree(*ij), ij))
        pairs.discard((i, j))
        li, lj = leads[i], leads[j]
        lcm = _lcm(li, lj)
        ldeg = sum(e * w for e, w in zip(lcm, spec.weights))
        if degree_cap is not None and ldeg > degree_cap:
            continue
        degree_reached = max(degree_reached, ldeg)
        # coprime leading terms: S-poly reduces to zero
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(leads[k], lcm):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if (a[1], a[0]) not in pairs and (b[1], b[0]) not in pairs:
                    if (a[0], a[1]) not in pairs and (b[0], b[1]) not in pairs:
                        skip = True
                        break
        if skip:
            continue
        spoly = basis[i] * MultiPoly(spec, {_exp_sub(lcm, li): Fraction(1)}) - basis[j] * MultiPoly(
            spec, {_exp_sub(lcm, lj): Fraction(1)}
        )
        rem, _ = _reduce(spoly, basis, leads, order)
        if rem.is_zero():
            continue
        rem = make_monic(rem, order)
        new = len(basis)
        basis.append(rem)
        leads.append(lead_term(rem, order)[0])
        for k in range(new):
            pairs.add((new, k))
        if progress:
            progress(degree_reached, len(pairs), len(basis))

    basis, leads = _autoreduce(basis, leads, order)
    return GroebnerBasis(tuple(basis), order, degree_cap, tuple(leads))


def _autoreduce(basis, leads, order):
    """Minimal then fully reduced basis, canonically sorted."""
    # drop elements whose lead is divisible by another lead
    keep = []
    for i, le in enumerate(leads):
        if any(
            j != i
            and _divides(leads[j], le)
            and (leads[j] != le or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(i)
    basis = [basis[i] for i in keep]
    leads = [leads[i] for i in keep]
    # tail-reduce every element against the rest
    reduced = []
    for i, p in enumerate(basis):
        others = basis[:i] + basis[i + 1 :]
        lothers = leads[:i] + leads[i + 1 :]
        rem, _ = _reduce(p, others, lothers, order) if others else (p, None)
        reduced.append(make_monic(rem, order))
    pairs_sorted = sorted(
        zip(reduced, (lead_term(p, order)[0] for p in reduced)),
        key=lambda pl: order.key(pl[1]),
    )
    basis = [p for p, _ in pairs_sorted]
    leads = [l for _, l in pairs_sorted]
    return basis, leads


def normal_form(p: MultiPoly, gb: GroebnerBasis) -> MembershipCertificate:
    """Remainder and certificate of p modulo the basis.

    Capped bases only answer for deg(p) <= cap.
    """
    if gb.degree_cap is not None:
        d = p.weighted_degree()
        if d is not None and d > gb.degree_cap:
            raise CapExceeded(f"degree {d} above the basis cap {gb.degree_cap}")
    rem, quots = _reduce(p, list(gb.basis), list(gb.leads), gb.order, with_certificate=True)
    return MembershipCertificate(quots, rem)


def _standard_monomial_counts(leads, spec: VarSpec, up_to: int):
    """Count monomials of each weighted degree not divisible by any lead."""
    counts = [0] * (up_to + 1)
    weights = spec.weights
    n = len(weights)

    def rec(i, exps, deg):
        if i == n:
            counts[deg] += 0 if any(_divides(l, tuple(exps)) for l in leads) else 1
            return
        w = weights[i]
        e = 0
        while deg + e * w <= up_to:
            exps.append(e)
            rec(i + 1, exps, deg + e * w)
            exps.pop()
            e += 1
            if w == 0:
                raise GroebnerError("hilbert series needs strictly positive weights")

    rec(0, [], 0)
    return counts


def hilbert_series(gb: GroebnerBasis, up_to_degree: int) -> UniPoly:
    """Hilbert series of the graded quotient, as a polynomial in T.

    Computed from the staircase of leading monomials; exact for every degree
    <= up_to_degree (and the cap, when the basis is capped).
    """
    if gb.degree_cap is not None and up_to_degree > gb.degree_cap:
        raise CapExceeded("requested degree exceeds the basis cap")
    counts = _standard_monomial_counts(gb.leads, gb.spec, up_to_degree)
    return UniPoly(counts)


def quotient_is_finite(gb: GroebnerBasis) -> bool:
    """True iff the staircase complement is finite.

    For an uncapped basis this certifies that the quotient vanishes in every
    degree above the top of the Hilbert polynomial: it holds exactly when each
    variable has a pure power among the leading monomials.
    """
    if gb.degree_cap is not None:
        return False
    n = len(gb.spec)
    for i in range(n):
        if not any(
            l[i] > 0 and all(l[j] == 0 for j in range(n) if j != i) for l in gb.leads
        ):
            return False
    return True
