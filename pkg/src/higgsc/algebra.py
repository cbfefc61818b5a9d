"""Exact polynomial and truncated power-series arithmetic over Q.

Everything here is exact: coefficients are ``fractions.Fraction``, equality
is structural equality of normal forms, and there is no floating point.

Three value types:

* :class:`UniPoly` -- univariate polynomials (Poincare polynomials, Hilbert
  series), with exact division.
* :class:`MultiPoly` -- sparse multivariate (Laurent) polynomials over a
  weighted variable specification.  Negative exponents are allowed, which is
  how the square-root/Laurent coefficient extension (``s`` with ``s^2 = beta``)
  and residue windows in ``eta`` are represented.
* :class:`TruncatedSeries` -- a MultiPoly together with an inclusive weighted
  truncation degree, with inverse/exp/log/sqrt and fractional powers.

All values are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class AlgebraError(Exception):
    pass


class ArityMismatch(AlgebraError):
    pass


class NotDivisible(AlgebraError):
    pass


class NotAUnit(AlgebraError):
    pass


class NonzeroConstant(AlgebraError):
    pass


class TruncationExceeded(AlgebraError):
    pass


@dataclass(frozen=True)
class VarSpec:
    """Ordered variable names with their weights in the active grading.

    Weight 0 is legal and marks a coefficient-ring variable: it does not
    contribute to weighted degrees or truncation bookkeeping.
    """

    names: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ArityMismatch("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise AlgebraError("variable names must be unique")
        if any(w < 0 for w in self.weights):
            raise AlgebraError("weights must be non-negative")

    @classmethod
    def of(cls, *pairs):
        return cls(tuple(n for n, _ in pairs), tuple(w for _, w in pairs))

    def index(self, name):
        return self.names.index(name)

    def __len__(self):
        return len(self.names)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms map exponent tuples (one slot per variable of ``spec``, negative
    exponents allowed) to nonzero coefficients.  Zero coefficients are never
    stored.
    """

    __slots__ = ("spec", "terms")

    def __init__(self, spec: VarSpec, terms: Mapping[tuple, Fraction]):
        clean = {}
        arity = len(spec)
        for exps, c in terms.items():
            if len(exps) != arity:
                raise ArityMismatch(f"exponent vector {exps} has wrong arity")
            c = _as_fraction(c)
            if c:
                clean[tuple(exps)] = c
        self.spec = spec
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, spec):
        return cls(spec, {})

    @classmethod
    def const(cls, spec, c):
        return cls(spec, {(0,) * len(spec): _as_fraction(c)})

    @classmethod
    def var(cls, spec, name, exp=1):
        e = [0] * len(spec)
        e[spec.index(name)] = exp
        return cls(spec, {tuple(e): ONE})

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.spec), ZERO)

    def weighted_degree(self):
        """Max weighted degree of the terms; None for the zero polynomial."""
        if not self.terms:
            return None
        w = self.spec.weights
        return max(sum(e * wt for e, wt in zip(exps, w)) for exps in self.terms)

    def term_degree(self, exps):
        return sum(e * wt for e, wt in zip(exps, self.spec.weights))

    def is_homogeneous(self):
        degs = {self.term_degree(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d):
        return MultiPoly(
            self.spec,
            {e: c for e, c in self.terms.items() if self.term_degree(e) == d},
        )

    def degrees_present(self):
        return sorted({self.term_degree(e) for e in self.terms})

    # -- ring operations ---------------------------------------------------

    def _check(self, other):
        if self.spec != other.spec:
            raise ArityMismatch("operands live over different variable specs")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.spec, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly(self.spec, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.spec, other)
        return self + (-other)

    def __rsub__(self, other):
        return MultiPoly.const(self.spec, other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return MultiPoly(self.spec, {e: co * c for e, co in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly(self.spec, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (ONE / _as_fraction(c))

    def __pow__(self, n):
        if n < 0:
            raise AlgebraError("negative powers are not defined on MultiPoly")
        out = MultiPoly.const(self.spec, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.spec, other)
        return isinstance(other, MultiPoly) and self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash((self.spec, frozenset(self.terms.items())))

    # -- structural helpers ------------------------------------------------

    def map_coeff(self, f):
        return MultiPoly(self.spec, {e: f(c) for e, c in self.terms.items()})

    def truncate(self, degree):
        """Drop terms of weighted degree above ``degree``."""
        return MultiPoly(
            self.spec,
            {e: c for e, c in self.terms.items() if self.term_degree(e) <= degree},
        )

    def coefficient_of(self, name, n):
        """Coefficient of ``name**n`` as a polynomial with that slot zeroed."""
        i = self.spec.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == n:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return MultiPoly(self.spec, out)

    def substitute(self, images: Mapping[str, "MultiPoly"], target: VarSpec):
        """Ring homomorphism sending each variable to its image.

        Every variable of ``self.spec`` must be mapped; exponents must be
        non-negative.
        """
        cache = {}

        def image_pow(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[self.spec.names[i]] ** k
            return cache[key]

        out = MultiPoly.zero(target)
        for e, c in self.terms.items():
            term = MultiPoly.const(target, c)
            for i, k in enumerate(e):
                if k < 0:
                    raise AlgebraError("cannot substitute into negative exponents")
                if k:
                    term = term * image_pow(i, k)
            out = out + term
        return out

    def rename(self, target: VarSpec, mapping: Mapping[str, str] | None = None):
        """Transport terms to another spec by variable name (weights may differ)."""
        mapping = mapping or {n: n for n in self.spec.names}
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(target)
            for n, k in zip(self.spec.names, e):
                if k:
                    ne[target.index(mapping[n])] += k
            key = tuple(ne)
            out[key] = out.get(key, ZERO) + c
        return MultiPoly(target, out)

    # -- canonical text form -----------------------------------------------

    def _sorted_terms(self):
        # graded-lexicographic, highest first: weighted degree, then the
        # exponent tuple itself (earlier variables are greater).
        return sorted(
            self.terms.items(),
            key=lambda item: (self.term_degree(item[0]), item[0]),
            reverse=True,
        )

    def to_text(self):
        """Canonical serialization, e.g. ``3/2*a^2*b + -1*g``."""
        if not self.terms:
            return "0"
        chunks = []
        for e, c in self._sorted_terms():
            factors = [str(c)]
            for name, k in zip(self.spec.names, e):
                if k == 1:
                    factors.append(name)
                elif k != 0:
                    factors.append(f"{name}^{k}")
            chunks.append("*".join(factors))
        return " + ".join(chunks)

    @classmethod
    def from_text(cls, spec: VarSpec, text: str):
        text = text.strip()
        if text == "0":
            return cls.zero(spec)
        terms = {}
        for chunk in text.split(" + "):
            factors = chunk.split("*")
            try:
                c = Fraction(factors[0])
                factors = factors[1:]
            except ValueError:
                # a bare monomial like "t^2" carries an implicit 1
                c = Fraction(1)
            e = [0] * len(spec)
            for f in factors:
                if "^" in f:
                    name, k = f.split("^")
                    e[spec.index(name)] += int(k)
                else:
                    e[spec.index(f)] += 1
            key = tuple(e)
            terms[key] = terms.get(key, ZERO) + c
        return cls(spec, terms)

    def __repr__(self):
        return f"MultiPoly({self.to_text()})"


# -- square-root / Laurent coefficient extension -------------------------------


def is_beta_polynomial(p: MultiPoly, svar: str) -> bool:
    """True iff every exponent of ``svar`` is even and non-negative.

    Such elements are honest polynomials in ``beta = svar**2``.
    """
    i = p.spec.index(svar)
    return all(e[i] >= 0 and e[i] % 2 == 0 for e in p.terms)


def s_to_beta(p: MultiPoly, svar: str, target: VarSpec, beta: str) -> MultiPoly:
    """Rewrite ``svar**(2k)`` as ``beta**k``; fails on odd or negative powers."""
    if not is_beta_polynomial(p, svar):
        raise AlgebraError("element is not polynomial in beta")
    bi = target.index(beta)
    out = {}
    for e, c in p.terms.items():
        ne = [0] * len(target)
        for n, k in zip(p.spec.names, e):
            if k == 0:
                continue
            if n == svar:
                ne[bi] += k // 2
            else:
                ne[target.index(n)] += k
        key = tuple(ne)
        out[key] = out.get(key, ZERO) + c
    return MultiPoly(target, out)


def beta_to_s(p: MultiPoly, beta: str, target: VarSpec, svar: str) -> MultiPoly:
    """Rewrite ``beta**k`` as ``svar**(2k)`` (inverse of :func:`s_to_beta`)."""
    i = p.spec.index(beta)
    si = target.index(svar)
    name_idx = {n: target.index(n) for n in p.spec.names if n != beta}
    out = {}
    for e, c in p.terms.items():
        ne = [0] * len(target)
        for n, k in zip(p.spec.names, e):
            if n == beta:
                ne[si] += 2 * k
            else:
                ne[name_idx[n]] += k
        out[tuple(ne)] = c
    return MultiPoly(target, out)


def residue_at_zero(p: MultiPoly, var: str) -> MultiPoly:
    """Coefficient of ``var**-1`` (zero if absent)."""
    return p.coefficient_of(var, -1)


# -- truncated multivariate power series ---------------------------------------


class TruncatedSeries:
    """A MultiPoly known only up to an inclusive weighted truncation degree.

    Weight-0 variables act as coefficient-ring generators and never count
    against the truncation.
    """

    __slots__ = ("poly", "trunc")

    def __init__(self, poly: MultiPoly, trunc: int):
        if trunc < 0:
            raise AlgebraError("truncation degree must be non-negative")
        self.poly = poly.truncate(trunc)
        self.trunc = trunc

    @classmethod
    def from_poly(cls, poly, trunc):
        return cls(poly, trunc)

    @classmethod
    def one(cls, spec, trunc):
        return cls(MultiPoly.const(spec, 1), trunc)

    @property
    def spec(self):
        return self.poly.spec

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.trunc == other.trunc
            and self.poly == other.poly
        )

    def __hash__(self):
        return hash((self.poly, self.trunc))

    def _join(self, other):
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries(MultiPoly.const(self.spec, other), self.trunc)
        if isinstance(other, MultiPoly):
            other = TruncatedSeries(other, self.trunc)
        return other, min(self.trunc, other.trunc)

    def __add__(self, other):
        other, t = self._join(other)
        return TruncatedSeries(self.poly + other.poly, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.poly, self.trunc)

    def __sub__(self, other):
        other, t = self._join(other)
        return TruncatedSeries(self.poly - other.poly, t)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.poly * other, self.trunc)
        other, t = self._join(other)
        return TruncatedSeries((self.poly * other.poly).truncate(t), t)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = TruncatedSeries.one(self.spec, self.trunc)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def weight_zero_part(self) -> MultiPoly:
        return self.poly.homogeneous_part(0)

    def _positive_part(self):
        """self minus its weight-0 slice."""
        return TruncatedSeries(self.poly - self.poly.homogeneous_part(0), self.trunc)

    def inverse(self):
        """Multiplicative inverse; requires weight-0 part exactly 1."""
        if self.weight_zero_part() != MultiPoly.const(self.spec, 1):
            raise NotAUnit("series inverse needs constant term 1")
        g = self._positive_part()
        # 1/(1+g) = sum (-g)^k, k <= trunc since g has positive weight
        out = TruncatedSeries.one(self.spec, self.trunc)
        power = TruncatedSeries.one(self.spec, self.trunc)
        for _ in range(self.trunc):
            power = power * (-g)
            if power.poly.is_zero():
                break
            out = out + power
        return out

    def exp(self):
        """exp of a series with zero weight-0 part."""
        if not self.weight_zero_part().is_zero():
            raise NonzeroConstant("series exp needs zero constant term")
        out = TruncatedSeries.one(self.spec, self.trunc)
        term = TruncatedSeries.one(self.spec, self.trunc)
        for k in range(1, self.trunc + 1):
            term = term * self * Fraction(1, k)
            if term.poly.is_zero():
                break
            out = out + term
        return out

    def log(self):
        """log of a series with weight-0 part exactly 1."""
        if self.weight_zero_part() != MultiPoly.const(self.spec, 1):
            raise NotAUnit("series log needs constant term 1")
        g = self._positive_part()
        out = TruncatedSeries(MultiPoly.zero(self.spec), self.trunc)
        power = TruncatedSeries.one(self.spec, self.trunc)
        for k in range(1, self.trunc + 1):
            power = power * g
            if power.poly.is_zero():
                break
            out = out + power * Fraction((-1) ** (k + 1), k)
        return out

    def sqrt(self):
        return self.pow_scalar(Fraction(1, 2))

    def pow_scalar(self, e: Fraction):
        """f**e for rational e, f with unit constant term: exp(e*log f)."""
        return (self.log() * e).exp()

    def pow_elem(self, e: MultiPoly):
        """f**e where the exponent e is a weight-0 ring element.

        Needed for exponents like ``gamma*/(2*beta*sqrt(beta))`` which live in
        the Laurent coefficient ring, not in Q.
        """
        if e.weighted_degree() not in (None, 0):
            raise AlgebraError("exponent must have weight 0")
        log = self.log()
        return TruncatedSeries((log.poly * e).truncate(self.trunc), self.trunc).exp()

    def coeff(self, name, n):
        """Coefficient of ``name**n`` as a series in the remaining slots.

        The result keeps the same spec (with the extracted slot zeroed) and a
        truncation reduced by the weight spent on ``name**n``.
        """
        i = self.spec.index(name)
        spent = n * self.spec.weights[i]
        if spent > self.trunc:
            raise TruncationExceeded(
                f"coefficient of {name}^{n} needs truncation >= {spent}, have {self.trunc}"
            )
        return TruncatedSeries(self.poly.coefficient_of(name, n), self.trunc - spent)

    def __repr__(self):
        return f"TruncatedSeries({self.poly.to_text()}; deg<={self.trunc})"


def geometric_inverse(spec, name, trunc):
    """1/(1 - name) truncated; convenience used in expansions and tests."""
    one_minus = MultiPoly.const(spec, 1) - MultiPoly.var(spec, name)
    return TruncatedSeries(one_minus, trunc).inverse()


# -- univariate polynomials ----------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over Q; trailing zeros trimmed.

    The degree of the zero polynomial is None (a sentinel, never -1).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls):
        return cls([])

    @classmethod
    def one(cls):
        return cls([1])

    @classmethod
    def monomial(cls, n, c=1):
        return cls([0] * n + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, n):
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return ZERO

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return UniPoly([other]) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return UniPoly([a * c for a in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly.zero()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = UniPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by t**k."""
        if self.is_zero():
            return self
        return UniPoly([ZERO] * k + list(self.coeffs))

    def evaluate(self, x):
        x = _as_fraction(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def truncate(self, degree):
        return UniPoly(self.coeffs[: degree + 1])

    def is_palindromic(self, top_degree):
        """t**top_degree * P(1/t) == P(t) (Poincare duality oracle)."""
        if self.is_zero():
            return True
        if self.degree > top_degree:
            return False
        return all(self[i] == self[top_degree - i] for i in range(top_degree + 1))

    def to_text(self, var="t"):
        if self.is_zero():
            return "0"
        chunks = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                chunks.append(str(c))
            elif i == 1:
                chunks.append(f"{c}*{var}" if c != 1 else var)
            else:
                chunks.append(f"{c}*{var}^{i}" if c != 1 else f"{var}^{i}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"UniPoly({self.to_text()})"


def exact_div(num: UniPoly, den: UniPoly) -> UniPoly:
    """Long division that must leave no remainder.

    A nonzero remainder signals a transcribed-formula bug or invalid
    parameters, and raises :class:`NotDivisible`.
    """
    if den.is_zero():
        raise AlgebraError("division by the zero polynomial")
    if num.is_zero():
        return UniPoly.zero()
    rem = list(num.coeffs)
    d = den.degree
    lead = den.coeffs[-1]
    if len(rem) - 1 < d:
        raise NotDivisible("degree of numerator below denominator")
    q = [ZERO] * (len(rem) - d)
    for i in range(len(rem) - 1, d - 1, -1):
        c = rem[i]
        if not c:
            continue
        f = c / lead
        q[i - d] = f
        for j, dc in enumerate(den.coeffs):
            rem[i - d + j] -= f * dc
    if any(rem[:d]):
        raise NotDivisible("nonzero remainder")
    return UniPoly(q)


def uni_mul_trunc(a: UniPoly, b: UniPoly, degree: int) -> UniPoly:
    return (a * b).truncate(degree)


def uni_inv_trunc(a: UniPoly, degree: int) -> UniPoly:
    """Inverse of a univariate series with a[0] == 1, truncated."""
    if a[0] != 1:
        raise NotAUnit("univariate series inverse needs constant term 1")
    out = [ONE] + [ZERO] * degree
    for n in range(1, degree + 1):
        acc = ZERO
        for k in range(1, min(n, a.degree or 0) + 1):
            acc += a[k] * out[n - k]
        out[n] = -acc
    return UniPoly(out)


def rational_series(num: UniPoly, den: UniPoly, degree: int) -> UniPoly:
    """Truncated expansion of num/den for den with constant term 1."""
    return uni_mul_trunc(num.truncate(degree), uni_inv_trunc(den, degree), degree)
