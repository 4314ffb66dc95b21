"""Exact scalars and univariate polynomials.

Integer polynomials with exact arithmetic, Gaussian rationals, cyclotomic
factor extraction, Kronecker/Salem classification, and certified rational
enclosures of root magnitudes.  Root-of-unity detection never consults
floating point; the numeric work for magnitudes is delegated to sympy's
certified complex root isolation and postprocessed into rational bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import sympy as _sp

from .errors import DomainError

_X = _sp.Symbol("x")

#: Default certification width for root magnitudes.
DEFAULT_PRECISION = Fraction(1, 10**9)


# ---------------------------------------------------------------------------
# Integer polynomials


class IntPolynomial:
    """Dense univariate polynomial, coefficients ascending from the constant
    term.  Immutable.  Arithmetic is exact; division happens over Q and is
    only accepted when the result warrants it (divmod returns rational
    coefficient polynomials as Fraction tuples internally)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- structure

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    # -- arithmetic

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial([self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial([self[i] - other[i] for i in range(n)])

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def divmod_exact(self, other: "IntPolynomial"):
        """Quotient and remainder over Q, returned as coefficient tuples of
        Fractions (ascending)."""
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        rem = [Fraction(c) for c in self.coeffs]
        quo = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 1)
        d = other.degree
        lead = Fraction(other.coeffs[-1])
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            q = rem[-1] / lead
            quo[k] = q
            for i in range(d + 1):
                rem[k + i] -= q * other.coeffs[i]
            rem.pop()
        return tuple(quo), tuple(rem)

    def try_divide(self, other: "IntPolynomial"):
        """Exact quotient as an IntPolynomial, or None when the division
        leaves a remainder or a non-integer coefficient."""
        quo, rem = self.divmod_exact(other)
        if any(rem):
            return None
        if any(q.denominator != 1 for q in quo):
            return None
        return IntPolynomial([int(q) for q in quo])

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPolynomial":
        c = self.content()
        if c == 0:
            return self
        sign = -1 if self.coeffs[-1] < 0 else 1
        return IntPolynomial([x // (sign * c) for x in self.coeffs])

    def gcd(self, other: "IntPolynomial") -> "IntPolynomial":
        """Primitive gcd over Q (normalised with positive leading
        coefficient)."""
        a, b = self.primitive(), other.primitive()
        while not b.is_zero():
            # pseudo-remainder keeps everything integral
            _, rem = (a * b.coeffs[-1] ** (max(a.degree - b.degree, 0) + 1)).divmod_exact(b)
            r = IntPolynomial([int(c) for c in rem])
            a, b = b, r.primitive()
        return a.primitive()

    def reversal(self) -> "IntPolynomial":
        """x^deg * p(1/x)."""
        return IntPolynomial(list(reversed(self.coeffs)))

    def is_reciprocal(self) -> bool:
        """p equals +/- its reversal."""
        rev = self.reversal()
        return self == rev or self == -rev

    def squarefree_decomposition(self):
        """Yun's algorithm on the primitive part: list of (factor, mult)."""
        p = self.primitive()
        if p.degree < 1:
            return []
        out = []
        dp = p.derivative()
        a = p.gcd(dp)
        b = p.try_divide(a)
        c = dp.try_divide(a)
        i = 1
        while b.degree >= 1:
            d = c - b.derivative()
            g = b.gcd(d)
            if g.degree >= 1:
                out.append((g, i))
            b2 = b.try_divide(g)
            c = d.try_divide(g)
            b = b2
            i += 1
        return out

    def to_sympy(self):
        return _sp.Poly(list(reversed(self.coeffs)), _X, domain="ZZ")

    @staticmethod
    def from_rational_coeffs(coeffs) -> "IntPolynomial":
        """Accepts Fractions that must all be integral."""
        out = []
        for c in coeffs:
            f = Fraction(c)
            if f.denominator != 1:
                raise DomainError(f"non-integer coefficient {f}")
            out.append(f.numerator)
        return IntPolynomial(out)

    def serialize(self):
        """Ascending coefficient list as decimal strings."""
        return [str(c) for c in self.coeffs]


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussianRational:
    """Element of Q(i) with exact field arithmetic."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value), Fraction(0))

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.of(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(other.re / n, -other.im / n)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"


ZERO_GAUSS = GaussianRational()
ONE_GAUSS = GaussianRational(Fraction(1), Fraction(0))
I_GAUSS = GaussianRational(Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# Certified magnitudes


@dataclass(frozen=True)
class MagnitudeEntry:
    lower: Fraction
    upper: Fraction
    multiplicity: int

    def is_exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class CertifiedMagnitudeMultiset:
    """Certified rational enclosures of the magnitudes of all roots of a
    polynomial, with exact multiplicities."""

    entries: tuple
    precision: Fraction

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def sorted_descending(self):
        """Entries expanded to one item per root, sorted by interval
        midpoint descending.  Safe for top-k products because equal true
        values yield equal products regardless of which entry is picked."""
        expanded = []
        for e in self.entries:
            expanded.extend([e] * e.multiplicity)
        expanded.sort(key=lambda e: e.lower + e.upper, reverse=True)
        return expanded


# ---------------------------------------------------------------------------
# Cyclotomic machinery


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial, monic of degree phi(n)."""
    if n < 1:
        raise DomainError("cyclotomic index must be >= 1")
    # x^n - 1 divided by the cyclotomics of the proper divisors
    p = IntPolynomial([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            p = p.try_divide(cyclotomic_poly(d))
    return p


def _euler_phi(n: int) -> int:
    result = n
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _cyclotomic_indices(max_degree: int):
    """All n with phi(n) <= max_degree; phi(n) >= sqrt(n/2) bounds the
    search."""
    bound = 2 * max_degree * max_degree + 2
    return [n for n in range(1, bound + 1) if _euler_phi(n) <= max_degree]


def cyclotomic_root_count(p: IntPolynomial):
    """Number of roots of p (with multiplicity) that are roots of unity,
    together with the list of (n, multiplicity) cyclotomic factors."""
    if p.is_zero():
        raise DomainError("zero polynomial has no root-of-unity count")
    remaining = p.primitive()
    count = 0
    factors = []
    for n in _cyclotomic_indices(p.degree):
        phi_n = cyclotomic_poly(n)
        if phi_n.degree > remaining.degree:
            continue
        mult = 0
        while True:
            quo = remaining.try_divide(phi_n)
            if quo is None:
                break
            remaining = quo
            mult += 1
        if mult:
            count += mult * phi_n.degree
            factors.append((n, mult))
    return count, factors


def is_kronecker(p: IntPolynomial) -> bool:
    """True iff every root of p lies on the unit circle; decided exactly as
    p being a product of cyclotomic polynomials."""
    if not p.is_monic():
        raise DomainError("Kronecker test requires a monic polynomial")
    count, _ = cyclotomic_root_count(p)
    return count == p.degree


# ---------------------------------------------------------------------------
# Unit-circle root counting (exact, for roots that need not be cyclotomic)


def _strip_root(p: IntPolynomial, r: int):
    """Divide out (x - r) while it divides; return (quotient, multiplicity)."""
    lin = IntPolynomial([-r, 1])
    mult = 0
    while p.degree >= 1 and p(r) == 0:
        p = p.try_divide(lin)
        mult += 1
    return p, mult


def _trace_polynomial(p: IntPolynomial) -> IntPolynomial:
    """For palindromic p of even degree 2m, the unique t of degree m with
    p(x) = x^m * t(x + 1/x)."""
    m = p.degree // 2
    # basis polys b_k(y) with x^k + x^-k = b_k(x + 1/x)
    basis = [IntPolynomial([2]), IntPolynomial([0, 1])]
    for k in range(2, m + 1):
        basis.append(IntPolynomial([0, 1]) * basis[k - 1] - basis[k - 2])
    t = IntPolynomial([p[m]])
    for k in range(1, m + 1):
        t = t + p[m + k] * basis[k]
    return t


def _sturm_count(p: IntPolynomial, lo, hi) -> int:
    """Number of real roots of squarefree p in the closed interval
    [lo, hi] (exact Sturm via sympy)."""
    return p.to_sympy().count_roots(_sp.Rational(lo), _sp.Rational(hi))


def unit_circle_root_count(p: IntPolynomial) -> int:
    """Exact count (with multiplicity) of roots of p on the unit circle.

    Unit-circle roots of a real polynomial are closed under z -> 1/z, so
    they live in gcd(p, reversal(p)); after stripping x = +/-1 the rest is
    palindromic of even degree and reduces to counting real roots of the
    trace polynomial in (-2, 2)."""
    if p.is_zero():
        raise DomainError("zero polynomial")
    total = 0
    for factor, mult in p.squarefree_decomposition():
        if factor.degree < 1:
            continue
        r = factor.gcd(factor.reversal())
        r, m1 = _strip_root(r, 1)
        r, m2 = _strip_root(r, -1)
        circle = m1 + m2
        if r.degree >= 2:
            t = _trace_polynomial(r)
            circle += 2 * _sturm_count(t, -2, 2)
        total += circle * mult
    return total


# ---------------------------------------------------------------------------
# Certified root magnitudes


def _rational_sqrt_bounds(lo2: Fraction, hi2: Fraction, width: Fraction):
    """Rational l, u with l <= sqrt(lo2) and u >= sqrt(hi2); the slack from
    integer square roots stays below width, so the caller controls the final
    interval width through lo2/hi2."""
    scale = max(2 * (width.denominator // max(width.numerator, 1)) + 2, 4)
    l_num = isqrt((lo2.numerator * scale * scale) // lo2.denominator) if lo2 > 0 else 0
    lo = Fraction(l_num, scale)
    u_num = isqrt((hi2.numerator * scale * scale) // hi2.denominator) + 1
    hi = Fraction(u_num, scale)
    return lo, hi


def _box_magnitude_bounds(re: Fraction, im: Fraction, dx: Fraction, dy: Fraction):
    """Bounds on |z|^2 for z in the box [re +/- dx] x [im +/- dy]."""

    def sq_bounds(center, rad):
        a, b = center - rad, center + rad
        if a <= 0 <= b:
            lo = Fraction(0)
        else:
            lo = min(a * a, b * b)
        return lo, max(a * a, b * b)

    rl, rh = sq_bounds(re, dx)
    il, ih = sq_bounds(im, dy)
    return rl + il, rh + ih


def _sympy_rational(v) -> Fraction:
    return Fraction(int(_sp.numer(v)), int(_sp.denom(v)))


def _interval_sq_bounds(a: Fraction, b: Fraction):
    """Bounds of t^2 for t in [a, b]."""
    if a <= 0 <= b:
        lo = Fraction(0)
    else:
        lo = min(a * a, b * b)
    return lo, max(a * a, b * b)


def _exact_sqrt(m2: Fraction):
    """sqrt(m2) when it is rational, else None."""
    if m2 < 0:
        return None
    num, den = isqrt(m2.numerator), isqrt(m2.denominator)
    if num * num == m2.numerator and den * den == m2.denominator:
        return Fraction(num, den)
    return None


def _quadratic_magnitudes(p: IntPolynomial, precision: Fraction):
    """Magnitude entries for an irreducible integer quadratic, by formula.

    Complex pair: |root|^2 = c/a exactly.  Real pair: enclose sqrt(disc)
    tightly; the roots are irrational so neither magnitude equals 1 and
    the intervals refine until 1 is excluded."""
    c, b, a = p.coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        m2 = Fraction(c, a)
        exact = _exact_sqrt(m2)
        if exact is not None:
            return [MagnitudeEntry(exact, exact, 2)]
        width = precision
        while True:
            lo, hi = _rational_sqrt_bounds(m2, m2, width)
            if not lo <= 1 <= hi:
                return [MagnitudeEntry(lo, hi, 2)]
            width /= 2**8
    entries = []
    width = precision / 8
    while True:
        s_lo, s_hi = _rational_sqrt_bounds(Fraction(disc), Fraction(disc), width)
        done = []
        for sign in (-1, 1):
            ends = sorted(((-b + sign * s) / (2 * a) for s in (s_lo, s_hi)))
            lo = Fraction(0) if ends[0] <= 0 <= ends[1] else min(abs(ends[0]), abs(ends[1]))
            hi = max(abs(ends[0]), abs(ends[1]))
            if lo <= 1 <= hi or hi - lo > precision:
                break
            done.append(MagnitudeEntry(lo, hi, 1))
        else:
            return entries + done
        width /= 2**8


def _crootof_magnitudes(p: IntPolynomial, precision: Fraction):
    """Magnitude entries for an irreducible integer polynomial of degree
    >= 3 via certified CRootOf boxes; roots exactly on the unit circle are
    detected by the exact count and reported as the point interval
    [1, 1]."""
    on_circle = unit_circle_root_count(p)
    spoly = p.to_sympy()
    roots = [_sp.CRootOf(spoly, i) for i in range(p.degree)]
    tol = Fraction(1, 2**24)
    while True:
        boxed = []
        for r in roots:
            approx = r.eval_rational(_sp.Rational(tol), _sp.Rational(tol))
            re = _sympy_rational(_sp.re(approx))
            im = _sympy_rational(_sp.im(approx))
            lo2, hi2 = _box_magnitude_bounds(re, im, tol, tol)
            boxed.append(_rational_sqrt_bounds(lo2, hi2, precision))
        holds_one = sum(1 for lo, hi in boxed if lo <= 1 <= hi)
        widths_ok = all(hi - lo <= precision for lo, hi in boxed
                        if not (lo <= 1 <= hi))
        if holds_one == on_circle and widths_ok:
            return [MagnitudeEntry(Fraction(1), Fraction(1), 1)
                    if lo <= 1 <= hi else MagnitudeEntry(lo, hi, 1)
                    for lo, hi in boxed]
        if tol < Fraction(1, 2**4000):  # pragma: no cover - safety valve
            raise DomainError("root magnitude refinement failed to converge")
        tol = tol / 2**16


def _magnitude_intervals(factor: IntPolynomial, precision: Fraction):
    """Certified |root| intervals for a squarefree integer polynomial with
    nonzero constant term.

    The polynomial is factored over Q first: linear factors give exact
    rational magnitudes, quadratics are handled by formula (CRootOf
    auto-evaluates them into radical expressions, so they need a direct
    path anyway), and higher-degree irreducible factors go through
    certified CRootOf refinement."""
    entries = []
    _, factors = factor.to_sympy().factor_list()
    for fac, _mult in factors:
        q = IntPolynomial([int(c) for c in reversed(fac.all_coeffs())])
        if q.degree == 1:
            mag = abs(Fraction(q[0], q[1]))
            entries.append(MagnitudeEntry(mag, mag, 1))
        elif q.degree == 2:
            entries.extend(_quadratic_magnitudes(q, precision))
        else:
            entries.extend(_crootof_magnitudes(q, precision))
    return entries


def gaussian_sqrt_exact(w: GaussianRational):
    """sqrt of a Gaussian rational when it exists in Q(i), else None."""
    if w.is_zero():
        return GaussianRational()
    t = _exact_sqrt(w.re * w.re + w.im * w.im)
    if t is None:
        return None
    a = _exact_sqrt((t + w.re) / 2)
    if a is None:
        return None
    if a == 0:
        b = _exact_sqrt(-w.re)
        if b is None:
            return None
        root = GaussianRational(Fraction(0), b)
    else:
        root = GaussianRational(a, w.im / (2 * a))
    return root if root * root == w else None


def _gaussian_sqrt_box(w: GaussianRational, width: Fraction):
    """Rational box around the principal sqrt of a non-square w, or None
    when the requested width cannot separate the real part from zero yet
    (the caller then refines)."""
    u, v = w.re, w.im
    if v == 0:
        if u > 0:
            lo, hi = _rational_sqrt_bounds(u, u, width)
            return (lo, hi), (Fraction(0), Fraction(0))
        lo, hi = _rational_sqrt_bounds(-u, -u, width)
        return (Fraction(0), Fraction(0)), (lo, hi)
    t_lo, t_hi = _rational_sqrt_bounds(u * u + v * v, u * u + v * v, width)
    a2_lo, a2_hi = max(Fraction(0), (t_lo + u) / 2), (t_hi + u) / 2
    a_lo, a_hi = _rational_sqrt_bounds(a2_lo, a2_hi, width)
    if a_lo <= 0:
        return None
    # 2ab = v pins the imaginary part once a is enclosed away from zero
    ends = sorted((v / (2 * a_lo), v / (2 * a_hi)))
    return (a_lo, a_hi), (ends[0], ends[1])


def _box_abs_entry(x_int, y_int, precision: Fraction):
    lo2_x, hi2_x = _interval_sq_bounds(*x_int)
    lo2_y, hi2_y = _interval_sq_bounds(*y_int)
    return _rational_sqrt_bounds(lo2_x + lo2_y, hi2_x + hi2_y, precision)


def _gauss_value_entry(w: GaussianRational, precision: Fraction, multiplicity: int):
    """Magnitude entry for an exact Gaussian rational."""
    m2 = w.re * w.re + w.im * w.im
    exact = _exact_sqrt(m2)
    if exact is not None:
        return MagnitudeEntry(exact, exact, multiplicity)
    width = precision
    while True:
        lo, hi = _rational_sqrt_bounds(m2, m2, width)
        if not lo <= 1 <= hi:
            return MagnitudeEntry(lo, hi, multiplicity)
        width /= 2**8


def gaussian_root_magnitudes(coeffs, h1: IntPolynomial,
                             precision=DEFAULT_PRECISION) -> CertifiedMagnitudeMultiset:
    """Certified root magnitudes of H^1 computed from the analytic
    charpoly (degree <= 2 over Q(i)), each analytic magnitude counted
    twice.  This avoids complex root isolation entirely: quadratics are
    solved by formula with certified rational square-root enclosures, and
    the exact unit-circle count of h1 decides which enclosures snap to the
    point [1, 1]."""
    return _gaussian_root_magnitudes_cached(
        tuple(GaussianRational.of(c) for c in coeffs), h1, Fraction(precision))


@lru_cache(maxsize=1024)
def _gaussian_root_magnitudes_cached(coeffs, h1, precision) -> CertifiedMagnitudeMultiset:
    degree = len(coeffs) - 1
    if degree > 2:
        raise DomainError("gaussian_root_magnitudes handles degree <= 2")
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs[:-1]]
    entries = []
    if degree == 1:
        entries.append(_gauss_value_entry(-monic[0], precision, 2))
        return CertifiedMagnitudeMultiset(tuple(entries), precision)
    if degree == 2:
        c0, c1 = monic
        disc = c1 * c1 - GaussianRational.of(4) * c0
        half = GaussianRational(Fraction(1, 2))
        exact_root = gaussian_sqrt_exact(disc)
        if exact_root is not None:
            for sign in (1, -1):
                r = (-c1 + GaussianRational.of(sign) * exact_root) * half
                entries.append(_gauss_value_entry(r, precision, 2))
            return CertifiedMagnitudeMultiset(tuple(entries), precision)
        circle_target = sum(
            m * unit_circle_root_count(f)
            for f, m in h1.squarefree_decomposition() if f.degree >= 1) // 2
        width = precision / 8
        while True:
            box = _gaussian_sqrt_box(disc, width)
            if box is not None:
                (ax_lo, ax_hi), (ay_lo, ay_hi) = box
                boxed = []
                for sign in (1, -1):
                    sx = sorted((sign * ax_lo, sign * ax_hi))
                    sy = sorted((sign * ay_lo, sign * ay_hi))
                    x_int = ((-c1.re + sx[0]) / 2, (-c1.re + sx[1]) / 2)
                    y_int = ((-c1.im + sy[0]) / 2, (-c1.im + sy[1]) / 2)
                    boxed.append(_box_abs_entry(x_int, y_int, precision))
                holds_one = sum(1 for lo, hi in boxed if lo <= 1 <= hi)
                widths_ok = all(hi - lo <= precision for lo, hi in boxed
                                if not (lo <= 1 <= hi))
                if holds_one == circle_target and widths_ok:
                    for lo, hi in boxed:
                        if lo <= 1 <= hi:
                            entries.append(MagnitudeEntry(Fraction(1), Fraction(1), 2))
                        else:
                            entries.append(MagnitudeEntry(lo, hi, 2))
                    return CertifiedMagnitudeMultiset(tuple(entries), precision)
            if width < Fraction(1, 2**4000):  # pragma: no cover - safety valve
                raise DomainError("gaussian magnitude refinement failed to converge")
            width /= 2**8
    return CertifiedMagnitudeMultiset((), precision)


def root_magnitudes(p: IntPolynomial, precision=DEFAULT_PRECISION) -> CertifiedMagnitudeMultiset:
    """Certified enclosures of all root magnitudes of p with exact
    multiplicities; each interval has width <= precision.  Cached: the
    classification layer asks for the same charpoly repeatedly."""
    return _root_magnitudes_cached(p, Fraction(precision))


@lru_cache(maxsize=1024)
def _root_magnitudes_cached(p: IntPolynomial, precision: Fraction) -> CertifiedMagnitudeMultiset:
    if p.is_zero():
        raise DomainError("zero polynomial has no roots to enclose")
    if precision <= 0:
        raise DomainError("precision must be positive")
    entries = []
    # roots at zero
    k = 0
    while p[k] == 0 and k <= p.degree:
        k += 1
    if k:
        entries.append(MagnitudeEntry(Fraction(0), Fraction(0), k))
        p = IntPolynomial(p.coeffs[k:])
    for factor, mult in p.squarefree_decomposition():
        if factor.degree < 1:
            continue
        # exact magnitude 1 for the cyclotomic part without any numerics
        remaining = factor
        cyc_degree = 0
        for n in _cyclotomic_indices(factor.degree):
            phi_n = cyclotomic_poly(n)
            if phi_n.degree > remaining.degree:
                continue
            quo = remaining.try_divide(phi_n)
            if quo is not None:
                remaining = quo
                cyc_degree += phi_n.degree
        if cyc_degree:
            entries.append(MagnitudeEntry(Fraction(1), Fraction(1), cyc_degree * mult))
        if remaining.degree >= 1:
            for e in _magnitude_intervals(remaining, precision):
                entries.append(MagnitudeEntry(e.lower, e.upper, e.multiplicity * mult))
    # merge identical intervals
    merged = {}
    for e in entries:
        key = (e.lower, e.upper)
        merged[key] = merged.get(key, 0) + e.multiplicity
    out = tuple(MagnitudeEntry(lo, hi, m) for (lo, hi), m in sorted(merged.items()))
    return CertifiedMagnitudeMultiset(out, precision)


# ---------------------------------------------------------------------------
# Polynomial classification


def polynomial_class(p: IntPolynomial) -> str:
    """One of 'cyclotomic-product', 'salem', 'off-circle-reciprocal',
    'other'.

    Salem here requires at least one unit-circle conjugate pair, so a
    degree-2 reciprocal polynomial with real roots is off-circle-reciprocal.
    """
    if p.is_zero() or p[0] == 0:
        raise DomainError("classification requires a nonzero constant term")
    if not p.is_monic():
        raise DomainError("classification requires a monic polynomial")
    if is_kronecker(p):
        return "cyclotomic-product"
    reciprocal = p.is_reciprocal()
    circle = unit_circle_root_count(p)
    if reciprocal:
        # multiplicity-aware real root counts off the circle
        above_one = 0
        in_unit = 0
        for factor, mult in p.squarefree_decomposition():
            if factor.degree < 1:
                continue
            above_one += mult * _count_real_roots_above(factor, Fraction(1))
            in_unit += mult * _count_real_roots_between(factor, Fraction(0), Fraction(1))
        if (above_one == 1 and in_unit == 1 and circle == p.degree - 2
                and circle >= 2):
            return "salem"
        if circle == 0:
            return "off-circle-reciprocal"
    return "other"


def _cauchy_bound(p: IntPolynomial) -> int:
    lead = abs(p.coeffs[-1])
    return 1 + max(abs(c) for c in p.coeffs) // lead + 1


def _count_real_roots_above(p: IntPolynomial, threshold: Fraction) -> int:
    """Real roots of squarefree p strictly above threshold."""
    lin = IntPolynomial([-threshold.numerator, threshold.denominator])
    if p(threshold) == 0:
        p = p.try_divide(lin) or p
    return _sturm_count(p, threshold, _cauchy_bound(p))


def _count_real_roots_between(p: IntPolynomial, lo: Fraction, hi: Fraction) -> int:
    """Real roots in the open interval (lo, hi) of squarefree p."""
    count = _sturm_count(p, lo, hi)
    if p(lo) == 0:
        count -= 1
    if p(hi) == 0:
        count -= 1
    return count
