"""Endomorphisms of complex tori.

Validation, iteration, analytic eigenvalue data over the Gaussian
rationals, the exact unity-free test, fixed subtori, and eigenvalue
multiset splitting along invariant subtori.

Convention: the analytic eigenvalue multiset is attached to the +i
eigenspace of J.  Conjugating the convention conjugates the multiset; all
downstream verdicts are conjugation-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import lcm

from .errors import (DomainError, InvarianceViolation, InvariantViolation,
                     NotHolomorphicError, NotSurjectiveError)
from .exactnum import (GaussianRational, IntPolynomial, cyclotomic_root_count)
from .matlin import RationalMatrix, restrict_and_quotient, saturate
from .torus import ComplexTorus, Subtorus, make_subtorus


@dataclass(frozen=True)
class TorusEndomorphism:
    """f(a) = M a + tau on torus.  M integer and commuting with J; tau
    rational, each component reduced modulo 1."""

    torus: ComplexTorus
    m: RationalMatrix
    tau: tuple

    @property
    def degree_matrix_det(self) -> int:
        return self.m.det().numerator

    @property
    def surjective(self) -> bool:
        return self.m.det() != 0

    @property
    def is_isogeny(self) -> bool:
        return self.surjective and all(t == 0 for t in self.tau)

    def serialize(self):
        return {
            "M": [str(e.numerator) for row in self.m.entries for e in row],
            "tau": [str(t) for t in self.tau],
        }


def make_endo(torus: ComplexTorus, m, tau=None) -> TorusEndomorphism:
    """Validated endomorphism; rejects matrices that do not commute with J."""
    mat = m if isinstance(m, RationalMatrix) else RationalMatrix(m)
    if not mat.is_square() or mat.rows != torus.rank:
        raise DomainError("endomorphism matrix has wrong size")
    if not mat.is_integral():
        raise DomainError("endomorphism matrix must be integral")
    if mat * torus.j != torus.j * mat:
        raise NotHolomorphicError("matrix does not commute with the complex structure")
    if tau is None:
        tau = [0] * torus.rank
    if len(tau) != torus.rank:
        raise DomainError("translation vector has wrong length")
    tau = tuple(Fraction(t) % 1 for t in tau)
    return TorusEndomorphism(torus, mat, tau)


def iterate(f: TorusEndomorphism, k: int) -> TorusEndomorphism:
    """f^k: matrix M^k, translation (M^{k-1} + ... + I) tau mod 1."""
    if k < 1:
        raise DomainError("iteration count must be >= 1")
    mk = f.m ** k
    acc = RationalMatrix.zero(f.torus.rank, f.torus.rank)
    power = RationalMatrix.identity(f.torus.rank)
    for _ in range(k):
        acc = acc + power
        power = power * f.m
    tau = tuple(t % 1 for t in acc.apply(f.tau))
    return TorusEndomorphism(f.torus, mk, tau)


# ---------------------------------------------------------------------------
# Gaussian-rational linear algebra (internal)


def _gauss_matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), GaussianRational())
             for j in range(len(b[0]))] for i in range(len(a))]


def _gauss_identity(n):
    one, zero = GaussianRational.of(1), GaussianRational()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def _gauss_rref(mat):
    mat = [row[:] for row in mat]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = GaussianRational.of(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return mat, pivots


def _gauss_kernel(mat):
    red, pivots = _gauss_rref(mat)
    cols = len(mat[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [GaussianRational() for _ in range(cols)]
        v[fc] = GaussianRational.of(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def _gauss_solve(a, rhs):
    """Any X with a X = rhs over Q(i); raises on inconsistency."""
    rows = len(a)
    cols = len(a[0])
    rcols = len(rhs[0])
    aug = [a[i][:] + rhs[i][:] for i in range(rows)]
    red, pivots = _gauss_rref(aug)
    if any(p >= cols for p in pivots):
        raise DomainError("inconsistent Gaussian linear system")
    sol = [[GaussianRational() for _ in range(rcols)] for _ in range(cols)]
    for r, pc in enumerate(pivots):
        for j in range(rcols):
            sol[pc][j] = red[r][cols + j]
    check = _gauss_matmul(a, sol)
    if any(check[i][j] != rhs[i][j] for i in range(rows) for j in range(rcols)):
        raise DomainError("inconsistent Gaussian linear system")
    return sol


def _gauss_charpoly(a):
    """Faddeev-LeVerrier over Q(i); ascending GaussianRational coefficients."""
    n = len(a)
    coeffs = [GaussianRational() for _ in range(n + 1)]
    coeffs[n] = GaussianRational.of(1)
    m = _gauss_identity(n)
    for k in range(1, n + 1):
        am = _gauss_matmul(a, m)
        tr = sum((am[i][i] for i in range(n)), GaussianRational())
        c = -(tr / k)
        coeffs[n - k] = c
        m = [[am[i][j] + (c if i == j else GaussianRational())
              for j in range(n)] for i in range(n)]
    return tuple(coeffs)


def gauss_poly_mul(p, q):
    out = [GaussianRational() for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return tuple(out)


def gauss_poly_conj(p):
    return tuple(c.conjugate() for c in p)


def _analytic_matrix(m: RationalMatrix, j: RationalMatrix):
    """M restricted to the +i eigenspace of J, as a Gaussian matrix."""
    d = j.rows
    i_unit = GaussianRational(Fraction(0), Fraction(1))
    j_minus_i = [[GaussianRational.of(j[r, c]) - (i_unit if r == c else GaussianRational())
                  for c in range(d)] for r in range(d)]
    kernel = _gauss_kernel(j_minus_i)
    if len(kernel) != d // 2:
        raise InvariantViolation("+i eigenspace has unexpected dimension")
    basis = [[kernel[c][r] for c in range(len(kernel))] for r in range(d)]
    mg = [[GaussianRational.of(m[r, c]) for c in range(d)] for r in range(d)]
    mb = _gauss_matmul(mg, basis)
    return _gauss_solve(basis, mb)


def analytic_charpoly(m: RationalMatrix, j: RationalMatrix):
    """Ascending Gaussian-rational coefficients of the charpoly of the
    analytic representation."""
    if j.rows == 0:
        return (GaussianRational.of(1),)
    return _gauss_charpoly(_analytic_matrix(m, j))


@dataclass(frozen=True)
class EigenData:
    """Exact eigenvalue data: degree-2n charpoly on H^1, the degree-n
    analytic charpoly over Q(i), and the root-of-unity count u on the
    analytic side."""

    h1_charpoly: IntPolynomial
    analytic: tuple  # GaussianRational coefficients, ascending
    u_count: int
    cyclotomic_factors: tuple  # ((n, multiplicity) in h1_charpoly, ...)


@lru_cache(maxsize=512)
def eigen_data(f: TorusEndomorphism) -> EigenData:
    from .matlin import charpoly as _charpoly
    h1 = _charpoly(f.m)
    gamma = analytic_charpoly(f.m, f.torus.j)
    product = gauss_poly_mul(gamma, gauss_poly_conj(gamma))
    for k, c in enumerate(product):
        if c.im != 0 or c.re != Fraction(h1[k]):
            raise InvariantViolation("h1 charpoly is not analytic x conjugate")
    count, factors = cyclotomic_root_count(h1) if h1.degree > 0 else (0, [])
    if count % 2 != 0:
        raise InvariantViolation("root-of-unity count on H^1 must be even")
    return EigenData(h1, gamma, count // 2, tuple(factors))


def unity_free(f: TorusEndomorphism):
    """(verdict, u) with u the number of root-of-unity eigenvalues on the
    analytic representation, counted with multiplicity.  Exact."""
    if not f.surjective:
        raise NotSurjectiveError("unity-free test requires det M != 0")
    data = eigen_data(f)
    return data.u_count == 0, data.u_count


def minimal_unity_iterate(f: TorusEndomorphism, data: EigenData | None = None) -> int | None:
    """lcm of the orders n of cyclotomic factors of the H^1 charpoly, or
    None when there is no root-of-unity eigenvalue."""
    if data is None:
        data = eigen_data(f)
    if not data.cyclotomic_factors:
        return None
    return lcm(*[n for n, _ in data.cyclotomic_factors])


def fixed_subtorus(f: TorusEndomorphism):
    """(k, S) with k the minimal cyclotomic-order lcm and S the saturated
    kernel of M^k - I (a positive-rank subtorus), or None when f is
    unity-free."""
    if not f.surjective:
        raise NotSurjectiveError("fixed subtorus requires det M != 0")
    k = minimal_unity_iterate(f)
    if k is None:
        return None
    mk = f.m ** k
    kernel = (mk - RationalMatrix.identity(f.torus.rank)).kernel_basis()
    if not kernel:
        raise InvariantViolation("cyclotomic factor without fixed directions")
    from .torus import _primitive_integer_vector
    cols = [_primitive_integer_vector(v) for v in kernel]
    sub = make_subtorus(f.torus, RationalMatrix.from_columns(cols))
    return k, sub


def eigen_split(f: TorusEndomorphism, sub: Subtorus):
    """Analytic charpolys (full, restriction, quotient) along an invariant
    subtorus; asserts the exact product identity of the eigenvalue
    multiset splitting."""
    m_w, m_q, _ = restrict_and_quotient(f.m, sub.lattice)  # raises if not invariant
    j_w, j_q, _ = restrict_and_quotient(f.torus.j, sub.lattice)
    gamma = analytic_charpoly(f.m, f.torus.j)
    delta = analytic_charpoly(m_w, j_w)
    quot = analytic_charpoly(m_q, j_q)
    product = gauss_poly_mul(delta, quot)
    if product != gamma:
        raise InvariantViolation("eigenvalue splitting identity failed")
    return gamma, delta, quot
