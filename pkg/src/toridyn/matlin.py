"""Exact integer/rational dense matrix algebra.

Characteristic polynomials, kernels, Smith normal form with transforms,
lattice saturation, exterior powers, and restriction/quotient along
invariant sublattices.  Everything is Fraction-exact; dimensions in this
artifact stay small (ambient rank <= 8, exterior squares <= 28) so dense
arithmetic is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DomainError, InvarianceViolation
from .exactnum import IntPolynomial

# ---------------------------------------------------------------------------
# Rational matrices


class RationalMatrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(Fraction(e) for e in row) for row in entries)
        if not rows or not rows[0]:
            self.rows, self.cols, self.entries = len(rows), 0, rows
            return
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise DomainError("ragged matrix")
        self.rows, self.cols, self.entries = len(rows), n, rows

    # -- constructors

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(rows: int, cols: int) -> "RationalMatrix":
        return RationalMatrix([[0] * cols for _ in range(rows)])

    @staticmethod
    def from_columns(cols) -> "RationalMatrix":
        return RationalMatrix([[c[i] for c in cols] for i in range(len(cols[0]))])

    @staticmethod
    def diagonal(values) -> "RationalMatrix":
        vs = list(values)
        return RationalMatrix([[vs[i] if i == j else 0 for j in range(len(vs))]
                               for i in range(len(vs))])

    # -- basic structure

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for row in self.entries for e in row)

    def __eq__(self, other):
        return (isinstance(other, RationalMatrix)
                and self.entries == other.entries)

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in row) for row in self.entries)
        return f"RationalMatrix[{body}]"

    # -- arithmetic

    def __add__(self, other):
        self._shape_match(other)
        return RationalMatrix([[a + b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._shape_match(other)
        return RationalMatrix([[a - b for a, b in zip(r1, r2)]
                               for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return RationalMatrix([[-a for a in row] for row in self.entries])

    def _shape_match(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DomainError("matrix shape mismatch")

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise DomainError("matrix shape mismatch in product")
            ot = list(zip(*other.entries)) if other.entries else []
            return RationalMatrix(
                [[sum(a * b for a, b in zip(row, col)) for col in ot]
                 for row in self.entries])
        return RationalMatrix([[a * Fraction(other) for a in row] for row in self.entries])

    __rmul__ = lambda self, other: self * other

    def apply(self, vector):
        if len(vector) != self.cols:
            raise DomainError("vector length mismatch")
        return tuple(sum(a * Fraction(v) for a, v in zip(row, vector))
                     for row in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.entries)) if self.entries else [])

    def __pow__(self, k: int) -> "RationalMatrix":
        if not self.is_square() or k < 0:
            raise DomainError("power requires a square matrix and k >= 0")
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- elimination based operations

    def rref(self):
        """Reduced row echelon form and pivot column indices."""
        mat = [list(row) for row in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot = next((i for i in range(r, self.rows) if mat[i][c] != 0), None)
            if pivot is None:
                continue
            mat[r], mat[pivot] = mat[pivot], mat[r]
            inv = 1 / mat[r][c]
            mat[r] = [x * inv for x in mat[r]]
            for i in range(self.rows):
                if i != r and mat[i][c] != 0:
                    f = mat[i][c]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return RationalMatrix(mat), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the right kernel as a list of rational vectors."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [Fraction(0)] * self.cols
            v[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -red[r, fc]
            basis.append(tuple(v))
        return basis

    def det(self) -> Fraction:
        if not self.is_square():
            raise DomainError("determinant requires a square matrix")
        mat = [list(row) for row in self.entries]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            pivot = next((i for i in range(c, n) if mat[i][c] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != c:
                mat[c], mat[pivot] = mat[pivot], mat[c]
                det = -det
            det *= mat[c][c]
            inv = 1 / mat[c][c]
            for i in range(c + 1, n):
                if mat[i][c] != 0:
                    f = mat[i][c] * inv
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
        return det

    def inverse(self) -> "RationalMatrix":
        if not self.is_square():
            raise DomainError("inverse requires a square matrix")
        n = self.rows
        aug = RationalMatrix([list(self.entries[i]) + [1 if j == i else 0 for j in range(n)]
                              for i in range(n)])
        red, pivots = aug.rref()
        if pivots != list(range(n)):
            raise DomainError("matrix is singular")
        return RationalMatrix([red.row(i)[n:] for i in range(n)])

    def solve_exact(self, rhs: "RationalMatrix") -> "RationalMatrix":
        """X with self * X = rhs; raises if no exact solution exists."""
        if self.rows != rhs.rows:
            raise DomainError("shape mismatch in solve")
        aug = RationalMatrix([list(a) + list(b) for a, b in zip(self.entries, rhs.entries)])
        red, pivots = aug.rref()
        if any(p >= self.cols for p in pivots):
            raise DomainError("inconsistent linear system")
        sol = [[Fraction(0)] * rhs.cols for _ in range(self.cols)]
        for r, pc in enumerate(pivots):
            for j in range(rhs.cols):
                sol[pc][j] = red[r, self.cols + j]
        # verify (the system may be underdetermined; any solution is checked)
        cand = RationalMatrix(sol)
        if self * cand != rhs:
            raise DomainError("inconsistent linear system")
        return cand

    def trace(self) -> Fraction:
        if not self.is_square():
            raise DomainError("trace requires a square matrix")
        return sum(self.entries[i][i] for i in range(self.rows))

    def to_integer(self):
        """Entries as ints; raises when any entry is non-integral."""
        if not self.is_integral():
            raise DomainError("matrix is not integral")
        return [[e.numerator for e in row] for row in self.entries]

    def serialize(self):
        """Row-major rational strings 'p/q'."""
        return [str(e) for row in self.entries for e in row]


def charpoly(a: RationalMatrix):
    """Exact characteristic polynomial det(xI - A) via Faddeev-LeVerrier.

    Returns an IntPolynomial when A is integral, else the ascending tuple
    of Fraction coefficients."""
    if not a.is_square():
        raise DomainError("characteristic polynomial requires a square matrix")
    n = a.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        am = a * m
        c = -am.trace() / k
        coeffs[n - k] = c
        m = am + RationalMatrix.identity(n) * c
    if a.is_integral():
        return IntPolynomial.from_rational_coeffs(coeffs)
    return tuple(coeffs)


def exterior_power(a: RationalMatrix, k: int) -> RationalMatrix:
    """Induced map on the k-th exterior power; basis indexed by lexicographic
    k-subsets of {0..d-1}; entries are k x k minors of A."""
    if not a.is_square():
        raise DomainError("exterior power requires a square matrix")
    d = a.rows
    if not 1 <= k <= d:
        raise DomainError("exterior power index out of range")
    subsets = list(combinations(range(d), k))
    out = []
    for rows in subsets:
        out_row = []
        for cols in subsets:
            minor = RationalMatrix([[a[i, j] for j in cols] for i in rows])
            out_row.append(minor.det())
        out.append(out_row)
    return RationalMatrix(out)


def exterior_basis(d: int, k: int):
    """The lexicographic k-subset basis order used by exterior_power."""
    return list(combinations(range(d), k))


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D diagonal with the
    divisibility chain d_1 | d_2 | ... (trailing zeros allowed)."""

    u: RationalMatrix
    d: RationalMatrix
    v: RationalMatrix

    @property
    def invariant_factors(self):
        n = min(self.d.rows, self.d.cols)
        return [self.d[i, i].numerator for i in range(n)]


def smith_form(a) -> SmithDecomposition:
    """Smith normal form of an integer matrix (lists or RationalMatrix)."""
    if isinstance(a, RationalMatrix):
        mat = a.to_integer()
    else:
        mat = [[int(x) for x in row] for row in a]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        mat[i], mat[j] = mat[j], mat[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in mat:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        mat[dst] = [a + f * b for a, b in zip(mat[dst], mat[src])]
        u[dst] = [a + f * b for a, b in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for r in mat:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    def negate_row(i):
        mat[i] = [-x for x in mat[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # locate a smallest nonzero entry in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if mat[i][j] != 0 and (best is None or abs(mat[i][j]) < abs(mat[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if mat[t][t] < 0:
            negate_row(t)
        # clear the edging; restart if a smaller remainder shows up
        dirty = False
        for i in range(t + 1, rows):
            if mat[i][t] != 0:
                q = mat[i][t] // mat[t][t]
                add_row(i, t, -q)
                if mat[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if mat[t][j] != 0:
                q = mat[t][j] // mat[t][t]
                add_col(j, t, -q)
                if mat[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility d_t | everything below-right
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if mat[i][j] % mat[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1
    d = [[Fraction(mat[i][j]) for j in range(cols)] for i in range(rows)]
    return SmithDecomposition(RationalMatrix(u), RationalMatrix(d), RationalMatrix(v))


# ---------------------------------------------------------------------------
# Sublattices


@dataclass(frozen=True)
class Sublattice:
    """Primitive sublattice of Z^ambient_rank given by an integer basis
    matrix whose columns are a basis (all Smith invariant factors 1)."""

    ambient_rank: int
    basis: RationalMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_rank:
            raise DomainError("sublattice basis has wrong ambient rank")
        if not self.basis.is_integral():
            raise DomainError("sublattice basis must be integral")
        if self.basis.rank() != self.basis.cols:
            raise DomainError("sublattice basis is rank deficient")
        if any(f != 1 for f in smith_form(self.basis).invariant_factors):
            raise DomainError("sublattice basis is not primitive")

    @property
    def rank(self) -> int:
        return self.basis.cols

    def contains_vector(self, vec) -> bool:
        """Integer vector membership in the sublattice."""
        try:
            sol = self.basis.solve_exact(
                RationalMatrix([[Fraction(x)] for x in vec]))
        except DomainError:
            return False
        return sol.is_integral()

    def spans_vector(self, vec) -> bool:
        """Membership of vec in the rational span."""
        aug = RationalMatrix([list(row) + [Fraction(v)]
                              for row, v in zip(self.basis.entries, vec)])
        return aug.rank() == self.basis.cols


def saturate(s) -> Sublattice:
    """Primitive hull: basis of span_Q(S) intersected with Z^d.

    With U S V = D (Smith), the first r columns of U^-1 are a primitive
    basis of the saturation."""
    mat = s if isinstance(s, RationalMatrix) else RationalMatrix(s)
    if mat.rank() != mat.cols or mat.cols == 0:
        raise DomainError("saturation requires full column rank")
    dec = smith_form(mat)
    uinv = dec.u.inverse()
    basis = RationalMatrix([[uinv[i, j] for j in range(mat.cols)]
                            for i in range(mat.rows)])
    return Sublattice(mat.rows, basis)


def completion_basis(w: Sublattice) -> RationalMatrix:
    """Unimodular d x d integer matrix whose first rank(W) columns generate
    the same lattice as W's basis."""
    dec = smith_form(w.basis)
    return dec.u.inverse()


def restrict_and_quotient(a: RationalMatrix, w: Sublattice):
    """Blocks of A in a basis completing W: (A_W, A_Q, change-of-basis B)
    with B^-1 A B = [[A_W, *], [0, A_Q]].  Raises InvarianceViolation with a
    witness column when A does not preserve span(W)."""
    if not a.is_square() or a.rows != w.ambient_rank:
        raise DomainError("matrix/sublattice dimension mismatch")
    for j in range(w.rank):
        img = a.apply(w.basis.column(j))
        if not w.spans_vector(img):
            raise InvarianceViolation(
                f"A * basis column {j} leaves the rational span of W",
                witness=w.basis.column(j))
    b = completion_basis(w)
    conj = b.inverse() * a * b
    r = w.rank
    d = a.rows
    for i in range(r, d):
        for j in range(r):
            if conj[i, j] != 0:
                raise InvarianceViolation("conjugated matrix is not block triangular")
    a_w = RationalMatrix([[conj[i, j] for j in range(r)] for i in range(r)])
    a_q = RationalMatrix([[conj[i, j] for j in range(r, d)] for i in range(r, d)])
    return a_w, a_q, b
