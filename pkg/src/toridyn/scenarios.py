"""Builders: CM orders and their integer realifications, product tori,
endomorphisms from matrices over an order, the named examples, and seeded
random samples for sweeps.

Every construction here is validated at build time: the realified order
generator satisfies its minimal polynomial exactly, the complex structure
J is rational with J^2 = -I, and the two commute.  For the Gaussian order
the realification is the familiar 2x2 one.  For the Eisenstein order and
for Z[sqrt(-d)] with d not a perfect square no 2x2 rational J commutes
with an integer realification of the generator (the commutant of such a J
is isomorphic to Q(i), which contains neither omega nor sqrt(-d)), so
those orders are realified on a rank-4 lattice via the regular
representation of the CM field extended by i:

  eisenstein    Q(zeta_12) = Q[x]/(x^4 - x^2 + 1), J = C^3, omega = C^4
                (C the companion matrix; zeta_12^3 = i, zeta_12^4 = omega)
  quadratic(-d) basis (1, sqrt(-d), i, i sqrt(-d)) of Q(sqrt(-d), i)

Each rank-4 block is one complex-dimension-2 factor carrying a faithful
integral action of the order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ResourceError
from .matlin import RationalMatrix
from .torus import ComplexTorus, make_torus
from .endo import TorusEndomorphism, make_endo

RANDOM_REJECTION_BUDGET = 500


def _int_matrix(rows):
    return RationalMatrix([[Fraction(x) for x in row] for row in rows])


@dataclass(frozen=True)
class CMOrder:
    """An imaginary quadratic order Z[g] with a fixed integral
    realification: `generator` is the matrix of g, `j_block` the matrix of
    a square root of -1 commuting with it, both acting on one lattice
    block of rank `rank`."""

    tag: str
    generator: RationalMatrix
    j_block: RationalMatrix
    minimal_poly: tuple  # ascending integer coefficients of g's minimal poly

    def __post_init__(self):
        g, j = self.generator, self.j_block
        n = g.rows
        acc = RationalMatrix.zero(n, n)
        power = RationalMatrix.identity(n)
        for c in self.minimal_poly:
            acc = acc + power * c
            power = power * g
        if acc != RationalMatrix.zero(n, n):
            raise DomainError(f"generator violates minimal polynomial ({self.tag})")
        if j * j != RationalMatrix.identity(n) * Fraction(-1):
            raise DomainError(f"j_block^2 != -I ({self.tag})")
        if g * j != j * g:
            raise DomainError(f"order generator does not commute with J ({self.tag})")

    @property
    def rank(self) -> int:
        return self.generator.rows

    def embed(self, a: int, b: int) -> RationalMatrix:
        """Integral matrix of a + b*g."""
        if not (isinstance(a, int) and isinstance(b, int)):
            raise DomainError("order elements have integer coordinates")
        return RationalMatrix.identity(self.rank) * a + self.generator * b


def gaussian_order() -> CMOrder:
    j0 = _int_matrix([[0, -1], [1, 0]])
    return CMOrder("gaussian", j0, j0, (1, 0, 1))


def eisenstein_order() -> CMOrder:
    # companion matrix of x^4 - x^2 + 1, the minimal polynomial of zeta_12
    c = _int_matrix([[0, 0, 0, -1],
                     [1, 0, 0, 0],
                     [0, 1, 0, 1],
                     [0, 0, 1, 0]])
    return CMOrder("eisenstein", c ** 4, c ** 3, (1, 1, 1))


def quadratic_order(d: int) -> CMOrder:
    """Z[sqrt(-d)].  A perfect square d = b^2 lives inside the Gaussian
    realification (sqrt(-d) = b i); otherwise the rank-4 basis
    (1, sqrt(-d), i, i sqrt(-d)) is used."""
    if d < 1:
        raise DomainError("quadratic order requires d >= 1")
    b = math.isqrt(d)
    if b * b == d:
        j0 = _int_matrix([[0, -1], [1, 0]])
        return CMOrder(f"quadratic(-{d})", j0 * b, j0, (d, 0, 1))
    w = _int_matrix([[0, -d, 0, 0],
                     [1, 0, 0, 0],
                     [0, 0, 0, -d],
                     [0, 0, 1, 0]])
    j = _int_matrix([[0, 0, -1, 0],
                     [0, 0, 0, -1],
                     [1, 0, 0, 0],
                     [0, 1, 0, 0]])
    return CMOrder(f"quadratic(-{d})", w, j, (d, 0, 1))


def order_by_name(name: str) -> CMOrder:
    if name == "gaussian":
        return gaussian_order()
    if name == "eisenstein":
        return eisenstein_order()
    if name.startswith("quadratic(") and name.endswith(")"):
        inside = name[len("quadratic("):-1]
        try:
            d = -int(inside)
        except ValueError:
            raise DomainError(f"unknown CM order: {name}") from None
        return quadratic_order(d)
    raise DomainError(f"unknown CM order: {name}")


# ---------------------------------------------------------------------------
# Tori


def elliptic_curve(order: CMOrder) -> ComplexTorus:
    """The basic torus carrying a faithful integral action of the order.
    Complex dimension 1 for the Gaussian realification, 2 for the rank-4
    realifications (see the module docstring)."""
    return make_torus(order.j_block)


def product(tori) -> ComplexTorus:
    tori = list(tori)
    if not tori:
        raise DomainError("product of no tori")
    size = sum(t.rank for t in tori)
    rows = [[Fraction(0)] * size for _ in range(size)]
    offset = 0
    for t in tori:
        for i in range(t.rank):
            for j in range(t.rank):
                rows[offset + i][offset + j] = t.j[i, j]
        offset += t.rank
    return make_torus(RationalMatrix(rows))


def cm_power_torus(order: CMOrder, n: int) -> ComplexTorus:
    if n < 1:
        raise DomainError("need at least one factor")
    return product([elliptic_curve(order)] * n)


# ---------------------------------------------------------------------------
# Endomorphisms from matrices over the order


def cm_matrix_endo(torus: ComplexTorus, order: CMOrder, b, tau=None) -> TorusEndomorphism:
    """Realify an n x n matrix over the order into an endomorphism of the
    n-fold power torus.  Entries are (a, b) integer pairs meaning a + b*g.
    Commutation with J holds by construction and is re-checked by
    make_endo."""
    n = len(b)
    r = order.rank
    if torus.rank != n * r:
        raise DomainError("torus is not the matching power of the order's curve")
    rows = [[Fraction(0)] * (n * r) for _ in range(n * r)]
    for i in range(n):
        if len(b[i]) != n:
            raise DomainError("order-matrix must be square")
        for j in range(n):
            a, bb = b[i][j]
            block = order.embed(a, bb)
            for p in range(r):
                for q in range(r):
                    rows[r * i + p][r * j + q] = block[p, q]
    return make_endo(torus, RationalMatrix(rows), tau)


# ---------------------------------------------------------------------------
# Named examples


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    endo: TorusEndomorphism
    sublattices: dict  # name -> tuple of integer column tuples


def _gaussian_ee():
    return cm_power_torus(gaussian_order(), 2)


def named_examples() -> dict:
    g = gaussian_order()
    ee = _gaussian_ee()
    e = elliptic_curve(g)
    ee_subs = {
        "first_factor": ((1, 0, 0, 0), (0, 1, 0, 0)),
        "second_factor": ((0, 0, 1, 0), (0, 0, 0, 1)),
        "diagonal": ((1, 0, 1, 0), (0, 1, 0, 1)),
    }
    out = {}

    out["mult_2_1"] = Scenario(
        "mult_2_1", "multiplication by 2 on the first factor of E x E",
        cm_matrix_endo(ee, g, [[(2, 0), (0, 0)], [(0, 0), (1, 0)]]),
        ee_subs)
    out["mult_2_3"] = Scenario(
        "mult_2_3", "multiplication by 2 and 3 on the factors of E x E",
        cm_matrix_endo(ee, g, [[(2, 0), (0, 0)], [(0, 0), (3, 0)]]),
        ee_subs)
    out["gtz_diag"] = Scenario(
        "gtz_diag", "multiplication by 1+2i and 2+i on the factors of E x E",
        cm_matrix_endo(ee, g, [[(1, 2), (0, 0)], [(0, 0), (2, 1)]]),
        ee_subs)
    out["shear"] = Scenario(
        "shear", "(a1, a2) -> (a1 + a2, a2) on E x E",
        cm_matrix_endo(ee, g, [[(1, 0), (1, 0)], [(0, 0), (1, 0)]]),
        ee_subs)
    out["salem_surface"] = Scenario(
        "salem_surface", "[[2,1],[1,1]] over the Gaussian order on E x E",
        cm_matrix_endo(ee, g, [[(2, 0), (1, 0)], [(1, 0), (1, 0)]]),
        ee_subs)
    out["mult_by_i"] = Scenario(
        "mult_by_i", "multiplication by i on E (finite order 4)",
        cm_matrix_endo(e, g, [[(0, 1)]]),
        {})
    e4 = cm_power_torus(g, 4)
    companion = [
        [(0, 0), (0, 0), (0, 0), (-1, 0)],
        [(1, 0), (0, 0), (0, 0), (3, 0)],
        [(0, 0), (1, 0), (0, 0), (4, 0)],
        [(0, 0), (0, 0), (1, 0), (3, 0)],
    ]
    out["e4_auto"] = Scenario(
        "e4_auto", "automorphism of E^4 with Salem characteristic polynomial",
        cm_matrix_endo(e4, g, companion),
        {})
    return out


def get_example(name: str) -> Scenario:
    examples = named_examples()
    if name not in examples:
        raise DomainError(
            f"unknown example {name!r}; known: {', '.join(sorted(examples))}")
    return examples[name]


# ---------------------------------------------------------------------------
# Random sampling


def random_endo(n: int, order: CMOrder, h: int, seed: int) -> TorusEndomorphism:
    """Seeded random n x n matrix over the order with coefficient height
    <= h, rejecting det = 0.  Sampling over the order (rather than over
    arbitrary integer matrices commuting with J) guarantees holomorphy."""
    if not 1 <= n <= 4:
        raise DomainError("random_endo supports 1 <= n <= 4")
    if h < 1:
        raise DomainError("height bound must be >= 1")
    rng = random.Random(f"{order.tag}/{n}/{h}/{seed}")
    torus = cm_power_torus(order, n)
    for _ in range(RANDOM_REJECTION_BUDGET):
        b = [[(rng.randint(-h, h), rng.randint(-h, h)) for _ in range(n)]
             for _ in range(n)]
        f = cm_matrix_endo(torus, order, b)
        if f.surjective:
            return f
    raise ResourceError("random_endo rejection budget exceeded")
