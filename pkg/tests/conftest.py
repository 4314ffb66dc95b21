import random
from fractions import Fraction

import pytest

from toridyn import (RationalMatrix, cm_matrix_endo, cm_power_torus,
                     gaussian_order, make_endo, make_torus)


def frac_matrix(rows):
    return RationalMatrix([[Fraction(x) for x in row] for row in rows])


J2 = [[0, -1], [1, 0]]
J4 = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]


@pytest.fixture(scope="session")
def e_torus():
    return make_torus(frac_matrix(J2))


@pytest.fixture(scope="session")
def ee_torus():
    return make_torus(frac_matrix(J4))


@pytest.fixture(scope="session")
def gaussian():
    return gaussian_order()


def diag_endo(torus, values, tau=None):
    """Diagonal integer endomorphism [a1] x ... on a product of Gaussian
    curves: each value v becomes the 2x2 block v*I."""
    entries = []
    for v in values:
        entries.extend([v, v])
    return make_endo(torus, RationalMatrix.diagonal([Fraction(v) for v in entries]), tau)


def random_integer_matrix(rng: random.Random, size: int, height: int) -> RationalMatrix:
    return frac_matrix([[rng.randint(-height, height) for _ in range(size)]
                        for _ in range(size)])
