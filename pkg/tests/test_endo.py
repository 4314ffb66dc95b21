"""Endomorphisms: validation, iteration, eigenvalue data, unity-freeness,
fixed subtori, eigenvalue splitting."""

from fractions import Fraction

import pytest

from toridyn import (DomainError, GaussianRational, InvarianceViolation,
                     NotHolomorphicError, NotSurjectiveError, analytic_charpoly,
                     charpoly, eigen_data, eigen_split, fixed_subtorus,
                     gauss_poly_conj, gauss_poly_mul, iterate, make_endo,
                     make_subtorus, minimal_unity_iterate, unity_free)
from toridyn.scenarios import get_example

from conftest import frac_matrix


def block_diag(a, b):
    top = [row + [0, 0] for row in a]
    bot = [[0, 0] + row for row in b]
    return top + bot


def test_make_endo_rejects_non_commuting(e_torus):
    with pytest.raises(NotHolomorphicError):
        make_endo(e_torus, [[1, 1], [0, 1]])


def test_make_endo_rejects_non_integral(e_torus):
    with pytest.raises(DomainError):
        make_endo(e_torus, frac_matrix([[Fraction(1, 2), 0], [0, Fraction(1, 2)]]))


def test_make_endo_reduces_translation(e_torus):
    f = make_endo(e_torus, [[2, 0], [0, 2]], tau=[Fraction(3, 2), Fraction(-1, 4)])
    assert f.tau == (Fraction(1, 2), Fraction(3, 4))


def test_degree_is_det(e_torus):
    f = make_endo(e_torus, [[2, 1], [-1, 2]])
    assert f.degree_matrix_det == 5
    assert f.surjective and f.is_isogeny


def test_not_surjective(e_torus):
    f = make_endo(e_torus, [[0, 0], [0, 0]])
    assert not f.surjective
    with pytest.raises(NotSurjectiveError):
        unity_free(f)


# -- iteration

def test_iterate_matrix_power(e_torus):
    f = make_endo(e_torus, [[2, 0], [0, 2]], tau=[Fraction(1, 3), 0])
    f2 = iterate(f, 2)
    assert f2.m == f.m ** 2
    # (M + I) tau mod 1 = (3 * 1/3 mod 1, 0)
    assert f2.tau == (Fraction(0), Fraction(0))


def test_iterate_composition_law(ee_torus):
    f = make_endo(ee_torus, block_diag([[2, 1], [-1, 2]], [[3, 0], [0, 3]]),
                  tau=[Fraction(1, 5), 0, Fraction(2, 7), 0])
    f6 = iterate(f, 6)
    g = iterate(iterate(f, 2), 3)
    assert (f6.m, f6.tau) == (g.m, g.tau)


def test_iterate_requires_positive(e_torus):
    with pytest.raises(DomainError):
        iterate(make_endo(e_torus, [[2, 0], [0, 2]]), 0)


# -- eigenvalue data

def test_h1_is_analytic_times_conjugate(ee_torus):
    f = make_endo(ee_torus, block_diag([[1, 2], [-2, 1]], [[3, 1], [-1, 3]]))
    data = eigen_data(f)
    product = gauss_poly_mul(data.analytic, gauss_poly_conj(data.analytic))
    assert [c.re for c in product] == [Fraction(c) for c in data.h1_charpoly.coeffs]
    assert all(c.im == 0 for c in product)


def test_analytic_charpoly_multiplication_by_i(e_torus):
    # M = J acts analytically as multiplication by a square root of -1
    gamma = analytic_charpoly(e_torus.j, e_torus.j)
    assert len(gamma) == 2
    root = -gamma[0] / gamma[1]
    assert root * root == GaussianRational.of(-1)


def test_unity_free_multiplication_map(e_torus):
    f = make_endo(e_torus, [[2, 0], [0, 2]])
    free, u = unity_free(f)
    assert free and u == 0


def test_unity_count_identity_factor(ee_torus):
    f = make_endo(ee_torus, block_diag([[1, 0], [0, 1]], [[2, 0], [0, 2]]))
    free, u = unity_free(f)
    assert not free and u == 1
    assert minimal_unity_iterate(f) == 1


def test_minimal_unity_iterate_negative_identity(ee_torus):
    f = make_endo(ee_torus, block_diag([[-1, 0], [0, -1]], [[3, 0], [0, 3]]))
    assert minimal_unity_iterate(f) == 2
    assert minimal_unity_iterate(iterate(f, 2)) == 1


def test_minimal_unity_iterate_none_when_free(e_torus):
    assert minimal_unity_iterate(make_endo(e_torus, [[3, 0], [0, 3]])) is None


# -- fixed subtorus

def test_fixed_subtorus_of_partial_identity(ee_torus):
    f = make_endo(ee_torus, block_diag([[1, 0], [0, 1]], [[2, 0], [0, 2]]))
    result = fixed_subtorus(f)
    assert result is not None
    k, sub = result
    assert k == 1 and sub.rank == 2
    assert sub.lattice.contains_vector((1, 0, 0, 0))


def test_fixed_subtorus_none_for_unity_free(e_torus):
    assert fixed_subtorus(make_endo(e_torus, [[2, 0], [0, 2]])) is None


def test_fixed_subtorus_order_four(e_torus):
    # multiplication by i: eigenvalues are primitive 4th roots of unity
    f = make_endo(e_torus, e_torus.j.to_integer())
    k, sub = fixed_subtorus(f)
    assert k == 4 and sub.rank == 2


# -- eigenvalue splitting

def test_eigen_split_shear_example():
    scenario = get_example("shear")
    f = scenario.endo
    from toridyn import RationalMatrix
    cols = scenario.sublattices["first_factor"]
    sub = make_subtorus(f.torus, RationalMatrix.from_columns(cols))
    gamma, delta, quot = eigen_split(f, sub)
    assert gauss_poly_mul(delta, quot) == gamma
    # shear restricts to the identity on the first factor
    assert delta == (GaussianRational.of(-1), GaussianRational.of(1))


def test_eigen_split_non_invariant_raises(ee_torus):
    f = make_endo(ee_torus, [[0, 0, 1, 0], [0, 0, 0, 1],
                             [1, 0, 0, 0], [0, 1, 0, 0]])  # swap factors
    sub = make_subtorus(ee_torus, [[1, 0], [0, 1], [0, 0], [0, 0]])
    with pytest.raises(InvarianceViolation):
        eigen_split(f, sub)


def test_eigen_split_diagonal_product(ee_torus):
    f = make_endo(ee_torus, block_diag([[2, 0], [0, 2]], [[3, 0], [0, 3]]))
    sub = make_subtorus(ee_torus, [[1, 0], [0, 1], [0, 0], [0, 0]])
    gamma, delta, quot = eigen_split(f, sub)
    assert -delta[0] / delta[1] == GaussianRational.of(2)
    assert -quot[0] / quot[1] == GaussianRational.of(3)
