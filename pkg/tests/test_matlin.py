"""Exact linear algebra: matrices, charpoly, exterior powers, Smith
normal form, sublattices."""

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from toridyn import (DomainError, IntPolynomial, InvarianceViolation,
                     RationalMatrix, charpoly, completion_basis,
                     exterior_power, restrict_and_quotient, saturate,
                     smith_form)

from conftest import frac_matrix, random_integer_matrix


def sympy_matrix(a):
    return sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in a.entries])


small_mats = st.integers(0, 10**6)


def _mat(seed, size=3, height=6):
    return random_integer_matrix(random.Random(seed), size, height)


# -- basics

def test_matrix_shape_and_immutability():
    a = frac_matrix([[1, 2], [3, 4]])
    assert (a.rows, a.cols) == (2, 2)
    with pytest.raises(TypeError):
        a.entries[0][0] = 5  # entries stored as tuples


def test_matrix_product_shape_mismatch():
    with pytest.raises(DomainError):
        frac_matrix([[1, 2]]) * frac_matrix([[1, 2]])


@given(small_mats, small_mats)
@settings(max_examples=30, deadline=None)
def test_arithmetic_matches_sympy(s1, s2):
    a, b = _mat(s1), _mat(s2)
    assert sympy_matrix(a * b) == sympy_matrix(a) * sympy_matrix(b)
    assert sympy_matrix(a + b) == sympy_matrix(a) + sympy_matrix(b)
    assert sympy_matrix(a.transpose()) == sympy_matrix(a).T


@given(small_mats)
@settings(max_examples=30, deadline=None)
def test_det_and_rank_match_sympy(seed):
    a = _mat(seed)
    sm = sympy_matrix(a)
    assert a.det() == sympy.Rational(sm.det())
    assert a.rank() == sm.rank()


def test_inverse_and_solve():
    a = frac_matrix([[2, 1], [1, 1]])
    assert a * a.inverse() == RationalMatrix.identity(2)
    x = a.solve_exact(frac_matrix([[1, 0], [0, 1]]))
    assert a * x == RationalMatrix.identity(2)
    with pytest.raises(DomainError):
        frac_matrix([[1, 1], [1, 1]]).inverse()


def test_kernel_basis():
    a = frac_matrix([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    kernel = a.kernel_basis()
    assert len(kernel) == 1
    v = kernel[0]
    assert all(sum(a[i, j] * v[j] for j in range(3)) == 0 for i in range(3))


# -- charpoly

@given(small_mats)
@settings(max_examples=25, deadline=None)
def test_charpoly_matches_sympy(seed):
    a = _mat(seed)
    p = charpoly(a)
    coeffs = [int(c) for c in reversed(sympy_matrix(a).charpoly().all_coeffs())]
    assert p == IntPolynomial(coeffs)


def test_charpoly_rational_matrix_raises_on_non_square():
    with pytest.raises(DomainError):
        charpoly(frac_matrix([[1, 2]]))


# -- exterior powers

def test_exterior_power_determinant_relation():
    a = _mat(7, size=3)
    top = exterior_power(a, 3)
    assert top.rows == 1 and top[0, 0] == a.det()


def test_exterior_power_functorial():
    a, b = _mat(1, size=3, height=3), _mat(2, size=3, height=3)
    assert exterior_power(a * b, 2) == exterior_power(a, 2) * exterior_power(b, 2)


def test_exterior_power_trace_sum_is_char_value():
    # sum_k (-1)^k tr(Lambda^k A) = det(I - A)
    a = _mat(11, size=4, height=4)
    total = 1 + sum((-1) ** k * exterior_power(a, k).trace() for k in range(1, 5))
    assert total == (RationalMatrix.identity(4) - a).det()


# -- Smith normal form

@given(small_mats)
@settings(max_examples=30, deadline=None)
def test_smith_form_decomposition(seed):
    a = _mat(seed)
    dec = smith_form(a)
    assert dec.u * a * dec.v == dec.d
    assert abs(dec.u.det()) == 1 and abs(dec.v.det()) == 1
    factors = [abs(x) for x in dec.invariant_factors if x != 0]
    assert all(factors[i + 1] % factors[i] == 0 for i in range(len(factors) - 1))


def test_smith_invariant_factors_known():
    a = frac_matrix([[2, 0], [0, 4]])
    assert smith_form(a).invariant_factors == [2, 4]
    b = frac_matrix([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert smith_form(b).invariant_factors == [2, 2, 156]


# -- saturation and sublattices

def test_saturate_primitive_hull():
    cols = frac_matrix([[2, 0], [0, 3], [0, 0]])
    lat = saturate(cols)
    assert lat.rank == 2
    assert lat.spans_vector((Fraction(1), Fraction(0), Fraction(0)))
    assert lat.contains_vector((Fraction(1), Fraction(0), Fraction(0)))
    assert not lat.spans_vector((Fraction(0), Fraction(0), Fraction(1)))


def test_saturate_of_multiplied_basis_is_same_lattice():
    rng = random.Random(3)
    base = frac_matrix([[1, 0], [2, 1], [0, 3]])
    doubled = base * 6
    a, b = saturate(base), saturate(doubled)
    for j in range(2):
        assert a.contains_vector(b.basis.column(j))
        assert b.contains_vector(a.basis.column(j))


def test_completion_basis_unimodular():
    lat = saturate(frac_matrix([[1], [2], [3]]))
    full = completion_basis(lat)
    assert abs(full.det()) == 1
    # first column of the completion spans the same rank-1 lattice
    assert lat.contains_vector(full.column(0))


# -- restrict and quotient

def test_restrict_and_quotient_block_structure():
    a = frac_matrix([[2, 1, 0], [0, 3, 0], [0, 5, 4]])
    w = saturate(frac_matrix([[1], [0], [0]]))
    a_w, a_q, basis = restrict_and_quotient(a, w)
    assert a_w.entries == ((Fraction(2),),)
    assert charpoly(a_w) * charpoly(a_q) == charpoly(a)
    assert abs(basis.det()) == 1


def test_restrict_non_invariant_raises_with_witness():
    a = frac_matrix([[0, 1], [1, 0]])
    w = saturate(frac_matrix([[1], [0]]))
    with pytest.raises(InvarianceViolation) as err:
        restrict_and_quotient(a, w)
    assert err.value.witness is not None


def test_serialize_fractions():
    a = RationalMatrix([[Fraction(1, 2), Fraction(-3)]])
    assert a.serialize() == ["1/2", "-3"]
