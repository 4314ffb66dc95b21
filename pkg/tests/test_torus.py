"""Complex tori, subtori, quotients, Neron-Severi spaces, ample classes."""

from fractions import Fraction

import pytest

from toridyn import (ComplexStructureError, DomainError, NotSubtorusError,
                     RationalMatrix, canonical_ample_class, charpoly, is_ample,
                     make_subtorus, make_torus, neron_severi, ns_vector_to_form,
                     form_to_ns_vector, quotient_torus)

from conftest import J2, J4, frac_matrix


def test_make_torus_validates():
    with pytest.raises(ComplexStructureError):
        make_torus([[1, 0], [0, 1]])
    with pytest.raises(DomainError):
        make_torus([[0, 1, 0], [-1, 0, 0], [0, 0, 1]])  # odd size
    with pytest.raises(DomainError):
        make_torus([[0, 1, 0], [-1, 0, 0]])  # non-square


def test_torus_rank_and_dim(e_torus, ee_torus):
    assert (e_torus.n, e_torus.rank) == (1, 2)
    assert (ee_torus.n, ee_torus.rank) == (2, 4)


def test_nontrivial_complex_structure():
    # J in GL_2(Q) with nonzero trace-free off-diagonal mix
    t = make_torus([[1, -2], [1, -1]])
    assert t.n == 1
    assert charpoly(t.j).coeffs == (1, 0, 1)


# -- subtori

def test_make_subtorus_diagonal(ee_torus):
    sub = make_subtorus(ee_torus, [[1, 0], [0, 1], [1, 0], [0, 1]])
    assert sub.rank == 2 and sub.complex_dim == 1


def test_make_subtorus_rejects_odd_rank(ee_torus):
    with pytest.raises(NotSubtorusError):
        make_subtorus(ee_torus, [[1], [0], [0], [0]])


def test_make_subtorus_rejects_non_invariant():
    # product with mixed structure: span(e1, e3) is not J-invariant
    t = make_torus([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    with pytest.raises(NotSubtorusError):
        make_subtorus(t, [[1, 0], [0, 0], [0, 1], [0, 0]])


def test_make_subtorus_saturates(ee_torus):
    sub = make_subtorus(ee_torus, [[2, 0], [0, 2], [0, 0], [0, 0]])
    assert sub.lattice.contains_vector((1, 0, 0, 0))


def test_quotient_torus_factor(ee_torus):
    sub = make_subtorus(ee_torus, [[1, 0], [0, 1], [0, 0], [0, 0]])
    q, proj = quotient_torus(ee_torus, sub)
    assert q.n == 1
    assert q.j * q.j == -RationalMatrix.identity(2)
    assert proj.rows == 2 and proj.cols == 4


def test_quotient_by_everything_is_degenerate(e_torus):
    sub = make_subtorus(e_torus, [[1, 0], [0, 1]])
    q, _ = quotient_torus(e_torus, sub)
    assert q.is_degenerate()


# -- Neron-Severi

def test_ns_rank_elliptic(e_torus):
    assert neron_severi(e_torus).rho == 1


def test_ns_rank_square_of_cm_curve(ee_torus):
    # E_i x E_i has Picard number 4
    assert neron_severi(ee_torus).rho == 4


def test_ns_rank_product_of_rational_structure_curves():
    # any 1-dim torus with rational J has End^0 = Q(J) = Q(i), so the two
    # factors are isogenous and the product still has Picard number 4
    t = make_torus([[0, 1, 0, 0], [-1, 0, 0, 0],
                    [0, 0, 1, -2], [0, 0, 1, -1]])
    assert neron_severi(t).rho == 4


def test_ns_vector_form_round_trip(ee_torus):
    ns = neron_severi(ee_torus)
    for k in range(ns.rho):
        vec = ns.basis.column(k)
        e = ns_vector_to_form(ee_torus, vec)
        assert e.transpose() == -e
        # invariance E(Jx, Jy) = E(x, y)
        assert ee_torus.j.transpose() * e * ee_torus.j == e
        assert form_to_ns_vector(ee_torus, e) == tuple(vec)


def test_ns_contains_and_coordinates(ee_torus):
    ns = neron_severi(ee_torus)
    vec = tuple(2 * x for x in ns.basis.column(0))
    assert ns.contains(vec)
    coords = ns.coordinates(vec)
    assert ns.from_coordinates(coords) == tuple(Fraction(x) for x in vec)


# -- ample classes

def test_canonical_ample_class_is_ample(e_torus, ee_torus):
    for t in (e_torus, ee_torus):
        omega = canonical_ample_class(t)
        assert is_ample(t, omega)
        assert all(x == int(x) for x in omega)


def test_negative_of_ample_is_not_ample(ee_torus):
    omega = canonical_ample_class(ee_torus)
    assert not is_ample(ee_torus, tuple(-x for x in omega))


def test_is_ample_rejects_non_ns_vector(ee_torus):
    ns = neron_severi(ee_torus)
    # perturb off the NS subspace (wedge dim 6, NS rank 4)
    outside = None
    for k in range(6):
        cand = tuple(1 if i == k else 0 for i in range(6))
        if not ns.contains(cand):
            outside = cand
            break
    assert outside is not None
    with pytest.raises(DomainError):
        is_ample(ee_torus, outside)


def test_canonical_ample_nontrivial_structure():
    t = make_torus([[1, -2], [1, -1]])
    assert is_ample(t, canonical_ample_class(t))
