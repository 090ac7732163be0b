"""Order construction, local data (closed form and brute force), and the
matrix representations."""

import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bianchisurf.hermitian import HermitianCircle, Mat2, SurfaceIndex, pullback_circle
from bianchisurf.ntkernel import factorize
from bianchisurf.quatorder import (
    QuatElement,
    QuaternionAlgebra,
    build_order,
    closure_defect,
    eichler_symbol_bruteforce,
    eichler_symbol_closed,
    integral_form_coefficients,
    lattice_params,
    matrix_rep,
    norm_one_elements,
    nrd_index,
    nrd_index_bruteforce,
    order_coordinates,
    reduced_discriminant,
    rho_prime,
    trace_gram,
)
from bianchisurf.verify import surfaces_under

ALG = QuaternionAlgebra(-3, 12)


def elem(t, x=0, y=0, z=0):
    return QuatElement.of(ALG, t, x, y, z)


def test_quaternion_relations():
    i = elem(0, 1)
    j = elem(0, 0, 1)
    assert i * i == elem(-3)
    assert j * j == elem(12)
    assert i * j == -(j * i)
    ij = i * j
    assert ij == elem(0, 0, 0, 1)


def test_trd_nrd_delta():
    a = elem(2, 1, -1, 3)
    assert a.trd() == 4
    assert a.nrd() == 4 + 3 * 1 - 12 * 1 + (-3) * 12 * 9
    assert a.delta() == a.trd() ** 2 - 4 * a.nrd()
    assert a * a.conjugate() == elem(a.nrd())


@given(*[st.integers(-4, 4) for _ in range(8)])
def test_nrd_multiplicative(t1, x1, y1, z1, t2, x2, y2, z2):
    a = elem(t1, x1, y1, z1)
    b = elem(t2, x2, y2, z2)
    assert (a * b).nrd() == a.nrd() * b.nrd()


def test_build_order_reference():
    order = build_order(pullback_circle(SurfaceIndex(3, 1, -1, 1)))
    p = order.params
    assert (p.alpha1, p.alpha2, p.beta) == (3, 1, 0)
    assert p.d0 == 3
    assert order.D == 12
    assert reduced_discriminant(order) == 4  # = dD/d0^2
    gram = trace_gram(order)
    assert all(gram[i][j] == gram[j][i] for i in range(4) for j in range(4))
    assert closure_defect(order) == []


def test_lattice_index():
    order = build_order(pullback_circle(SurfaceIndex(15, 2, -1, 3)))
    p = order.params
    assert p.alpha1 * p.alpha2 == p.a // p.d0


def test_build_order_rejects_bad_circles():
    with pytest.raises(ValueError):
        build_order(HermitianCircle(3, 1, 0, 1))  # negative determinant
    with pytest.raises(ValueError):
        build_order(HermitianCircle(3, 2, 1, 1))  # even leading coefficient
    with pytest.raises(ValueError):
        build_order(HermitianCircle(3, 3, 3, 3))  # common factor 3


def test_order_closure_small_sweep():
    for d in (3, 7):
        for idx, d0, D in surfaces_under(d, 60):
            order = build_order(pullback_circle(idx))
            assert closure_defect(order) == []
            assert reduced_discriminant(order) == d * D // (d0 * d0)


def test_order_coordinates_roundtrip():
    order = build_order(pullback_circle(SurfaceIndex(3, 1, -1, 1)))
    target = order.basis[1] + order.basis[3].scale(2) - order.basis[0]
    coords = order_coordinates(order, target)
    assert coords == (Fraction(-1), Fraction(1), Fraction(0), Fraction(2))


def test_eichler_symbol_closed_values():
    assert eichler_symbol_closed(3, 12, 3, 2) == -1
    assert eichler_symbol_closed(3, 1, 1, 3) == 1
    assert eichler_symbol_closed(15, 60, 3, 5) == 0


def test_nrd_index_closed_values():
    assert nrd_index(3, 12, 3, 2) == 1
    assert nrd_index(3, 1, 1, 3) == 1
    assert nrd_index(15, 60, 3, 5) == 2


def test_local_data_error_paths():
    with pytest.raises(ValueError):
        eichler_symbol_closed(3, 12, 3, 5)  # 5 does not divide 4
    with pytest.raises(ValueError):
        eichler_symbol_closed(3, 12, 3, 4)  # not prime
    with pytest.raises(ValueError):
        nrd_index(3, 12, 3, 7)
    order = build_order(pullback_circle(SurfaceIndex(3, 1, -1, 1)))
    with pytest.raises(ValueError):
        eichler_symbol_bruteforce(order, 5)
    with pytest.raises(ValueError):
        nrd_index_bruteforce(order, 2)  # odd p only


def test_bruteforce_agrees_with_closed_form_spot():
    for d, m, c in ((3, 1, -1), (3, 0, -1), (7, 3, 1), (15, 2, -1)):
        idx = SurfaceIndex(d, m, c, 1)
        order = build_order(pullback_circle(idx))
        drd = reduced_discriminant(order)
        d0 = order.params.d0
        for p, _ in factorize(drd).factors:
            assert eichler_symbol_bruteforce(order, p) == eichler_symbol_closed(
                d, order.D, d0, p
            )
            if p != 2:
                assert nrd_index_bruteforce(order, p) == nrd_index(d, order.D, d0, p)


def test_integral_form_matches_elements():
    order = build_order(pullback_circle(SurfaceIndex(3, 1, -1, 1)))
    tvec, ndiag, cross = integral_form_coefficients(order)
    ks = (2, -1, 3, 1)
    e = order.basis[0].scale(ks[0])
    for k, b in zip(ks[1:], order.basis[1:]):
        e = e + b.scale(k)
    T = sum(k * t for k, t in zip(ks, tvec))
    Q = sum(ndiag[i] * ks[i] * ks[i] for i in range(4))
    for (i, j), v in cross.items():
        Q += v * ks[i] * ks[j]
    assert e.trd() == T
    assert e.nrd() == Q


def test_matrix_rep_shape_and_homomorphism():
    a = elem(1, 2, -1, 3)
    b = elem(-2, 1, 4, 1)
    ma = matrix_rep(a)
    e00, e01, e10, e11 = ma.entries()
    assert e11 == e00.conjugate()
    assert e10 == e01.conjugate().scale(Fraction(1, ALG.D))
    assert matrix_rep(a) @ matrix_rep(b) == matrix_rep(a * b)
    assert ma.det().re == a.nrd() and ma.det().im == 0


def test_rho_prime_identity_and_multiplicativity():
    order = build_order(pullback_circle(SurfaceIndex(3, 1, -1, 1)))
    one = order.basis[0]
    assert rho_prime(order, one) == Mat2.identity(3)
    e1, e2 = order.basis[1], order.basis[2]
    assert rho_prime(order, e1 * e2) == rho_prime(order, e1) @ rho_prime(order, e2)
    assert rho_prime(order, e1 + e2) == rho_prime(order, e1) + rho_prime(order, e2)


def test_rho_prime_sends_order_into_field_integers():
    for d in (3, 7, 15):
        for idx, d0, D in surfaces_under(d, 60):
            order = build_order(pullback_circle(idx))
            for e in order.basis:
                img = rho_prime(order, e)
                assert all(x.is_field_integer() for x in img.entries())


def test_norm_one_units_stabilize_circle():
    idx = SurfaceIndex(3, 1, -1, 1)
    circle = pullback_circle(idx)
    order = build_order(circle)
    wits = norm_one_elements(order, bound=6, limit=4)
    if not wits:
        warnings.warn("no norm-one witnesses in range; stabilizer check skipped")
        return
    H = circle.matrix()
    for w in wits:
        assert w.nrd() == 1
        m = rho_prime(order, w)
        assert m.conj_transpose() @ H @ m == H
        assert m.det().re == 1 and m.det().im == 0
