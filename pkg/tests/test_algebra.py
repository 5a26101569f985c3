import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polynomials
from whitney.algebra import (
    AlgebraMismatch,
    AlgElement,
    NotZeroDimensional,
    TensorElement,
    alg_mul,
    build_algebra,
    project,
    project_tensor,
    tensor_mul,
)
from whitney.groebner import Ideal
from whitney.polyring import QQ, Polynomial, RingMismatch, VarRing

# the quotient from the twisted sphere immersion: basis {1, y3}
T6 = VarRing(["x1", "x2", "x3", "y1", "y2", "y3"])
S6 = Ideal([T6(s) for s in ("x1", "x2", "y1", "y2", "x3 + y3", "y3^2 - 1")], T6)


@pytest.fixture(scope="module")
def sphere_algebra():
    return build_algebra(S6)


def test_sphere_algebra(sphere_algebra):
    A = sphere_algebra
    assert A.d == 2
    assert A.dump()["basis"] == ["1", "y3"]
    y3 = A.project(T6("y3"))
    assert alg_mul(y3, y3) == A.one()
    assert project(T6("y3^2"), A).coords == [1, 0]
    assert A.project(T6.zero()).is_zero()
    assert A.project(T6("x3")).coords == [0, -1]
    for k, e in enumerate(A.basis_polynomials()):
        assert A.project(e) == A.basis_element(k)


def test_small_algebras():
    R = VarRing(["x"])
    A = build_algebra(Ideal([R("x")], R))
    assert A.d == 1 and A.table == [[[1]]]
    B = build_algebra(Ideal([R("x^3")], R))
    assert B.d == 3
    x, x2 = B.project(R("x")), B.project(R("x^2"))
    assert (x * x2).is_zero()
    assert x * x == x2
    with pytest.raises(NotZeroDimensional):
        build_algebra(Ideal([R("x - 1"), R("x")], R))
    P = VarRing(["x", "y"])
    with pytest.raises(NotZeroDimensional):
        build_algebra(Ideal([P("x")], P))


def test_tensor_projection(sphere_algebra):
    A = sphere_algebra
    D = T6.doubled()
    y3, y3p = Polynomial.var(D, "y3"), Polynomial.var(D, "y3#p")
    t = project_tensor(-8 * y3 * y3p - 8, A)
    assert t.coords == [[-8, 0], [0, -8]]
    assert project_tensor(D.zero(), A).is_zero()
    t = A.project_tensor(Polynomial.var(D, "x3") * y3p)
    assert t.coords == [[0, 0], [0, -1]]
    with pytest.raises(RingMismatch):
        A.project_tensor(T6("x1"))


def test_tensor_multiplication(sphere_algebra):
    A = sphere_algebra
    one, y3 = A.one(), A.basis_element(1)
    s = TensorElement.from_pure(one, y3)
    assert tensor_mul(s, s) == A.tensor_one()
    a, b = A.element([2, QQ("1/3")]), A.element([-1, 5])
    c, d = A.element([0, 7]), A.element([QQ("3/2"), 1])
    lhs = TensorElement.from_pure(a, b) * TensorElement.from_pure(c, d)
    assert lhs == TensorElement.from_pure(a * c, b * d)
    assert (s * 3) == TensorElement.from_pure(one * 3, y3)


def test_algebra_mismatch(sphere_algebra):
    R = VarRing(["x"])
    B = build_algebra(Ideal([R("x^2")], R))
    with pytest.raises(AlgebraMismatch):
        alg_mul(sphere_algebra.one(), B.one())
    with pytest.raises(ValueError):
        AlgElement(B, [1])


# --- properties on a random zero-dimensional algebra ---------------------------

P = VarRing(["x", "y"])
PX = Ideal([P("x^3 - 2*x*y + 1"), P("y^2 - x + 1/2")], P)


@pytest.fixture(scope="module")
def alg():
    return build_algebra(PX)


def test_dimension_is_staircase_size(alg):
    assert alg.d == len(PX.standard_monomials()) == 6


@settings(max_examples=200)
@given(st.data())
def test_multiplication_is_associative_and_commutative(alg, data):
    i, j, k = (data.draw(st.integers(0, alg.d - 1)) for _ in range(3))
    a, b, c = (alg.basis_element(t) for t in (i, j, k))
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@settings(max_examples=200)
@given(st.data())
def test_projection_is_a_ring_homomorphism(alg, data):
    f = data.draw(polynomials(P, max_deg=4))
    g = data.draw(polynomials(P, max_deg=4))
    assert alg.project(f * g) == alg.project(f) * alg.project(g)
    assert alg.project(f + g) == alg.project(f) + alg.project(g)
    # NF consistency: the lift of the projection is the normal form
    assert alg.lift(alg.project(f)) == PX.normal_form(f)


@settings(max_examples=200)
@given(st.data())
def test_tensor_projection_is_multiplicative(alg, data):
    D = P.doubled()
    parts = [data.draw(polynomials(P, max_deg=3)) for _ in range(4)]
    f1, g1, f2, g2 = parts
    primed = {"x": "x#p", "y": "y#p"}
    p = f1.embed(D) * g1.rename(primed, D)
    q = f2.embed(D) * g2.rename(primed, D)
    assert alg.project_tensor(p * q) == alg.project_tensor(p) * alg.project_tensor(q)
    assert alg.project_tensor(p) == TensorElement.from_pure(alg.project(f1), alg.project(g1))
