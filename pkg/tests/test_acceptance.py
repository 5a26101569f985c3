"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
terminal summary) or as a script, ``python tests/test_acceptance.py``.
"""
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import load_problem  # noqa: E402
from whitney import budget  # noqa: E402
from whitney.degree import (  # noqa: E402
    DegreeProblem,
    build_H,
    check_assumptions,
    degree_mod2,
    degree_sum,
    intersection_number,
)
from whitney.forms import Functional, build_form  # noqa: E402
from whitney.groebner import Ideal  # noqa: E402
from whitney.oracle import numeric_degree_sum  # noqa: E402
from whitney.polyring import QQ  # noqa: E402

RESULTS: dict[int, str] = {}
TESTS = Path(__file__).resolve().parent


@contextmanager
def criterion(n, title, limit):
    """Record one PASS/FAIL line for criterion ``n``; ``limit`` is the time budget in seconds."""
    start = time.perf_counter()
    try:
        with budget.time_budget(limit):
            yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        RESULTS[n] = f"criterion {n}: FAIL  {title} ({elapsed:.1f}s) -- {type(exc).__name__}: {exc}"
        print(RESULTS[n])
        raise
    elapsed = time.perf_counter() - start
    if elapsed > limit:
        RESULTS[n] = f"criterion {n}: FAIL  {title} ({elapsed:.1f}s > {limit}s)"
        print(RESULTS[n])
        pytest.fail(RESULTS[n])
    RESULTS[n] = f"criterion {n}: PASS  {title} ({elapsed:.1f}s)"
    print(RESULTS[n])


def test_criterion_1_twisted_two_sphere():
    with criterion(1, "S^2(1), g=(x1,x2,x1x3,x2x3): dim 2, T, phi_T, Phi_T, sig -2, I=-1", 5):
        p = load_problem("s2_twisted.imm")
        rep = intersection_number(p)
        T = build_H(p).ring
        S = rep.artifacts["A"].ideal
        expected = Ideal([T(s) for s in ("x1", "x2", "y1", "y2", "x3 + y3", "y3^2 - 1")], T)
        assert S.equals(expected)
        assert rep.dim_A == 2
        assert rep.artifacts["T"].coords == [[-8, 0], [0, -8]]
        assert rep.artifacts["phi_T_weights"] == [QQ("-1/8"), 0]
        assert rep.artifacts["phi_T"].matrix == [[QQ("-1/8"), 0], [0, QQ("-1/8")]]
        assert rep.signature_phi_T == -2
        assert rep.intersection_number == -1


def test_criterion_2_twisted_three_sphere():
    with criterion(2, "S^3(1), phi(a)=a2, u=x3-y3: Phi, Psi, mod-2 bit 1", 5):
        p = load_problem("s3_twisted.imm")
        dp = build_H(p)
        pre = check_assumptions(dp)
        assert pre.dim == 2
        phi = Functional(pre.A, [0, 1])
        u = dp.ring("x3 - y3")
        assert build_form(pre.A, phi).matrix == [[0, 1], [1, 0]]
        assert build_form(pre.A, phi, u).matrix == [[-2, 0], [0, -2]]
        assert degree_mod2(dp.with_u(u), phi, pre) == 1


def immersion_case(name, dim, value, u=None):
    p = load_problem(name)
    if u is not None:
        u = build_H(p).ring(u)
    rep = intersection_number(p, u=u)
    assert rep.dim_A == dim, f"dim {rep.dim_A} != {dim}"
    assert rep.intersection_number == value, f"I = {rep.intersection_number} != {value}"


def test_criterion_3_radius_ten_quadratic():
    with criterion(3, "S^2(10) quadratic map: dim 16, I=0", 600):
        immersion_case("s2_r10_quadratic.imm", 16, 0)


def test_criterion_4_mixed_two_radii():
    with criterion(4, "S^2(1) and S^2(10) mixed map: dim 6, I=0 and I=1", 1200):
        immersion_case("s2_r1_mixed.imm", 6, 0)
        immersion_case("s2_r10_mixed.imm", 6, 1)


@pytest.mark.slow
def test_criterion_5_dense_map():
    with criterion(5, "S^2(1) dense map: dim 20, I=1", 1800):
        immersion_case("s2_dense.imm", 20, 1)


@pytest.mark.slow
def test_criterion_6_four_sphere():
    with criterion(6, "S^4(1) and S^4(10), m=4: dim 10, I=0 and I=-1", 3600):
        immersion_case("s4_r1.imm", 10, 0)
        immersion_case("s4_r10.imm", 10, -1)


@pytest.mark.slow
def test_criterion_7_three_sphere_given_u():
    with criterion(7, "S^3(1), u=3(x1-y1)+5(x2-y2)-2(x4-y4): dim 18, I = 1 mod 2", 1800):
        immersion_case("s3_sparse.imm", 18, 1, u="3*(x1-y1)+5*(x2-y2)-2*(x4-y4)")


PROPERTY_SUITE = [
    "test_polyring.py::test_telescoping_identity",
    "test_groebner.py::test_s_polynomials_reduce_to_zero",
    "test_groebner.py::test_quotient_laws",
    "test_groebner.py::test_dimension_is_order_independent",
    "test_bezoutian.py::test_signature_is_order_independent",
    "test_forms.py::test_signature_basis_change_invariance",
    "test_degree.py::test_even_m_signature_parity",
    "test_degree.py::test_odd_m_u_independence",
]


@pytest.mark.slow
def test_criterion_8_property_suite():
    with criterion(8, "property suite (telescoping, S-pairs, quotient laws, orders, parity, u-independence)", 1800):
        proc = subprocess.run(
            [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_SUITE],
            cwd=TESTS, capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0, proc.stdout[-2000:]


def test_criterion_9_oracle_equivalence():
    from test_oracle import CFG, regular_cases

    with criterion(9, "oracle = degree_sum on 50 random regular systems; S^2(1): 2 zeros, sum -2", 600):
        for k, (H, nreal) in enumerate(regular_cases(50)):
            dp = DegreeProblem(H, [])
            rep = numeric_degree_sum(dp, CFG, seed=k)
            assert rep.regular, f"system {k}: irregular zero"
            assert rep.sum == degree_sum(dp), f"system {k}: oracle {rep.sum}"
        rep = numeric_degree_sum(build_H(load_problem("s2_twisted.imm")))
        assert len(rep.zeros) == 2 and rep.sum == -2


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
