import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from whitney.degree import problem_from_file
from whitney.parser import parse_problem
from whitney.polyring import QQ, Polynomial, VarRing

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def load_problem(name):
    return problem_from_file(parse_problem((PROBLEMS / name).read_text()))


@pytest.fixture
def problems_dir():
    return PROBLEMS


small_q = st.builds(QQ, st.tuples(st.integers(-6, 6), st.integers(1, 4)).map(lambda t: f"{t[0]}/{t[1]}"))


@st.composite
def polynomials(draw, ring: VarRing, max_deg=3, max_terms=5, coeffs=small_q):
    n = len(ring)
    exps = draw(
        st.lists(
            st.tuples(*[st.integers(0, max_deg)] * n).filter(lambda e: sum(e) <= max_deg),
            max_size=max_terms,
        )
    )
    p = ring.zero()
    for e in exps:
        p = p + Polynomial.monomial(ring, e, draw(coeffs))
    return p


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
