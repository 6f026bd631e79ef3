import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from confmax.fields import VectorField  # noqa: E402
from confmax.poly import Polynomial  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, n, max_degree=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, max_degree), min_size=n, max_size=n))
        if sum(exps) > max_degree:
            continue
        terms[tuple(exps)] = draw(rationals)
    return Polynomial(n, terms)


@st.composite
def fields(draw, n, max_degree=3, max_terms=3):
    return VectorField([draw(polynomials(n, max_degree, max_terms)) for _ in range(n)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
