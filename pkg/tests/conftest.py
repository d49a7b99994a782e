import os
import sys
from fractions import Fraction
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, elements=small_ints):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[Fraction(draw(elements)) for _ in range(c)] for _ in range(r)]


@st.composite
def tensors(draw, max_dim=3, max_nnz=8, dims=None):
    from omegalab.tensor import Tensor3

    if dims is None:
        dims = tuple(draw(st.integers(1, max_dim)) for _ in range(3))
    keys = st.tuples(*(st.integers(0, d - 1) for d in dims))
    entries = draw(st.dictionaries(keys, small_ints.filter(bool), max_size=max_nnz))
    return Tensor3(dims, entries)


# acceptance reporting: one line per criterion in the terminal summary
import pytest  # noqa: E402

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    key, text = mark.args
    ok = rep.passed and not hasattr(rep, "wasxfail")
    prev = _CRITERIA.get(key)
    _CRITERIA[key] = (text, ok if prev is None else prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int("".join(c for c in k if c.isdigit())), k)):
        text, ok = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
