import random

import pytest
from hypothesis import strategies as st, settings

from kmsoergel.laurent import LaurentPoly
from kmsoergel.rootdatum import sl2, sl3, affine_sl2

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def laurent_polys(rank, lo=-4, hi=4, max_terms=5, coeff=6):
    exps = st.tuples(*[st.integers(lo, hi)] * rank)
    return st.dictionaries(exps, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda d: LaurentPoly(d, rank))


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture(scope="session")
def data():
    return {"sl2": sl2(), "sl3": sl3(), "affine": affine_sl2("loop_rotation")}


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and short title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    prev = _ACCEPTANCE.get(n, (text, True))
    if rep.when == "call" or failed:
        _ACCEPTANCE[n] = (text, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        text, ok = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}")
