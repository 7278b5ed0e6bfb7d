from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quasistar.hcq import gen_commutative, gen_matrix_state

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def faithful_rho(draw, n=None):
    n = draw(st.integers(2, 3)) if n is None else n
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    rho = np.array(raw) / sum(raw)
    rho[-1] = 1.0 - rho[:-1].sum()
    return rho


@st.composite
def matrix_state_specs(draw):
    rho = draw(faithful_rho())
    return gen_matrix_state(len(rho), rho)


@st.composite
def commutative_specs(draw, allow_twist=True):
    """Weights with an optional involutive weight-preserving twist."""
    k = draw(st.integers(1, 4))
    raw = np.array(draw(st.lists(st.floats(0.1, 1.0), min_size=k, max_size=k)))
    perm = np.arange(k)
    if allow_twist and k >= 2 and draw(st.booleans()):
        i, j = sorted(draw(st.lists(st.integers(0, k - 1), min_size=2, max_size=2,
                                    unique=True)))
        perm[[i, j]] = [j, i]
        raw[j] = raw[i]
    total = draw(st.floats(0.2, 1.0))
    w = raw / raw.sum() * total
    return gen_commutative(w, perm.tolist()), perm


@st.composite
def complex_vectors(draw, n):
    re = draw(st.lists(st.floats(-3, 3), min_size=n, max_size=n))
    im = draw(st.lists(st.floats(-3, 3), min_size=n, max_size=n))
    return np.array(re) + 1j * np.array(im)


def random_pd(n, rng):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return A.conj().T @ A + n * np.eye(n)


def random_complex(shape, rng):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance summary: one line per criterion ---------------------------

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    num, title = marker
    prev = _ACCEPTANCE.get(num, (title, "PASS"))[1]
    status = "PASS" if report.passed and prev == "PASS" else "FAIL"
    _ACCEPTANCE[num] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d} [{status}] {title}")
