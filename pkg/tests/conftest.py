import sys

import numpy as np
import pytest


def random_antisymmetric(rng, L, complex_=True, scale=1.0):
    A = rng.normal(size=(L, L))
    if complex_:
        A = A + 1j * rng.normal(size=(L, L))
    return scale * (A - A.T) / 2


def random_bits(rng, L):
    return rng.integers(0, 2, L).astype(np.int8)


def random_signs(rng, L):
    return rng.choice(np.array([-1, 1], dtype=np.int8), L)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, detail = results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
