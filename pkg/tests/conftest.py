import sys

import numpy as np
import pytest

from wronski.bethe import MasterProblem, sample_generic_z


@pytest.fixture
def generic_problem():
    """Factory: MasterProblem with z sampled generically from a fixed seed."""

    def make(d, m, seed=0):
        z = sample_generic_z(len(m), np.random.default_rng(seed))
        return MasterProblem(z, tuple(m), d)

    return make


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
