import numpy as np
import pytest

from src.checks import CHECKS, get_check, run_checks
from src.checks.base import CaseFailure, Check


def test_registry_names_are_unique():
    names = [c.name for c in CHECKS]
    assert len(names) == len(set(names))
    assert get_check("kasteleyn").name == "kasteleyn"
    with pytest.raises(KeyError):
        get_check("nope")


def test_nonpositive_size_is_vacuous():
    results = run_checks(0, [0, -3], 5)
    assert len(results) == 2 * len(CHECKS)
    assert all(r.ok and r.cases == 0 and r.notes == "vacuous" for r in results)


def test_runs_are_reproducible():
    first = [r.to_dict() for r in run_checks(7, [3], 4, names=["oracle-parity", "smith"])]
    second = [r.to_dict() for r in run_checks(7, [3], 4, names=["smith", "oracle-parity"])]
    assert first == second[::-1]


@pytest.mark.parametrize("name", [c.name for c in CHECKS])
def test_every_check_passes_small_sizes(name):
    (result,) = run_checks(1, [3], 3, names=[name])
    assert result.ok, result.notes
    assert result.passed == 3


def test_sign_fault_is_caught():
    (result,) = run_checks(0, [4], 20, fault="kasteleyn-sign", names=["kasteleyn"])
    assert result.failed > 0
    assert "#" in result.reproducer


class _Flaky(Check):
    name = "flaky"

    def case(self, rng, size, fault=None):
        if rng.random() < 2:
            raise CaseFailure("always", "repro")


def test_first_reproducer_is_kept():
    result = _Flaky().run(np.random.default_rng(0), 2, 3)
    assert (result.cases, result.failed, result.reproducer, result.notes) == (3, 3, "repro", "always")
