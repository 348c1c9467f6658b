"""Acceptance criteria, one test per criterion.

The whole suite runs once per session; each test then asserts its verdict
and wall-clock budget. A one-line PASS/FAIL summary per criterion is printed
at the end of the pytest run (and by ``python tests/test_acceptance.py``).
"""
import time

import pytest

from bgglab.suite import PASS, run_suite

# criterion number -> (check name, description, budget in seconds or None)
CRITERIA = {
    1: ("kernel_closed_form", "kernel dimension and closed-form generators", 10.0),
    2: ("generator_identities", "Xi(e) = 0, He = (-k-2)e, u+e = 0", None),
    3: ("surjectivity", "Xi surjective with recursion witnesses", None),
    4: ("casimir", "Casimir centrality and split spectrum", 20.0),
    5: ("bgg_cut", "cut is a quasi-isomorphism, complement zero on homology", 30.0),
    6: ("duality", "dual vanishing and nondegenerate adjoint pairings", None),
    7: ("sections_injectivity", "section squares and injective dual transitions", None),
    8: ("stabilization", "eigenspace dimensions stabilize in n", None),
    9: ("specialization_oracle", "symbolic ranks agree with numeric ranks", None),
    10: ("weyl_shapes", "A1 orbits, C2 histogram, dot action, coset counts", 5.0),
}
TOTAL_BUDGET = 120.0

RESULTS: dict[int, str] = {}


@pytest.fixture(scope="module")
def suite_run():
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    checks = run_suite(oracle_points=3, seed=0, timer=lambda name, sec: timings.__setitem__(name, sec))
    total = time.perf_counter() - t0
    return {c.name: c for c in checks}, timings, total


def summary_line(number: int, ok: bool, seconds: float) -> str:
    name, what, budget = CRITERIA[number]
    limit = f" (budget {budget:.0f}s)" if budget else ""
    return f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {name:22s} {seconds:6.2f}s{limit}  {what}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, suite_run):
    checks, timings, _ = suite_run
    name, _, budget = CRITERIA[number]
    check = checks[name]
    seconds = timings[name]
    ok = check.status == PASS and (budget is None or seconds < budget)
    RESULTS[number] = summary_line(number, ok, seconds)
    assert check.status == PASS, f"{name}: {check.status}"
    if budget is not None:
        assert seconds < budget, f"{name} took {seconds:.2f}s, budget {budget}s"


def test_total_runtime(suite_run):
    _, _, total = suite_run
    RESULTS[0] = f"{'PASS' if total < TOTAL_BUDGET else 'FAIL'}  full suite wall clock {total:.2f}s (budget {TOTAL_BUDGET:.0f}s)"
    assert total < TOTAL_BUDGET


def test_sections_failure_is_dimensional(suite_run):
    """The injectivity verdict fails for a counting reason, not a computational one."""
    checks, _, _ = suite_run
    data = checks["sections_injectivity"].data
    assert data["squares_commute"]
    for row in data["injectivity"]:
        src, tgt = row["source_homology"][-1], row["target_homology"][-1]
        assert row["injective"][-1] == (src <= tgt)
        assert src > tgt


if __name__ == "__main__":
    checks = {}
    timings: dict[str, float] = {}
    for c in run_suite(timer=lambda name, sec: timings.__setitem__(name, sec)):
        checks[c.name] = c
    for number, (name, _, budget) in sorted(CRITERIA.items()):
        ok = checks[name].status == PASS and (budget is None or timings[name] < budget)
        print(summary_line(number, ok, timings[name]))
