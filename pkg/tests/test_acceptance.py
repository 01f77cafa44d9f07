"""Acceptance criteria 1-11, each run at its stated tolerance on the default suite configs.

Every criterion prints one PASS/FAIL line (collected again in the pytest terminal
summary).  Run directly with ``python tests/test_acceptance.py`` for the table alone.
"""
import time

import pytest

from parabolic_lab import suites

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

_CACHE = {}


def run_suite(name):
    if name not in _CACHE:
        start = time.perf_counter()
        res = suites.SUITES[name](None, 0, None)
        _CACHE[name] = (res, time.perf_counter() - start)
    return _CACHE[name]


def _select(res, keys):
    if keys is None:
        return dict(res.predicates)
    return {k: v for k, v in res.predicates.items() if any(k.startswith(p) for p in keys)}


# criterion -> (title, suite, predicate prefixes or None for all, runtime budget in seconds)
CRITERIA = {
    1: ("operator identity residual <= 1e-10", "frac-op", ["riesz_identity"], 60),
    2: ("pointwise kernel vs multiplier, c_n drift", "frac-op",
        ["harmonics_within_2pct", "corpus_within_5pct", "cn_drift_below_1pct"], None),
    3: ("BMO axioms and dyadic bracket", "bmo-scan", None, None),
    4: ("equivalence of the half-derivative functionals", "suite-equiv", None, 600),
    5: ("graph extension properties", "extend", None, None),
    6: ("mollifier derivative bounds", "pullback", ["lemmaA"], None),
    7: ("pullback correctness", "pullback", ["identity_bit_equal", "residual_halves", "ellipticity_positive"], None),
    8: ("solver order, maximum principle, causality", "solve", None, None),
    9: ("area function below square function", "functionals", ["area_square"], None),
    10: ("nontangential estimate for the Dirichlet problem", "suite-main", None, 1800),
    11: ("Carleson measure against nontangential maximum", "functionals", ["carleson"], None),
}


def check(number):
    title, suite, keys, budget = CRITERIA[number]
    res, elapsed = run_suite(suite)
    preds = _select(res, keys)
    failed = sorted(k for k, v in preds.items() if not v)
    if budget is not None and elapsed > budget:
        failed.append(f"runtime {elapsed:.0f}s > {budget}s")
    ok = bool(preds) and not failed
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title} [{suite}]"
    if failed:
        line += "  failing: " + ", ".join(failed)
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok, failed


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, failed = check(number)
    assert ok, failed


if __name__ == "__main__":
    results = [check(n)[0] for n in sorted(CRITERIA)]
    raise SystemExit(0 if all(results) else 1)
