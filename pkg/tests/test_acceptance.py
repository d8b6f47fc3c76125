"""The twelve acceptance criteria at full scale, exact arithmetic throughout.

Run directly (``python tests/test_acceptance.py``) for one PASS/FAIL line per
criterion; under pytest each criterion is its own test and the lines are
repeated in the terminal summary.
"""

import sys

import pytest

from pvalab.selftest import CRITERIA, run_all

RESULTS: list = []


def _line(i, name, rep):
    return f"[{'PASS' if rep['ok'] else 'FAIL'}] criterion {i:2d} {name} ({rep['seconds']}s): {rep['detail']}"


@pytest.mark.parametrize("index", range(1, len(CRITERIA) + 1), ids=[c[0].replace(" ", "_") for c in CRITERIA])
def test_criterion(index):
    (i, name, rep), = run_all(seed=0, trials=25, only={index})
    line = _line(i, name, rep)
    RESULTS.append(line)
    print(line)
    assert rep["ok"], line


if __name__ == "__main__":
    res = run_all(seed=0, trials=25)
    for i, name, rep in res:
        print(_line(i, name, rep))
    sys.exit(0 if all(r["ok"] for _, _, r in res) else 1)
