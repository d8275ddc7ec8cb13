"""Exit criteria: every suite at its pinned case count and time budget.

Each test prints one ``[PASS]``/``[FAIL]`` line.  They are collected
into an "acceptance criteria" section of the terminal summary.
"""
import pytest

from hadtowers import towers
from hadtowers.suites import run_suite

# (suite, cases, time budget in seconds)
CRITERIA = [
    ("closure", 500, 10.0),
    ("extension", 500, 10.0),
    ("amalgamation", 200, 20.0),
    ("supports", 200, 30.0),
    ("ordinals", 1000, 5.0),
    ("evaluation", 500, 10.0),
    ("symmetry", 500, 10.0),
]


def _record(lines, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    lines.append(line)
    print(line)


@pytest.mark.parametrize("suite, cases, budget", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(suite, cases, budget, acceptance_lines):
    report = run_suite(suite, cases, seed=0)
    seconds = report.wall_ms / 1000.0
    ok = report.ok and seconds < budget
    detail = f"{cases} cases, {len(report.failures)} failures, {seconds:.2f} s (budget {budget:.0f} s)"
    if report.failures:
        detail += f"; first: seed {report.failures[0][0]}: {report.failures[0][1]}"
    _record(acceptance_lines, suite, ok, detail)
    assert report.ok, f"{len(report.failures)} failures, e.g. {report.failures[:3]}"
    assert seconds < budget


def _flipped_target_of(p, e):
    seqs = towers.tower_part(p).sequents
    full = towers.target(p)
    out = {c for c in towers.coord_set(e) if c in full}
    todo = list(out)
    while todo:
        c = todo.pop()
        if c.level != 0:
            continue
        for child in seqs.get(c, ()):
            if child not in out:
                out.add(child)
                todo.append(child)
    return frozenset(out)


def test_mutation_smoke(monkeypatch, acceptance_lines):
    monkeypatch.setattr(towers, "target_of", _flipped_target_of)
    report = run_suite("closure", 500, seed=0)
    ok = not report.ok
    _record(acceptance_lines, "mutation smoke", ok, f"flipped closure rule produced {len(report.failures)} closure-suite failures")
    assert ok

