"""The eight acceptance criteria, each run at its stated wall-clock bound.

Every test prints one ``criterion N: PASS/FAIL`` line (visible with ``-s``);
the conftest hook repeats the verdicts in the terminal summary.
"""

import itertools
import json
import random
import time
from contextlib import contextmanager

from conftest import FIXTURES
from rhp.enumeration import enumerate_R_sigma, enumerate_set, forbidden_breakdown, PermutationK
from rhp.forest import ForestTuple
from rhp.involutions import garsia_milne_forward
from rhp.linalg import (
    SquareMatrix,
    cancellation_check,
    dodgson_muir_sides,
    matrix_tree_check,
    random_integer_matrix,
    symbolic_matrix,
)
from rhp.suites import bijection_suite, involution_suite


@contextmanager
def criterion(num: int, bound: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < bound
        verdict = "PASS" if ok and within else "FAIL"
        print(f"\ncriterion {num}: {verdict} ({elapsed:.2f}s, bound {bound:g}s)")
    assert within, f"criterion {num} took {elapsed:.2f}s, bound {bound}s"


def test_criterion_1_example_matrix():
    with criterion(1, 1.0):
        M = SquareMatrix([[3, 7, 0, 0], [8, 1, 0, 0], [0, 0, 4, 0], [0, 0, 0, 2]])
        sides = dodgson_muir_sides(M, 3)
        terms = {str(s): v for s, v in sides.per_sigma}
        assert sides.lhs == -1696
        assert terms["123"] == 96 and terms["213"] == -1792
        assert all(v == 0 for s, v in terms.items() if s not in ("123", "213"))
        assert sides.rhs == -1696


def test_criterion_2_example_counts():
    with criterion(2, 1.0):
        assert sum(1 for _ in enumerate_set(3, 3, "S0")) == 16
        assert sum(1 for _ in enumerate_set(3, 3, "S3")) == 16
        per = forbidden_breakdown(3, 3)
        assert per == {"132": 3, "213": 3, "231": 1, "312": 1, "321": 3}
        assert sum(per.values()) == 11
        assert len(enumerate_R_sigma(3, 3, PermutationK.identity(3))) == 27


def test_criterion_3_worked_trace():
    with criterion(3, 1.0):
        states = [
            ForestTuple.from_dict(s)
            for s in json.loads((FIXTURES / "worked_example_states.json").read_text())["states"]
        ]
        out, log = garsia_milne_forward(states[0])
        assert log.manifest_json() == (FIXTURES / "worked_example_trace.json").read_text()
        seen = iter(log.changed_snapshots())
        assert all(any(s == x for x in seen) for s in states)
        assert out == states[-1]


def test_criterion_4_bijection():
    with criterion(4, 60.0):
        for n, k in [(3, 2), (3, 3), (4, 2), (4, 3)]:
            report = bijection_suite(n, k)
            assert report.ok, report.to_dict()
            assert report.counts["images"] == report.counts["S0"] == report.counts["S3"]


def test_criterion_5_involutions():
    with criterion(5, 120.0):
        for n, k in [(3, 1), (3, 2), (3, 3), (4, 2)]:
            report = involution_suite(n, k)
            assert report.ok, report.to_dict()


def test_criterion_6_dodgson_muir():
    with criterion(6, 300.0):
        for d in (3, 4):
            M = symbolic_matrix(d)
            for k in range(1, d + 1):
                assert dodgson_muir_sides(M, k).holds
        rng = random.Random(20240601)
        for d in range(1, 8):
            for _ in range(100):
                M = random_integer_matrix(d, rng)
                for k in range(1, d + 1):
                    assert dodgson_muir_sides(M, k).holds


def test_criterion_7_matrix_tree():
    with criterion(7, 60.0):
        for n in range(1, 5):
            for r in range(1, n + 2):
                for roots in itertools.combinations(range(n + 1), r):
                    assert matrix_tree_check(n, roots), (n, roots)


def test_criterion_8_cancellation():
    with criterion(8, 120.0):
        for n, k in [(3, 3), (4, 2), (4, 3)]:
            assert cancellation_check(n, k), (n, k)
