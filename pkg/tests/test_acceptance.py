"""Acceptance suite: one test per criterion, each printing its pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; the same checks back the ``semitall-rank selftest`` subcommand.
"""

import numpy as np
import pytest

from semitall import acceptance, tensorcore


def _run(index):
    results = acceptance.run_acceptance(indices={index})
    assert len(results) == 1
    r = results[0]
    print(r.line())
    assert r.passed, r.detail
    return r


def test_criterion_01_alpha_oracle_equivalence():
    _run(1)


def test_criterion_02_alpha_case_list():
    _run(2)


def test_criterion_03_classifier_case_list():
    _run(3)


def test_criterion_04_rank_condition_equivalence():
    _run(4)


def test_criterion_05_chart_round_trips():
    _run(5)


def test_criterion_06_start_systems():
    _run(6)


def test_criterion_07_homotopy_real_count_stability():
    _run(7)


def test_criterion_08_certifier_negative_control():
    _run(8)


def test_criterion_09_certifier_positive_control():
    _run(9)


def test_criterion_10_plurality_evidence():
    _run(10)


class TestHarness:
    def test_runs_all_by_default(self):
        names = [name for (_, name, _, _) in acceptance.CRITERIA]
        assert len(names) == 10
        assert len(set(names)) == 10

    def test_corrupted_base_tensor_breaks_start_residuals(self, monkeypatch):
        # mutation sanity: flipping one sign in the base tensor must surface
        # in the start-system residual check
        original = tensorcore.make_base_tensor

        def corrupted(m, n):
            T = original(m, n)
            data = T.data.copy()
            data[0, n - 1, m - 1] = +1.0
            return tensorcore.Tensor3(data)

        monkeypatch.setattr(tensorcore, "make_base_tensor", corrupted)
        passed, detail = acceptance.criterion_6_start_systems()
        assert not passed

    def test_loose_tolerance_degrades_and_names_the_criterion(self):
        results = acceptance.run_acceptance(indices={8}, span_tol=1e-1)
        assert len(results) == 1
        # with span_tol = 0.1 the span collapses, so dim U stays tiny and the
        # negative control still passes; the positive control is the one that
        # breaks, reporting which criterion it is
        results = acceptance.run_acceptance(indices={9}, span_tol=1e-1)
        r = results[0]
        assert r.index == 9
        assert not r.passed

    def test_format_results_summary_line(self):
        rs = [
            acceptance.CheckResult(1, "a", True, "", 0.0, 1.0),
            acceptance.CheckResult(2, "b", False, "", 0.0, 1.0),
        ]
        text = acceptance.format_results(rs)
        assert text.endswith("1/2 criteria passed")
