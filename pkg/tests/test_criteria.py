from __future__ import annotations

from dataclasses import replace
from fractions import Fraction as Fr
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from ptilde.criteria import (
    CriterionError, MfsCase, argmax_coefficients, is_smooth_along, is_toric, parameters_in_range, run_corpus,
    verify_mfs_case,
)
from ptilde.documents import load_document
from ptilde.rootsystems import kappa, parse_root_system
from ptilde.skeleton import Value, rplus_diff

import _corpus
from _examples import conics_colorless, conics_p5, a1a1t1, a1a1t1_completed

MFS_DIR = Path(__file__).resolve().parent.parent / "src" / "ptilde" / "data" / "mfs"


def _cases():
    return [(p.name, load_document(p).value) for p in sorted(MFS_DIR.glob("*.json"))]


def test_toric_examples():
    assert is_toric(*conics_p5())
    verdict = is_toric(*conics_colorless())
    assert not verdict and verdict.wp == Value(Fr(3))
    assert str(verdict) == "not toric (wp = 3)"
    assert not is_toric(*a1a1t1_completed())


def test_toric_requires_completeness():
    with pytest.raises(CriterionError):
        is_toric(*a1a1t1())


def test_smoothness_examples():
    E, F = conics_p5()
    v = is_smooth_along(E, F, {"X1", "D1"})
    assert v.smooth and v.wp == Value(Fr(0))
    assert str(v) == "smooth (wp_local = 0 < 1)"
    E, F = a1a1t1()
    v = is_smooth_along(E, F, {"X", "D1+", "D1-"})
    assert not v.smooth and v.wp == Value(Fr(1))


def test_orbit_must_be_a_cone():
    E, F = conics_p5()
    with pytest.raises(CriterionError):
        is_smooth_along(E, F, {"D2"})


def test_argmax_formulas():
    assert argmax_coefficients(5, {"n": 2}, 1) == (1,)
    assert argmax_coefficients(5, {"n": 4}, 3) == (6, 3, 1)
    assert argmax_coefficients(8, {"n": 3}, 2) == (4, 1)
    assert argmax_coefficients(1, {"n": 5}, 0) == ()
    assert argmax_coefficients(21, {}, 1) == (1,)
    assert argmax_coefficients(22, {"n": 4}, 1) == (3,)
    assert argmax_coefficients(25, {"n": 6}, 4) == (6, 8, 1, 5)
    assert argmax_coefficients(26, {"n": 5}, 3) == (3, 5, 4)
    with pytest.raises(CriterionError):
        argmax_coefficients(5, {"n": 4}, 2)
    with pytest.raises(CriterionError):
        argmax_coefficients(9, {"n": 4}, 3)


# Item 34 is excluded: its tabulated formula goes negative when n - n1 is small,
# see test_item34_formula_has_negative_coefficients.
@pytest.mark.parametrize("item", [i for i in range(1, 43) if i != 34])
def test_every_formula_evaluates_at_small_parameters(item):
    grid = [{"n": n, "n1": n1, "n2": n2} for n in range(2, 9) for n1 in range(2, 9) for n2 in range(2, 9)]
    valid = [p for p in grid if parameters_in_range(item, p)]
    assert valid
    for params in valid:
        coeffs = argmax_coefficients(item, params, 20)
        assert all(a >= 0 for a in coeffs), params


def test_item34_formula_has_negative_coefficients():
    assert argmax_coefficients(34, {"n": 3, "n1": 2}, 2) == (2, -1)
    assert argmax_coefficients(34, {"n": 6, "n1": 2}, 2) == (5, 2)
    case = MfsCase(item=34, params=(("n", 3), ("n1", 2)), root_system="A2 x A1 x T2", rplus_diff=0,
                   m=(1, 1), lambda_coords=((1, 0), (0, 1)))
    with pytest.raises(CriterionError):
        verify_mfs_case(case)


def test_out_of_range_parameters_are_rejected():
    with pytest.raises(CriterionError):
        argmax_coefficients(27, {"n": 4, "n1": 3}, 12)
    with pytest.raises(CriterionError):
        argmax_coefficients(6, {"n": 6}, 12)


def test_shipped_cases_pass():
    for name, c in _cases():
        r = verify_mfs_case(c)
        assert r.passed, (name, r.line())


def test_shipped_cases_agree_with_root_data():
    for name, c in _cases():
        R = parse_root_system(c.root_system)
        sp = c.sp or ()
        assert rplus_diff(R, sp) == c.rplus_diff, name
        # colors of type b have m = <alpha^vee, kappa>; check those moved by a1
        if c.item in (1, 2, 3):
            assert R.pair("a1", kappa(R, sp)) == c.m[0], name


def test_corrupted_m_list_fails_feasibility():
    c = dict(_cases())["item05_n3.json"]
    bad = replace(c, m=(1, 1, 0))
    r = verify_mfs_case(bad)
    assert not r.argmax_feasible and not r.passed
    report = run_corpus([("good", c), ("bad", bad)])
    assert not report.passed and report.status == "fail"


def test_empty_corpus_reports_no_cases():
    report = run_corpus([])
    assert report.status == "no cases" and not report.passed


def test_malformed_entries_are_listed():
    c = dict(_cases())["item01_n2.json"]
    report = run_corpus([("x.json", ValueError("broken")), ("item01_n2.json", c)])
    assert report.errors == (("x.json", "broken"),)
    assert len(report.reports) == 1


def test_corpus_order_is_deterministic_and_parallel_safe():
    cases = _cases()
    serial = run_corpus(list(reversed(cases)))
    parallel = run_corpus(cases, jobs=2)
    assert serial.lines() == parallel.lines()
    keys = [(r.case.item, r.case.params) for r in serial.reports]
    assert keys == sorted(keys)


def test_dimension_mismatch_and_negative_coefficients():
    with pytest.raises(CriterionError):
        verify_mfs_case(MfsCase(21, (), "A1xT2", 1, (1, 1), ((1, 1, -1),)))
    with pytest.raises(CriterionError):
        verify_mfs_case(MfsCase(21, (), "A1xT2", 1, (1, 1, 1), ((1, 1, -1),), (-1,)))


CORPUS = _corpus.corpus()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(CORPUS))
def test_open_orbit_is_always_smooth(pair):
    E, F = pair
    assert is_smooth_along(E, F, frozenset())


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(CORPUS))
def test_toric_iff_wp_zero(pair):
    v = is_toric(*pair)
    assert isinstance(v.wp, Value)
    assert bool(v) == (v.wp.value == 0)
    assert v.wp.value == 0 or v.wp.value >= 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CORPUS), st.data())
def test_local_wp_is_zero_or_at_least_one(pair, data):
    E, F = pair
    orbit = data.draw(st.sampled_from(F.cones))
    v = is_smooth_along(E, F, orbit)
    assert isinstance(v.wp, Value)
    assert v.wp.value == 0 or v.wp.value >= 1
