"""Acceptance suite: every exit criterion as one test, each printing a
single PASS/FAIL line. Tolerances are exact (integer equalities) except
the eigenvalue comparisons, which carry a 1e-6 margin.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math

import numpy as np
import pytest

from bpcodes import verify as V


def _report(num: int, label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} [{status}] {label}" + (f" :: {detail}" if detail else ""))
    assert ok, f"criterion {num} failed: {label} {detail}"


def test_acceptance_01_toric_golden_family():
    res = V.toric_suite()
    _report(1, "toric family [[2l^2, 2, l]] for l in 2..5", res.ok, "; ".join(res.lines))


def test_acceptance_02_klein_tanner_code():
    res = V.klein_suite()
    _report(2, "Klein-quartic Tanner code [84,12,19]", res.ok, "; ".join(res.lines))


def test_acceptance_03_lps_ramanujan():
    res = V.lps_suite(pairs=((5, 13), (5, 17)))
    _report(3, "LPS graphs connected, regular, second eigenvalue < 2*sqrt(p)", res.ok,
            "; ".join(res.lines))


def test_acceptance_04_quotient_condition():
    res = V.quotient_suite()
    _report(4, "quotient condition exhaustive + determinant argument", res.ok,
            "; ".join(res.lines))


def test_acceptance_05_kunneth_suites():
    a = V.kunneth_suite(trials=200, seed=11)
    b = V.balanced_suite(trials=100, seed=13)
    c = V.pages_suite(trials=100, seed=12)
    ok = a.ok and b.ok and c.ok
    _report(5, "200 tensor + 100 balanced + 100 page Kunneth identities", ok,
            "; ".join(a.lines + b.lines + c.lines))


def test_acceptance_06_triple_equivalence():
    res = V.triple_suite(include_lps=True)
    _report(6, "balanced = bundle = lifted, bit-identical after alignment", res.ok,
            "; ".join(res.lines))


def test_acceptance_07_rate_identity():
    res = V.rate_suite(include_lps=True)
    _report(7, "horizontal homology = base Tanner dimension, rate floor", res.ok,
            "; ".join(res.lines))


def test_acceptance_08_bound_consistency():
    res = V.bounds_suite(samples=100_000, seed=21)
    _report(8, "exact values dominate every formula bound; expansion clean", res.ok,
            "; ".join(res.lines))


def test_acceptance_09_gv_search():
    res = V.gv_suite()
    _report(9, "seeded random code search at s in {20,24,28}, entropy check", res.ok,
            "; ".join(res.lines))


def test_acceptance_10_ldpc_constancy():
    res = V.ldpc_suite()
    _report(10, "stabilizer weight and qubit degree constant across q in {13,17}",
            res.ok, "; ".join(res.lines))
