"""Acceptance suite: one test per criterion, all comparisons exact.

Run with ``pytest tests/test_acceptance.py -v`` for one PASS/FAIL line each.
Seeds are fixed so every run draws the same cases.
"""

import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from horidgca.dsl import DslError, elaborate, parse_document, render_document
from horidgca.laurent import GradedHori, xi_derivative
from horidgca.sampling import random_laurent
from horidgca.tduality import build_gerbe_tower, universal_config
from horidgca.verify import (
    check_adjunction,
    check_jacobi,
    check_koszul,
    check_nu,
    check_nu_hat,
    check_q_square,
    check_towers,
    check_transported,
    expected_nu_hat_display,
    nu_failures,
)

SEED = 1729
CORPUS = Path(__file__).parent / "corpus"

KOSZUL_CASES = 10_000
KOSZUL_SECONDS = 10.0
RANDOM_CONFIGS = 50
ADJUNCTION_CASES = 100
LAURENT_CASES = 500
LAURENT_SPAN = 8
Q_LOW, Q_HIGH = -5, 20
JACOBI_CASES = 100


def rng_for(tag: str) -> random.Random:
    return random.Random(f"{SEED}:{tag}")


def assert_report(report):
    assert report.passed, f"{report} detail={report.detail}"


@pytest.fixture(scope="module")
def hori():
    return GradedHori(build_gerbe_tower(universal_config()))


@pytest.fixture(scope="module")
def laurent_sets(hori):
    rng = rng_for("laurent")
    left = [random_laurent(hori.hat_G_L, rng, span=LAURENT_SPAN) for _ in range(LAURENT_CASES)]
    right = [random_laurent(hori.hat_G_R, rng, span=LAURENT_SPAN) for _ in range(LAURENT_CASES)]
    return left, right


def test_criterion_01_koszul_kernel():
    start = time.perf_counter()
    report = check_koszul(rng_for("koszul"), KOSZUL_CASES)
    elapsed = time.perf_counter() - start
    assert_report(report)
    assert report.detail == f"{KOSZUL_CASES} cases"
    assert elapsed < KOSZUL_SECONDS, f"{elapsed:.2f}s"


def test_criterion_02_tower_d_squared_and_leibniz():
    assert_report(check_towers(rng_for("towers"), RANDOM_CONFIGS))


def test_criterion_03_hofib_cyc_round_trips():
    assert_report(check_adjunction(rng_for("adjunction"), ADJUNCTION_CASES))


def test_criterion_04_gerbe_isomorphism():
    assert nu_failures(build_gerbe_tower(universal_config())) == []
    assert_report(check_nu(rng_for("nu"), RANDOM_CONFIGS))


def test_criterion_05_nu_hat_well_defined(hori):
    src, tgt = hori.hat_GL_ext, hori.hat_GR_ext
    w = src.xi_power(-1)
    want = expected_nu_hat_display(hori)
    assert hori.hat_nu(src.d(w)) == want
    assert tgt.d(hori.hat_nu(w)) == want
    assert str(want) == "(x2R*e1L - y3)*xi2R^-2 + (2*y3*e1L*e1R)*xi2R^-3"
    assert_report(check_nu_hat(rng_for("nu_hat")))


def test_criterion_06_matrix_identity(hori, laurent_sets):
    left, right = laurent_sets
    assert len(left) >= LAURENT_CASES
    for w in left:
        assert all(abs(n) <= LAURENT_SPAN for n in w.support())
        got = hori.hori_LR(w)
        assert got == hori.hori_LR_closed(w), str(w)
        assert got.shift == w.shift - 1
    for w in right:
        assert hori.hori_RL(w) == hori.hori_RL_closed(w), str(w)


def test_criterion_07_composition_identities(hori, laurent_sets):
    left, right = laurent_sets
    for w in left:
        got = hori.hori_RL(hori.hori_LR(w))
        assert got == xi_derivative(w), str(w)
        assert got.shift == w.shift - 2
    for w in right:
        got = hori.hori_LR(hori.hori_RL(w))
        assert got == xi_derivative(w), str(w)
        assert got.shift == w.shift - 2


def test_criterion_08_q_series_square_and_transport():
    assert_report(check_q_square(rng_for("q_square"), cases=10, low=Q_LOW, high=Q_HIGH))
    assert_report(check_transported(rng_for("transport"), cases=20, low=Q_LOW, high=Q_HIGH))


def test_criterion_09_jacobi_bookkeeping():
    assert_report(check_jacobi(rng_for("jacobi"), JACOBI_CASES, low=Q_LOW, high=Q_HIGH))


def test_criterion_10_dsl_corpus_and_check():
    valid = sorted((CORPUS / "valid").glob("*.dgca"))
    invalid = sorted((CORPUS / "invalid").glob("*.dgca"))
    assert len(valid) >= 12 and len(invalid) >= 8
    for path in valid:
        doc = parse_document(path.read_text())
        elaborate(doc)
        assert parse_document(render_document(doc)) == doc, path.name
    for path in invalid:
        text = path.read_text()
        with pytest.raises(DslError) as info:
            elaborate(parse_document(text))
        assert info.value.diagnostics, path.name
        for d in info.value.diagnostics:
            assert d.span is not None and d.span.line >= 1 and d.span.col >= 1, path.name
    cmd = [sys.executable, "-m", "horidgca.cli", str(CORPUS / "valid" / "universal.dgca"), "check", "--json"]
    first = subprocess.run(cmd, capture_output=True, text=True)
    second = subprocess.run(cmd, capture_output=True, text=True)
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["schema"] == 1
