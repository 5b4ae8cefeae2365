"""The property checks must notice broken operations, not just pass."""

import random

from horidgca import verify
from horidgca.laurent import LaurentElement
from horidgca.qseries import QSeries


def test_suite_is_seed_deterministic():
    counts = {"koszul": 200, "configs": 2, "adjunction": 5, "laurent": 10, "qseries": 1, "jacobi": 5}
    a = verify.run_suite(seed=11, truncation=5, counts=counts)
    b = verify.run_suite(seed=11, truncation=5, counts=counts)
    assert [r.to_dict() for r in a.reports] == [r.to_dict() for r in b.reports]
    assert a.passed


def test_flipped_oracle_is_caught(monkeypatch):
    sig = verify.mixed_signature()
    honest = verify.koszul_oracle(sig, ["b1", "a1"])
    assert honest == -(sig.gen("a1") * sig.gen("b1"))

    real = verify.koszul_oracle
    flipped = lambda sig, word: -real(sig, word)
    monkeypatch.setattr(verify, "koszul_oracle", flipped)
    report = verify.check_koszul(random.Random(0), 400)
    assert not report.passed and "sign oracle" in report.witness


def test_wrong_derivative_is_caught(monkeypatch):
    def wrong(w):
        return LaurentElement(w.context, {n + 1: c * n for n, c in w.coeffs.items()}, w.shift - 2)

    monkeypatch.setattr(verify, "xi_derivative", wrong)
    assert not verify.check_compositions(random.Random(0), 20).passed
    assert not verify.check_q_square(random.Random(0), 1).passed


def test_wrong_log_derivative_is_caught(monkeypatch):
    def wrong(f):
        return QSeries(f.ring, {n: c * n for n, c in f.coeffs.items()}, f.order, f.degree)

    monkeypatch.setattr(verify, "q_log_derivative", wrong)
    assert not verify.check_jacobi(random.Random(0), 5).passed


def test_wrong_closed_form_is_caught(monkeypatch):
    hori = verify._universal_hori()
    monkeypatch.setattr(hori, "hori_LR_closed", lambda w: -hori.hori_LR(w) if w else w)
    assert not verify.check_matrix_identity(random.Random(0), 10, hori=hori).passed


def test_wrong_display_is_caught(monkeypatch):
    real = verify.expected_nu_hat_display
    monkeypatch.setattr(verify, "expected_nu_hat_display", lambda h: -real(h))
    assert not verify.check_nu_hat(random.Random(0), configs=0).passed
