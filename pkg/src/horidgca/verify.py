"""Seeded property suite behind ``hori-dgca verify-all``.

Each ``check_*`` function draws its cases from a ``random.Random`` built from
the given seed and returns one :class:`Report`.  A failing report carries the
first counterexample as its witness.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .algebra import GradedElement, Signature, degree_of, make_algebra
from .dgca import DgcaMorphism, FreeDGCA, Report, check_morphism, extend_by_cocycle
from .laurent import GradedHori, LaurentElement, xi_derivative
from .qseries import (
    QPair,
    QSeries,
    JacobiElement,
    hori_on_qpairs,
    jacobi_hori,
    meromorphic_context,
    mu,
    q_log_derivative,
    transported_hori,
    with_symbols,
)
from .sampling import random_config, random_homogeneous, random_laurent
from .tduality import (
    GerbeTower,
    TDualityConfig,
    build_gerbe_tower,
    classifying_algebra,
    hofib_cyc_backward,
    hofib_cyc_forward,
    universal_config,
)

__all__ = [
    "DEFAULT_COUNTS",
    "check_adjunction",
    "check_compositions",
    "check_jacobi",
    "check_koszul",
    "check_matrix_identity",
    "check_nu",
    "check_nu_hat",
    "check_q_square",
    "check_towers",
    "check_transported",
    "expected_nu_hat_display",
    "koszul_oracle",
    "mixed_signature",
    "q_test_config",
    "run_suite",
]

DEFAULT_COUNTS = {
    "koszul": 10_000,
    "configs": 50,
    "adjunction": 100,
    "laurent": 500,
    "qseries": 20,
    "jacobi": 100,
}


def _report(check: str, scope: str, failures: list[str], total: int) -> Report:
    if failures:
        return Report(check, scope, "fail", failures[0], f"{len(failures)}/{total} cases failed")
    return Report(check, scope, "pass", None, f"{total} cases")


# -- Koszul kernel ---------------------------------------------------------

def mixed_signature() -> Signature:
    """Six generators, three odd and three even."""
    return make_algebra([("a1", 1), ("x2", 2), ("b1", 1), ("c3", 3), ("y2", 2), ("z4", 4)])


def koszul_oracle(sig: Signature, word: Sequence[str]) -> GradedElement:
    """Product of a word of generators by bubble sort, one sign per odd transposition."""
    items = [sig[n] for n in word]
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            a, b = items[j], items[j + 1]
            if a.ordinal > b.ordinal:
                items[j], items[j + 1] = b, a
                if a.odd and b.odd:
                    sign = -sign
    exps: dict[int, int] = {}
    for g in items:
        exps[g.ordinal] = exps.get(g.ordinal, 0) + 1
        if g.odd and exps[g.ordinal] > 1:
            return sig.zero()
    return GradedElement(sig, {tuple(sorted(exps.items())): sign})


def _random_word(sig: Signature, rng: random.Random) -> list[str]:
    return [rng.choice(sig.names) for _ in range(rng.randint(0, 6))]


def _random_homog(sig: Signature, rng: random.Random) -> GradedElement:
    return random_homogeneous(sig, rng.randint(0, 7), rng, terms=rng.randint(1, 3))


def check_koszul(rng: random.Random, cases: int = DEFAULT_COUNTS["koszul"]) -> Report:
    """Koszul-rule laws on random elements; case ``k`` tests law ``k % 4``."""
    sig = mixed_signature()
    failures = []
    for k in range(cases):
        kind = k % 4
        if kind == 0:
            a, b = _random_homog(sig, rng), _random_homog(sig, rng)
            if a and b:
                s = (-1) ** ((degree_of(a) * degree_of(b)) % 2)
                if a * b != s * (b * a):
                    failures.append(f"commutativity: a={a}, b={b}")
        elif kind == 1:
            a, b, c = (_random_homog(sig, rng) for _ in range(3))
            if (a * b) * c != a * (b * c):
                failures.append(f"associativity: a={a}, b={b}, c={c}")
        elif kind == 2:
            a = random_homogeneous(sig, 2 * rng.randint(0, 3) + 1, rng, terms=3)
            if a * a:
                failures.append(f"odd square: a={a}")
        else:
            word = _random_word(sig, rng)
            prod = sig.one()
            for n in word:
                prod = prod * sig.gen(n)
            if prod != koszul_oracle(sig, word):
                failures.append(f"sign oracle: word={'*'.join(word)}")
    return _report("koszul", "mixed6", failures, cases)


# -- towers ----------------------------------------------------------------

def _leibniz_failures(X: FreeDGCA, rng: random.Random, pairs: int) -> list[str]:
    out = []
    for _ in range(pairs):
        a = random_homogeneous(X.signature, rng.randint(0, 5), rng)
        b = random_homogeneous(X.signature, rng.randint(0, 5), rng)
        if not a:
            continue
        s = -1 if degree_of(a) % 2 else 1
        lhs = X.differential(a * b)
        rhs = X.differential(a) * b + s * (a * X.differential(b))
        if lhs != rhs:
            out.append(f"{X.name}: a={a}, b={b}")
    return out


def _tower_failures(tower: GerbeTower, rng: random.Random, pairs: int) -> list[str]:
    out = [f"{tower.config.target.name}: {r}" for r in tower.verify() if not r.passed]
    for X in tower.algebras():
        out.extend(_leibniz_failures(X, rng, pairs))
    return out


def check_towers(rng: random.Random, configs: int = DEFAULT_COUNTS["configs"],
                 pairs: int = 5) -> Report:
    """``d^2 = 0`` plus Leibniz and morphism checks, universal tower first."""
    failures = _tower_failures(build_gerbe_tower(universal_config()), rng, pairs)
    for _ in range(configs):
        failures.extend(_tower_failures(build_gerbe_tower(random_config(rng)), rng, pairs))
    return _report("tower", f"universal+{configs}", failures, configs + 1)


# -- hofib/cyc -------------------------------------------------------------

def check_adjunction(rng: random.Random, cases: int = DEFAULT_COUNTS["adjunction"]) -> Report:
    """Backward after forward is the identity, and forward after backward."""
    failures = []
    for k in range(cases):
        cfg = random_config(rng)
        side = "L" if k % 2 == 0 else "R"
        cocycle = cfg.fxL if side == "L" else cfg.fxR
        ext = extend_by_cocycle(cfg.target, cocycle, "e1" + side, degree=2)
        phi = cfg.morphism()
        t3 = hofib_cyc_forward(ext, phi, side)
        if hofib_cyc_backward(ext, t3, side).images != phi.images:
            failures.append(f"backward(forward(phi)) != phi for {cfg}")
            continue
        # a different cocycle in the same class, by adding an exact term
        E = ext.extended
        z = random_homogeneous(E.signature, 2, rng, terms=3)
        t3b = t3 + E.differential(z)
        if hofib_cyc_forward(ext, hofib_cyc_backward(ext, t3b, side), side) != t3b:
            failures.append(f"forward(backward(t)) != t for t={t3b}")
    return _report("adjunction", "hofib/cyc", failures, cases)


# -- gerbe isomorphism -----------------------------------------------------

def nu_failures(tower: GerbeTower) -> list[str]:
    out = []
    n, ni = tower.morphisms["nu"], tower.morphisms["nu_inv"]
    for m in (n, ni):
        r = check_morphism(m)
        if not r.passed:
            out.append(str(r))
    if ni.compose(n).images != DgcaMorphism.identity(tower.GL_ext).images:
        out.append("nu_inv∘nu is not the identity")
    if n.compose(ni).images != DgcaMorphism.identity(tower.GR_ext).images:
        out.append("nu∘nu_inv is not the identity")
    X = tower.GR_ext
    cfg = tower.config
    sig = X.signature
    want = cfg.fy.to(sig) - X.gen("e1L") * cfg.fxR.to(sig)
    if X.differential(n(tower.GL_ext.gen("xi2L"))) != want:
        out.append("d(nu(xi2L)) != fy - e1L*fxR")
    return out


def check_nu(rng: random.Random, configs: int = DEFAULT_COUNTS["configs"]) -> Report:
    failures = nu_failures(build_gerbe_tower(universal_config()))
    for _ in range(configs):
        failures.extend(nu_failures(build_gerbe_tower(random_config(rng))))
    return _report("nu", f"universal+{configs}", failures, configs + 1)


def expected_nu_hat_display(hori: GradedHori) -> LaurentElement:
    """``-xi2R^-2 fy + 2 e1L e1R xi2R^-3 fy + xi2R^-2 e1L fxR``, built term by term."""
    ctx = hori.hat_GR_ext
    cfg = hori.tower.config
    sig = ctx.signature
    fy, fxR = cfg.fy.to(sig), cfg.fxR.to(sig)
    eL, eR = sig.gen("e1L"), sig.gen("e1R")
    x = ctx.xi_power
    lift = lambda a: ctx.element({0: a})
    return (-(x(-2) * lift(fy)) + 2 * lift(eL) * lift(eR) * x(-3) * lift(fy)
            + x(-2) * lift(eL) * lift(fxR))


def nu_hat_failures(hori: GradedHori) -> list[str]:
    src = hori.hat_GL_ext
    w = src.xi_power(-1)
    a = hori.hat_nu(src.d(w))
    b = hori.hat_GR_ext.d(hori.hat_nu(w))
    want = expected_nu_hat_display(hori)
    out = []
    if a != want:
        out.append(f"nu_hat(d xi2L^-1) = {a}, expected {want}")
    if b != want:
        out.append(f"d nu_hat(xi2L^-1) = {b}, expected {want}")
    return out


def check_nu_hat(rng: random.Random, configs: int = 10) -> Report:
    failures = nu_hat_failures(GradedHori(build_gerbe_tower(universal_config())))
    for _ in range(configs):
        failures.extend(nu_hat_failures(GradedHori(build_gerbe_tower(random_config(rng)))))
    return _report("nu_hat", f"universal+{configs}", failures, configs + 1)


# -- graded Hori transform -------------------------------------------------

def _universal_hori() -> GradedHori:
    return GradedHori(build_gerbe_tower(universal_config()))


def check_matrix_identity(rng: random.Random, cases: int = DEFAULT_COUNTS["laurent"],
                          hori: GradedHori | None = None) -> Report:
    """pi_hat∘nu_hat∘iota_hat equals the antidiagonal closed form, both directions."""
    h = hori or _universal_hori()
    failures = []
    for k in range(cases):
        if k % 2 == 0:
            w = random_laurent(h.hat_G_L, rng)
            got, want = h.hori_LR(w), h.hori_LR_closed(w)
        else:
            w = random_laurent(h.hat_G_R, rng)
            got, want = h.hori_RL(w), h.hori_RL_closed(w)
        if got != want or got.shift != w.shift - 1:
            failures.append(f"w={w}: composite {got}, closed form {want}")
    return _report("matrix_identity", "hori", failures, cases)


def check_compositions(rng: random.Random, cases: int = DEFAULT_COUNTS["laurent"],
                       hori: GradedHori | None = None) -> Report:
    """T_RL∘T_LR = d/dxi2L and T_LR∘T_RL = d/dxi2R, landing in shift -2."""
    h = hori or _universal_hori()
    failures = []
    for _ in range(cases):
        w = random_laurent(h.hat_G_L, rng)
        got = h.hori_RL(h.hori_LR(w))
        if got != xi_derivative(w) or got.shift != w.shift - 2:
            failures.append(f"T_RL∘T_LR on {w} gave {got}")
        v = random_laurent(h.hat_G_R, rng)
        got = h.hori_LR(h.hori_RL(v))
        if got != xi_derivative(v) or got.shift != v.shift - 2:
            failures.append(f"T_LR∘T_RL on {v} gave {got}")
    return _report("composition", "hori", failures, 2 * cases)


# -- q-series --------------------------------------------------------------

def q_test_config() -> TDualityConfig:
    """Universal configuration with modular symbols ``E4, E6`` in degree 0."""
    A0 = with_symbols(classifying_algebra(), ("E4", "E6"))
    u = universal_config()
    sig = A0.signature
    return TDualityConfig(A0, u.fxL.to(sig), u.fxR.to(sig), u.fy.to(sig), "fq")


def _random_ring_coefficient(A0: FreeDGCA, rng: random.Random, degree: int) -> GradedElement:
    """Coefficient in ``A0`` that may involve the degree-0 symbols."""
    sig = A0.signature
    base = random_homogeneous(sig, degree, rng, terms=2)
    sym = [n for n in sig.names if sig[n].degree == 0]
    for s in sym:
        if rng.random() < 0.5:
            base = base * sig.gen(s) ** rng.randint(1, 2)
    return base


def _random_q(A0: FreeDGCA, rng: random.Random, low: int, high: int, degree: int) -> QSeries:
    coeffs = {n: _random_ring_coefficient(A0, rng, degree)
              for n in range(low, high + 1) if rng.random() < 0.7}
    return QSeries(A0, coeffs, high, degree)


def check_q_square(rng: random.Random, cases: int = DEFAULT_COUNTS["qseries"],
                   low: int = -5, high: int = 20) -> Report:
    """``mu_{-2}(-q d/dq f) = d/dxi mu_0(f)`` one monomial ``q^n`` at a time, then on sums."""
    A0 = q_test_config().target
    ctx = meromorphic_context(A0)
    failures = []
    total = 0
    for _ in range(cases):
        for n in range(low, high + 1):
            total += 1
            degree = rng.randint(0, 4)
            c = _random_ring_coefficient(A0, rng, degree)
            f = QSeries.monomial(A0, n, c, high, degree)
            if mu(-1, q_log_derivative(f), ctx) != xi_derivative(mu(0, f, ctx)):
                failures.append(f"n={n}, f_n={c}")
        total += 1
        f = _random_q(A0, rng, low, high, rng.randint(0, 4))
        if mu(-1, q_log_derivative(f), ctx) != xi_derivative(mu(0, f, ctx)):
            failures.append(f"series f={f}")
    return _report("q_square", f"n in [{low},{high}]", failures, total)


def check_transported(rng: random.Random, cases: int = DEFAULT_COUNTS["qseries"],
                      low: int = -5, high: int = 20) -> Report:
    """Transported gerbe Hori operator versus ``(0 1; -q d/dq 0)`` on the window."""
    from .qseries import induced_config

    cfg = q_test_config()
    A0 = cfg.target
    hori = GradedHori(build_gerbe_tower(induced_config(cfg)))
    failures = []
    for _ in range(cases):
        d1 = rng.randint(0, 4)
        d2 = rng.randint(0, 4)
        p = QPair(_random_q(A0, rng, low, high, d1), _random_q(A0, rng, low, high, d2))
        want = hori_on_qpairs(p)
        for direction in ("LR", "RL"):
            got = transported_hori(p, cfg, direction, hori)
            if not got.agrees_with(want) or got.first != want.first or got.second != want.second:
                failures.append(f"{direction}: pair {p.to_dict()}")
    return _report("transported_hori", f"n in [{low},{high}]", failures, 2 * cases)


def check_jacobi(rng: random.Random, cases: int = DEFAULT_COUNTS["jacobi"],
                 low: int = -5, high: int = 20) -> Report:
    """Applying the Jacobi Hori map twice is the diagonal ``-q d/dq``, weights ``+1`` each."""
    A0 = q_test_config().target
    failures = []
    for _ in range(cases):
        s1, s2 = rng.randint(-12, 12), rng.randint(-12, 12)
        top = rng.randint(low, high)
        J1 = JacobiElement(s1, _random_q(A0, rng, low, top, 0))
        J2 = JacobiElement(s2, _random_q(A0, rng, low, top, 0))
        K1, K2 = jacobi_hori(J1, J2)
        if (K1.weight, K2.weight) != (s2, s1 + 1):
            failures.append(f"single step weights ({K1.weight},{K2.weight}) from ({s1},{s2})")
        L1, L2 = jacobi_hori(K1, K2)
        if (L1.weight, L2.weight) != (s1 + 1, s2 + 1):
            failures.append(f"double step weights ({L1.weight},{L2.weight}) from ({s1},{s2})")
        if L1.expansion != q_log_derivative(J1.expansion) or L2.expansion != q_log_derivative(J2.expansion):
            failures.append(f"double step is not diagonal for weights ({s1},{s2})")
    return _report("jacobi", "weights", failures, cases)


# -- suite -----------------------------------------------------------------

@dataclass
class SuiteResult:
    seed: int
    reports: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


CHECKS: dict[str, Callable[..., Report]] = {
    "koszul": lambda rng, c: check_koszul(rng, c["koszul"]),
    "tower": lambda rng, c: check_towers(rng, c["configs"]),
    "adjunction": lambda rng, c: check_adjunction(rng, c["adjunction"]),
    "nu": lambda rng, c: check_nu(rng, c["configs"]),
    "nu_hat": lambda rng, c: check_nu_hat(rng),
    "matrix_identity": lambda rng, c: check_matrix_identity(rng, c["laurent"]),
    "composition": lambda rng, c: check_compositions(rng, c["laurent"]),
    "q_square": lambda rng, c: check_q_square(rng, c["qseries"], high=c["truncation"]),
    "transported_hori": lambda rng, c: check_transported(rng, c["qseries"], high=c["truncation"]),
    "jacobi": lambda rng, c: check_jacobi(rng, c["jacobi"], high=c["truncation"]),
}


def run_suite(seed: int = 0, truncation: int = 20, counts: dict | None = None,
              only: Sequence[str] | None = None) -> SuiteResult:
    """Run every property check; each gets its own RNG derived from ``seed`` and its name."""
    c = dict(DEFAULT_COUNTS)
    c.update(counts or {})
    c["truncation"] = truncation
    result = SuiteResult(seed)
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        rng = random.Random(f"{seed}:{name}")
        result.reports.append(fn(rng, c))
    return result
