import pytest

from horidgca.algebra import AlgebraError, make_algebra
from horidgca.dgca import FreeDGCA
from horidgca.laurent import (
    LaurentContext,
    components,
    hori_matrix,
    series_derivative,
    xi_derivative,
)
from horidgca.sampling import random_laurent
from horidgca.verify import expected_nu_hat_display


def test_xi_powers_and_inverse(universal_hori):
    ctx = universal_hori.hat_G_L
    xi = ctx.xi_power(1)
    assert xi ** -1 * xi == ctx.one()
    assert ctx.xi_power(-2) * ctx.xi_power(5) == ctx.xi_power(3)
    assert str(ctx.xi_power(-3)) == "xi2L^-3"


def test_context_preconditions():
    sig = make_algebra([("a1", 1), ("x2", 2)])
    with pytest.raises(AlgebraError):
        LaurentContext(FreeDGCA(sig, {}, "A"), "a1")


def test_differential_squares_to_zero(universal_hori, rng):
    for ctx in (universal_hori.hat_G_L, universal_hori.hat_GR_ext):
        for _ in range(50):
            w = random_laurent(ctx, rng)
            assert not ctx.d(ctx.d(w))


def test_differential_of_inverse_xi(universal_hori):
    ctx = universal_hori.hat_G_L
    got = ctx.d(ctx.xi_power(-1))
    sig = ctx.signature
    want = ctx.element({2: -(sig.gen("y3") - sig.gen("e1L") * sig.gen("x2R"))})
    assert got == want


def test_nu_hat_display(universal_hori):
    h = universal_hori
    w = h.hat_GL_ext.xi_power(-1)
    want = expected_nu_hat_display(h)
    assert h.hat_nu(h.hat_GL_ext.d(w)) == want
    assert h.hat_GR_ext.d(h.hat_nu(w)) == want
    assert str(want) == "(x2R*e1L - y3)*xi2R^-2 + (2*y3*e1L*e1R)*xi2R^-3"


def test_nu_hat_on_inverse_powers(universal_hori):
    h = universal_hori
    src, tgt = h.hat_GL_ext, h.hat_GR_ext
    eta = tgt.gen("e1L") * tgt.gen("e1R")
    for n in range(1, 6):
        want = tgt.xi_power(-n) - n * eta * tgt.xi_power(-n - 1)
        assert h.hat_nu(src.xi_power(-n)) == want
    assert h.hat_nu(src.xi_power(-1)) * h.hat_nu(src.xi_power(1)) == tgt.one()


def test_nu_hat_is_multiplicative_chain_isomorphism(universal_hori, rng):
    h = universal_hori
    src, tgt = h.hat_GL_ext, h.hat_GR_ext
    for _ in range(60):
        u, v = random_laurent(src, rng), random_laurent(src, rng)
        assert h.hat_nu(u * v) == h.hat_nu(u) * h.hat_nu(v)
        assert h.hat_nu(src.d(v)) == tgt.d(h.hat_nu(v))
        assert h.hat_nu_inv(h.hat_nu(v)) == v


def test_hori_of_e1L_is_one(universal_hori):
    out = universal_hori.hori_LR(universal_hori.hat_G_L.gen("e1L"))
    assert str(out) == "1"
    assert out.shift == -1


def test_hori_closed_form_on_basis(universal_hori):
    h = universal_hori
    L, R = h.hat_G_L, h.hat_G_R
    y3 = L.signature.gen("y3")
    # alpha xi^-n  ->  -n e1R alpha xi^-(n+1)
    got = h.hori_LR(L.element({3: y3}))
    assert got == (R.gen("e1R") * R.element({4: -3 * R.signature.gen("y3")})).with_shift(-1)
    # e1L beta xi^-n  ->  beta xi^-n
    got = h.hori_LR(L.element({-2: L.signature.gen("e1L") * y3}))
    assert got == R.element({-2: R.signature.gen("y3")}, shift=-1)


def test_matrix_identity_and_compositions(universal_hori, rng):
    h = universal_hori
    for _ in range(100):
        w = random_laurent(h.hat_G_L, rng)
        assert h.hori_LR(w) == h.hori_LR_closed(w)
        assert h.hori_RL(h.hori_LR(w)) == xi_derivative(w)
        v = random_laurent(h.hat_G_R, rng)
        assert h.hori_RL(v) == h.hori_RL_closed(v)
        assert h.hori_LR(h.hori_RL(v)) == xi_derivative(v)
        assert h.hori_RL(h.hori_LR(w)).shift == -2


def test_hori_is_a_chain_map(universal_hori, rng):
    h = universal_hori
    for _ in range(60):
        w = random_laurent(h.hat_G_L, rng)
        assert h.hori_LR(h.hat_G_L.d(w)) == h.hat_G_R.d(h.hori_LR(w))


def test_degree_bookkeeping(universal_hori, rng):
    h = universal_hori
    seen = 0
    for _ in range(80):
        D = rng.randint(-4, 5)
        w = random_laurent(h.hat_G_L, rng, degree=D)
        if not w:
            continue
        out = h.hori_LR(w)
        if out:
            seen += 1
            assert out.degree() == D
            assert out.underlying_degree() == D - 1
        twice = h.hori_RL(out)
        if twice:
            assert twice.underlying_degree() == D - 2
            assert twice.degree() == D
    assert seen > 20


def test_components_round_trip(universal_hori, rng):
    ctx = universal_hori.hat_GL_ext
    for _ in range(30):
        w = random_laurent(ctx, rng)
        parts = components(w)
        assert parts.reassemble(ctx) == w


def test_series_derivative_and_matrix():
    sig = make_algebra([("p2", 2)])
    p = sig.gen("p2")
    s = {1: p, -2: 3 * p, 0: p * p}
    assert series_derivative(s) == {2: -p, -1: 6 * p}
    first, second = hori_matrix(s, {4: p})
    assert first == {4: p}
    assert second == series_derivative(s)
