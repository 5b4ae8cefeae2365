import pytest

from horidgca.algebra import AlgebraError, degree_of, make_algebra
from horidgca.dgca import (
    DgcaMorphism,
    FreeDGCA,
    ShiftedElement,
    check_d_squared,
    check_morphism,
    extend_by_cocycle,
    extend_morphism,
    projection_pi,
    section_e,
)
from horidgca.sampling import random_homogeneous


@pytest.fixture
def minimal_model():
    # a small Sullivan-style algebra: d z3 = x2^2, d w5 = x2*v4, d v4 = 0
    sig = make_algebra([("a1", 1), ("x2", 2), ("z3", 3), ("v4", 4), ("w5", 5)])
    x2, v4 = sig.gens("x2", "v4")
    return FreeDGCA(sig, {"z3": x2 ** 2, "w5": x2 * v4}, "M")


def test_differential_on_generators_and_powers(minimal_model):
    M = minimal_model
    x2, z3 = M.gen("x2"), M.gen("z3")
    assert M.d(z3) == x2 ** 2
    assert M.d(z3 * x2 ** 3) == x2 ** 5
    assert M.d(M.gen("a1")) == 0


def test_leibniz_on_random_products(minimal_model, rng):
    M = minimal_model
    for _ in range(200):
        a = random_homogeneous(M.signature, rng.randint(0, 8), rng)
        b = random_homogeneous(M.signature, rng.randint(0, 8), rng)
        if not a:
            continue
        sign = -1 if degree_of(a) % 2 else 1
        assert M.d(a * b) == M.d(a) * b + sign * (a * M.d(b))


def test_d_squared_passes_and_reports_witness(minimal_model):
    assert check_d_squared(minimal_model).passed
    sig = make_algebra([("a1", 1), ("x2", 2), ("c3", 3)])
    bad = FreeDGCA(sig, {"a1": sig.gen("x2"), "x2": sig.gen("c3")}, "bad")
    report = check_d_squared(bad)
    assert not report.passed
    assert report.witness == "a1"


def test_differential_degree_is_validated():
    sig = make_algebra([("x2", 2), ("y3", 3)])
    with pytest.raises(AlgebraError):
        FreeDGCA(sig, {"y3": sig.gen("y3")})


def test_morphism_check_finds_failing_generator():
    sig = make_algebra([("p2", 2), ("q2", 2), ("r3", 3)])
    p2, q2 = sig.gens("p2", "q2")
    B = FreeDGCA(sig, {"r3": p2 * q2}, "B")
    src_sig = make_algebra([("x2", 2), ("z3", 3)])
    S = FreeDGCA(src_sig, {"z3": src_sig.gen("x2") ** 2}, "S")
    good = DgcaMorphism(S, FreeDGCA(sig, {"r3": p2 * p2}, "B2"), {"x2": p2, "z3": sig.gen("r3")})
    assert check_morphism(good).passed
    bad = DgcaMorphism(S, B, {"x2": p2, "z3": sig.gen("r3")})
    report = check_morphism(bad)
    assert not report.passed and report.witness == "z3"


def test_morphism_requires_every_generator(minimal_model):
    with pytest.raises(AlgebraError):
        DgcaMorphism(minimal_model, minimal_model, {"x2": minimal_model.gen("x2")})


def test_extension_preconditions(minimal_model):
    M = minimal_model
    with pytest.raises(AlgebraError):
        extend_by_cocycle(M, M.gen("z3"), "e")  # not closed
    with pytest.raises(AlgebraError):
        extend_by_cocycle(M, M.gen("a1"), "e")  # degree 1
    with pytest.raises(AlgebraError):
        extend_by_cocycle(M, 0, "e")
    E = extend_by_cocycle(M, 0, "e", degree=2)
    assert E.extended.d(E.e) == 0


def test_extension_kills_cocycle(minimal_model):
    E = extend_by_cocycle(minimal_model, minimal_model.gen("x2"), "e1")
    assert E.extended.d(E.e) == E.extended.gen("x2")
    assert E.generator.degree == 1
    assert check_d_squared(E.extended).passed
    assert check_morphism(E.inclusion).passed


def test_extend_morphism_is_functorial():
    A = FreeDGCA(make_algebra([("x2", 2)]), {}, "A")
    Bsig = make_algebra([("p2", 2), ("q2", 2)])
    B = FreeDGCA(Bsig, {}, "B")
    Csig = make_algebra([("z2", 2)])
    C = FreeDGCA(Csig, {}, "C")
    f = DgcaMorphism(A, B, {"x2": Bsig.gen("p2") + Bsig.gen("q2")}, "f")
    g = DgcaMorphism(B, C, {"p2": Csig.gen("z2"), "q2": 2 * Csig.gen("z2")}, "g")
    At = extend_by_cocycle(A, A.gen("x2"), "e")
    Bs = extend_by_cocycle(B, f(A.gen("x2")), "e")
    Cr = extend_by_cocycle(C, g(f(A.gen("x2"))), "e")
    fe, ge = extend_morphism(f, At, Bs), extend_morphism(g, Bs, Cr)
    gfe = extend_morphism(g.compose(f), At, Cr)
    assert gfe.images == ge.compose(fe).images
    assert check_morphism(gfe).passed
    ident = extend_morphism(DgcaMorphism.identity(A), At, At)
    assert ident.images == DgcaMorphism.identity(At.extended).images
    with pytest.raises(AlgebraError):
        extend_morphism(f, At, extend_by_cocycle(B, Bsig.gen("p2"), "e"))


@pytest.fixture
def even_extension():
    # degree-4 cocycle, so the new generator is odd of degree 3
    sig = make_algebra([("a1", 1), ("x2", 2), ("b3", 3), ("v4", 4)])
    x2, v4 = sig.gens("x2", "v4")
    A = FreeDGCA(sig, {"b3": x2 ** 2}, "A")
    return extend_by_cocycle(A, v4, "e3")


def test_projection_is_a_chain_map(even_extension, rng):
    E = even_extension
    X, A = E.extended, E.base
    for _ in range(150):
        a = random_homogeneous(X.signature, rng.randint(0, 9), rng, terms=4)
        lhs = projection_pi(E, X.d(a))
        rhs = projection_pi(E, a).differential(A)
        assert lhs.underlying == rhs.underlying
        assert lhs.shift == -3


def test_projection_is_a_module_map(even_extension, rng):
    E = even_extension
    X, A = E.extended, E.base
    for _ in range(150):
        a = random_homogeneous(X.signature, rng.randint(0, 9), rng)
        x = random_homogeneous(A.signature, rng.randint(0, 5), rng)
        if not x:
            continue
        xe = x.to(X.signature)
        sign = -1 if degree_of(x) % 2 else 1
        assert projection_pi(E, xe * a).underlying == sign * (x * projection_pi(E, a).underlying)
        assert projection_pi(E, a * xe).underlying == projection_pi(E, a).underlying * x


def test_section_then_projection_is_identity(even_extension, rng):
    E = even_extension
    for _ in range(50):
        b = random_homogeneous(E.base.signature, rng.randint(0, 6), rng)
        assert projection_pi(E, section_e(E, b)).underlying == b
    with pytest.raises(AlgebraError):
        section_e(E, E.e)


def test_projection_needs_even_cocycle(minimal_model):
    E = extend_by_cocycle(minimal_model, minimal_model.gen("x2") * minimal_model.gen("a1"), "e2")
    with pytest.raises(AlgebraError):
        projection_pi(E, E.e)


def test_shifted_degree_and_sign(minimal_model):
    z3 = minimal_model.gen("z3")
    s = ShiftedElement(z3, -1)
    assert s.degree == 4
    assert s.differential(minimal_model).underlying == -(minimal_model.gen("x2") ** 2)
    assert ShiftedElement(z3, 2).differential(minimal_model).underlying == minimal_model.d(z3)
