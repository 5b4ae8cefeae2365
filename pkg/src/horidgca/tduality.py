"""Rational T-duality configurations and the left/right gerbe tower.

A configuration is a DGCA map out of the classifying algebra
``K[x2L, x2R, y3]`` with ``d y3 = x2L*x2R``.  From it we build

    A_L = A[e1L], A_R = A[e1R], A_LR = A[e1L, e1R],
    G_L = A_L[xi2L], G_R = A_R[xi2R],
    GL_ext = A_LR[xi2L], GR_ext = A_LR[xi2R],

together with the isomorphism ``nu: GL_ext -> GR_ext`` fixing ``A_LR`` and
sending ``xi2L`` to ``xi2R + e1L*e1R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import ANY_DEGREE, AlgebraError, GradedElement, decompose_by_generator, degree_of, make_algebra
from .dgca import (
    CocycleExtension,
    DgcaMorphism,
    FreeDGCA,
    Report,
    check_d_squared,
    check_morphism,
    extend_by_cocycle,
)

__all__ = [
    "RESERVED_NAMES",
    "ConfigError",
    "GerbeTower",
    "TDualityConfig",
    "build_gerbe_tower",
    "classifying_algebra",
    "hofib_cyc_backward",
    "hofib_cyc_forward",
    "nu",
    "nu_inv",
    "p_L",
    "p_R",
    "polynomial_x2",
    "sigma",
    "swapped_config",
    "universal_config",
]

TOWER_NAMES = ("e1L", "e1R", "xi2L", "xi2R")
# "u" is the auxiliary invertible variable of A0[u^-1, u]
RESERVED_NAMES = TOWER_NAMES + ("u",)


class ConfigError(AlgebraError):
    pass


@lru_cache(maxsize=None)
def classifying_algebra() -> FreeDGCA:
    sig = make_algebra([("x2L", 2), ("x2R", 2), ("y3", 3)])
    x2L, x2R = sig.gens("x2L", "x2R")
    return FreeDGCA(sig, {"y3": x2L * x2R}, "C")


@lru_cache(maxsize=None)
def polynomial_x2() -> FreeDGCA:
    return FreeDGCA(make_algebra([("x2", 2)]), {}, "K[x2]")


def p_L() -> DgcaMorphism:
    C = classifying_algebra()
    return DgcaMorphism(polynomial_x2(), C, {"x2": C.gen("x2L")}, "p_L")


def p_R() -> DgcaMorphism:
    C = classifying_algebra()
    return DgcaMorphism(polynomial_x2(), C, {"x2": C.gen("x2R")}, "p_R")


def sigma() -> DgcaMorphism:
    C = classifying_algebra()
    return DgcaMorphism(C, C, {"x2L": C.gen("x2R"), "x2R": C.gen("x2L"), "y3": C.gen("y3")}, "sigma")


@dataclass(frozen=True, eq=False)
class TDualityConfig:
    """Images ``(f(x2L), f(x2R), f(y3))`` of a map out of the classifying algebra."""

    target: FreeDGCA
    fxL: GradedElement
    fxR: GradedElement
    fy: GradedElement
    name: str = "f"

    def __post_init__(self):
        A = self.target
        for attr in ("fxL", "fxR", "fy"):
            object.__setattr__(self, attr, A.element(getattr(self, attr)))
        clash = [n for n in TOWER_NAMES if n in A.signature]
        if "u" in A.signature and not A.signature["u"].invertible:
            clash.append("u")
        if clash:
            raise ConfigError(f"generator names {clash} are reserved for the gerbe tower")
        for attr, want in (("fxL", 2), ("fxR", 2), ("fy", 3)):
            deg = degree_of(getattr(self, attr))
            if deg != ANY_DEGREE and deg != want:
                raise ConfigError(f"{attr} has degree {deg}, expected {want}")
        if A.differential(self.fxL):
            raise ConfigError(f"d(xL) = {A.differential(self.fxL)} is not zero")
        if A.differential(self.fxR):
            raise ConfigError(f"d(xR) = {A.differential(self.fxR)} is not zero")
        dy = A.differential(self.fy)
        if dy != self.fxL * self.fxR:
            raise ConfigError(f"d(y) = {dy} differs from xL*xR = {self.fxL * self.fxR}")

    def __eq__(self, other):
        if not isinstance(other, TDualityConfig):
            return NotImplemented
        return (self.target == other.target and self.fxL == other.fxL
                and self.fxR == other.fxR and self.fy == other.fy)

    __hash__ = None

    def morphism(self) -> DgcaMorphism:
        return DgcaMorphism(classifying_algebra(), self.target,
                            {"x2L": self.fxL, "x2R": self.fxR, "y3": self.fy}, self.name)

    @property
    def f_L(self) -> DgcaMorphism:
        return self.morphism().compose(p_L())

    @property
    def f_R(self) -> DgcaMorphism:
        return self.morphism().compose(p_R())

    @classmethod
    def from_morphism(cls, f: DgcaMorphism) -> "TDualityConfig":
        if f.source != classifying_algebra():
            raise ConfigError("morphism does not start at the classifying algebra")
        return cls(f.target, f.images["x2L"], f.images["x2R"], f.images["y3"], f.name)


def universal_config() -> TDualityConfig:
    C = classifying_algebra()
    return TDualityConfig(C, C.gen("x2L"), C.gen("x2R"), C.gen("y3"), "id")


def swapped_config(cfg: TDualityConfig) -> TDualityConfig:
    """Precompose with the swap ``x2L <-> x2R``."""
    f = cfg.morphism().compose(sigma())
    return TDualityConfig.from_morphism(f)


# -- hofib/cyc bijection ---------------------------------------------------

def _sides(side: str) -> tuple[str, str]:
    if side == "L":
        return "x2L", "x2R"
    if side == "R":
        return "x2R", "x2L"
    raise ValueError(f"side must be 'L' or 'R', got {side!r}")


def hofib_cyc_forward(ext: CocycleExtension, phi: DgcaMorphism, side: str = "L") -> GradedElement:
    """``phi |-> phi(y3) - e*phi(x_other)``, a 3-cocycle of ``ext.extended``.

    ``ext`` must extend ``phi.target`` by the 2-cocycle ``phi(x_side)``.
    """
    fixed, other = _sides(side)
    if phi.source != classifying_algebra():
        raise AlgebraError("phi must start at the classifying algebra")
    if phi.target != ext.base:
        raise AlgebraError("phi does not land in the extension base")
    if ext.cocycle_degree != 2 or phi.images[fixed] != ext.cocycle:
        raise AlgebraError(f"phi({fixed}) = {phi.images[fixed]} is not the cocycle {ext.cocycle}")
    sig = ext.extended.signature
    return phi.images["y3"].to(sig) - ext.e * phi.images[other].to(sig)


def hofib_cyc_backward(ext: CocycleExtension, t3: GradedElement, side: str = "L") -> DgcaMorphism:
    """Inverse of :func:`hofib_cyc_forward`: read ``t3 = a3 - e*b2`` off."""
    fixed, other = _sides(side)
    A = ext.extended
    t3 = A.element(t3)
    deg = degree_of(t3)
    if deg != ANY_DEGREE and deg != 3:
        raise AlgebraError(f"t3 has degree {deg}, expected 3")
    if A.differential(t3):
        raise AlgebraError(f"t3 = {t3} is not closed")
    if ext.cocycle_degree != 2:
        raise AlgebraError("extension must kill a 2-cocycle")
    a3, beta = decompose_by_generator(t3, ext.generator)
    base = ext.base.signature
    images = {"y3": a3.to(base), other: (-beta).to(base), fixed: ext.cocycle}
    phi = DgcaMorphism(classifying_algebra(), ext.base, images, "phi")
    report = check_morphism(phi)
    if not report.passed:
        raise AlgebraError(f"recovered map is not a DGCA morphism: {report}")
    return phi


# -- gerbe tower -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GerbeTower:
    config: TDualityConfig
    A: FreeDGCA
    ext_L: CocycleExtension
    ext_R: CocycleExtension
    ext_LR: CocycleExtension
    ext_GL: CocycleExtension
    ext_GR: CocycleExtension
    ext_GL_ext: CocycleExtension
    ext_GR_ext: CocycleExtension
    morphisms: dict = field(repr=False)

    @property
    def A_L(self) -> FreeDGCA:
        return self.ext_L.extended

    @property
    def A_R(self) -> FreeDGCA:
        return self.ext_R.extended

    @property
    def A_LR(self) -> FreeDGCA:
        return self.ext_LR.extended

    @property
    def G_L(self) -> FreeDGCA:
        return self.ext_GL.extended

    @property
    def G_R(self) -> FreeDGCA:
        return self.ext_GR.extended

    @property
    def GL_ext(self) -> FreeDGCA:
        return self.ext_GL_ext.extended

    @property
    def GR_ext(self) -> FreeDGCA:
        return self.ext_GR_ext.extended

    def algebras(self) -> list[FreeDGCA]:
        """The classifying algebra and the eight algebras built from the configuration."""
        return [classifying_algebra(), self.A, self.A_L, self.A_R, self.A_LR,
                self.G_L, self.G_R, self.GL_ext, self.GR_ext]

    def central_square_commutes(self) -> bool:
        m = self.morphisms
        via_L = m["iota_R:A_L->A_LR"].compose(m["iota_L:A->A_L"])
        via_R = m["iota_L:A_R->A_LR"].compose(m["iota_R:A->A_R"])
        return via_L.images == via_R.images

    def verify(self) -> list[Report]:
        reports = [check_d_squared(X) for X in self.algebras()]
        for name, mor in self.morphisms.items():
            r = check_morphism(mor)
            reports.append(Report("morphism", name, r.status, r.witness, r.detail))
        ok = self.central_square_commutes()
        reports.append(Report("central_square", "A->A_LR", "pass" if ok else "fail"))
        n, ni = self.morphisms["nu"], self.morphisms["nu_inv"]
        for label, comp, X in (("nu_inv∘nu", ni.compose(n), self.GL_ext),
                               ("nu∘nu_inv", n.compose(ni), self.GR_ext)):
            ok = comp.images == DgcaMorphism.identity(X).images
            reports.append(Report("inverse", label, "pass" if ok else "fail"))
        return reports

    def summary(self) -> str:
        lines = []
        for X in self.algebras():
            lines.extend(X.describe())
        return "\n".join(lines)


def build_gerbe_tower(cfg: TDualityConfig) -> GerbeTower:
    A = cfg.target
    ext_L = extend_by_cocycle(A, cfg.fxL, "e1L", degree=2, algebra_name="A_L")
    ext_R = extend_by_cocycle(A, cfg.fxR, "e1R", degree=2, algebra_name="A_R")
    ext_LR = extend_by_cocycle(ext_L.extended, cfg.fxR, "e1R", degree=2, algebra_name="A_LR")
    A_L, A_R, A_LR = ext_L.extended, ext_R.extended, ext_LR.extended

    e1L, fyL, fxRL = A_L.gen("e1L"), cfg.fy.to(A_L.signature), cfg.fxR.to(A_L.signature)
    ext_GL = extend_by_cocycle(A_L, fyL - e1L * fxRL, "xi2L", degree=3, algebra_name="G_L")
    e1R, fyR, fxLR = A_R.gen("e1R"), cfg.fy.to(A_R.signature), cfg.fxL.to(A_R.signature)
    ext_GR = extend_by_cocycle(A_R, fyR - e1R * fxLR, "xi2R", degree=3, algebra_name="G_R")

    sLR = A_LR.signature
    eL, eR = sLR.gens("e1L", "e1R")
    fy, fxL, fxR = (v.to(sLR) for v in (cfg.fy, cfg.fxL, cfg.fxR))
    ext_GLx = extend_by_cocycle(A_LR, fy - eL * fxR, "xi2L", degree=3, algebra_name="G_L_{f(x2R)}")
    ext_GRx = extend_by_cocycle(A_LR, fy - eR * fxL, "xi2R", degree=3, algebra_name="G_R_{f(x2L)}")
    G_L, G_R, GLx, GRx = ext_GL.extended, ext_GR.extended, ext_GLx.extended, ext_GRx.extended

    inc = DgcaMorphism.inclusion
    morphisms = {
        "f:C->A": cfg.morphism(),
        "iota_L:A->A_L": ext_L.inclusion,
        "iota_R:A->A_R": ext_R.inclusion,
        "iota_R:A_L->A_LR": ext_LR.inclusion,
        "iota_L:A_R->A_LR": inc(A_R, A_LR),
        "i_L:A_L->G_L": ext_GL.inclusion,
        "i_R:A_R->G_R": ext_GR.inclusion,
        "iota_R:G_L->G_L_ext": inc(G_L, GLx),
        "iota_L:G_R->G_R_ext": inc(G_R, GRx),
        "i_L:A_LR->G_L_ext": ext_GLx.inclusion,
        "i_R:A_LR->G_R_ext": ext_GRx.inclusion,
    }
    tower = GerbeTower(cfg, A, ext_L, ext_R, ext_LR, ext_GL, ext_GR, ext_GLx, ext_GRx, morphisms)
    morphisms["nu"] = nu(tower)
    morphisms["nu_inv"] = nu_inv(tower)
    return tower


def nu(tower: GerbeTower) -> DgcaMorphism:
    """``xi2L |-> xi2R + e1L*e1R``, identity on ``A_LR``."""
    src, tgt = tower.GL_ext, tower.GR_ext
    images = {g.name: tgt.gen(g.name) for g in tower.A_LR.signature}
    images["xi2L"] = tgt.gen("xi2R") + tgt.gen("e1L") * tgt.gen("e1R")
    return DgcaMorphism(src, tgt, images, "nu")


def nu_inv(tower: GerbeTower) -> DgcaMorphism:
    """``xi2R |-> xi2L - e1L*e1R``, identity on ``A_LR``."""
    src, tgt = tower.GR_ext, tower.GL_ext
    images = {g.name: tgt.gen(g.name) for g in tower.A_LR.signature}
    images["xi2R"] = tgt.gen("xi2L") - tgt.gen("e1L") * tgt.gen("e1R")
    return DgcaMorphism(src, tgt, images, "nu_inv")
