"""Laurent series in an inverted degree-2 generator and the graded Hori maps.

A :class:`LaurentElement` is a finitely supported sum ``sum_n c_n xi^(-n)``
with coefficients ``c_n`` free of ``xi``.  The pull-iso-push transform

    T_LR = pi_hat ∘ nu_hat ∘ iota_R_hat : Ĝ_L -> Ĝ_R[-1]

and its mirror ``T_RL`` are computed by :class:`GradedHori` from a gerbe
tower.  Shifts are carried as metadata on the elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Mapping

from .algebra import (
    ANY_DEGREE,
    INHOMOGENEOUS,
    AlgebraError,
    GradedElement,
    decompose_by_generator,
    degree_of,
)
from .dgca import DgcaMorphism, FreeDGCA
from .tduality import GerbeTower

__all__ = [
    "GradedHori",
    "HoriComponents",
    "LaurentContext",
    "LaurentElement",
    "components",
    "hori_matrix",
    "invert_generator",
    "series_derivative",
    "xi_derivative",
]


class LaurentContext:
    """``G`` with the even generator ``xi`` inverted, as Laurent series in ``xi``."""

    def __init__(self, algebra: FreeDGCA, xi: str):
        g = algebra.signature[xi]
        if g.odd:
            raise AlgebraError(f"cannot invert odd generator {xi!r}")
        if g.invertible:
            raise AlgebraError(f"{xi!r} is already invertible in the coefficient ring")
        for other in algebra.signature:
            if algebra.d_of(other.name).contains(xi):
                raise AlgebraError(f"d({other.name}) involves {xi!r}")
        self.algebra = algebra
        self.xi = xi
        self.signature = algebra.signature
        self.d_xi = algebra.d_of(xi)

    def __repr__(self) -> str:
        return f"LaurentContext({self.algebra.name}, {self.xi}^-1)"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentContext):
            return NotImplemented
        return self.xi == other.xi and self.algebra == other.algebra

    def __hash__(self) -> int:
        return hash((self.xi, self.signature))

    def element(self, coeffs: Mapping[int, object] | None = None, shift: int = 0) -> "LaurentElement":
        return LaurentElement(self, coeffs or {}, shift)

    def zero(self, shift: int = 0) -> "LaurentElement":
        return LaurentElement(self, {}, shift)

    def one(self) -> "LaurentElement":
        return LaurentElement(self, {0: 1})

    def xi_power(self, k: int) -> "LaurentElement":
        """``xi^k`` for any integer ``k``."""
        return LaurentElement(self, {-k: 1})

    def gen(self, name: str) -> "LaurentElement":
        if name == self.xi:
            return self.xi_power(1)
        return LaurentElement(self, {0: self.signature.gen(name)})

    def from_graded(self, a: GradedElement, shift: int = 0) -> "LaurentElement":
        """Split a polynomial element into its ``xi``-power coefficients."""
        a = self.algebra.element(a)
        o = self.signature[self.xi].ordinal
        coeffs: dict[int, dict] = {}
        for m, c in a.terms():
            k = 0
            rest = []
            for f in m:
                if f[0] == o:
                    k = f[1]
                else:
                    rest.append(f)
            coeffs.setdefault(-k, {})[tuple(rest)] = c
        return LaurentElement(self, {n: GradedElement(self.signature, t) for n, t in coeffs.items()}, shift)

    def differential(self, w: "LaurentElement") -> "LaurentElement":
        """Leibniz extension of ``d(xi^-n) = -n xi^(-n-1) d(xi)``.

        On a shifted element the sign ``(-1)^shift`` is applied.
        """
        if w.context != self:
            raise AlgebraError("element is not in this Laurent context")
        A = self.algebra
        sig = self.signature
        out: dict[int, GradedElement] = {}

        def add(n, v):
            if v:
                cur = out.get(n)
                out[n] = v if cur is None else cur + v

        for n, c in w.coeffs.items():
            add(n, A.differential(c))
            if n and self.d_xi:
                # (-1)^|c| c * (-n) xi^(-n-1) d(xi), per monomial of c
                for m, coef in c.terms():
                    mono = GradedElement(sig, {m: coef})
                    piece = mono * self.d_xi * (-n)
                    if sig.monomial_degree(m) & 1:
                        piece = -piece
                    add(n + 1, piece)
        res = LaurentElement(self, out, w.shift)
        return -res if w.shift % 2 else res

    d = differential


def invert_generator(G: FreeDGCA, xi: str) -> LaurentContext:
    return LaurentContext(G, xi)


class LaurentElement:
    """Immutable finite Laurent series ``sum_n coeffs[n] * xi^(-n)``."""

    __slots__ = ("context", "coeffs", "shift")

    def __init__(self, context: LaurentContext, coeffs: Mapping[int, object], shift: int = 0):
        self.context = context
        self.shift = shift
        sig = context.signature
        clean: dict[int, GradedElement] = {}
        for n, c in coeffs.items():
            if not isinstance(c, GradedElement):
                c = sig.scalar(Fraction(c))
            elif c.signature != sig:
                c = c.to(sig)
            if not c:
                continue
            if c.contains(context.xi):
                raise AlgebraError(f"coefficient {c} contains {context.xi}")
            clean[int(n)] = c
        self.coeffs = clean

    # -- inspection -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coefficient(self, n: int) -> GradedElement:
        """Coefficient of ``xi^(-n)``."""
        return self.coeffs.get(n, self.context.signature.zero())

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def underlying_degree(self) -> int | str:
        degs = set()
        for n, c in self.coeffs.items():
            d = degree_of(c)
            if d == INHOMOGENEOUS:
                return INHOMOGENEOUS
            degs.add(d - 2 * n)
        if not degs:
            return ANY_DEGREE
        return degs.pop() if len(degs) == 1 else INHOMOGENEOUS

    def degree(self) -> int | str:
        """Degree in the shifted space: underlying degree minus the shift."""
        d = self.underlying_degree()
        return d - self.shift if isinstance(d, int) else d

    def with_shift(self, shift: int) -> "LaurentElement":
        return LaurentElement(self.context, self.coeffs, shift)

    def map_coefficients(self, fn: Callable[[GradedElement], object],
                         context: LaurentContext | None = None) -> "LaurentElement":
        ctx = context or self.context
        return LaurentElement(ctx, {n: fn(c) for n, c in self.coeffs.items()}, self.shift)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "LaurentElement"):
        if other.context != self.context:
            raise AlgebraError("Laurent elements live in different contexts")

    def _lift(self, other):
        if isinstance(other, LaurentElement):
            self._check(other)
            return other
        if isinstance(other, GradedElement):
            return self.context.from_graded(other)
        if isinstance(other, (int, Fraction, Rational)):
            return LaurentElement(self.context, {0: Fraction(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        if other.coeffs and self.coeffs and other.shift != self.shift:
            raise AlgebraError("cannot add elements with different shifts")
        coeffs = dict(self.coeffs)
        for n, c in other.coeffs.items():
            coeffs[n] = coeffs[n] + c if n in coeffs else c
        return LaurentElement(self.context, coeffs, self.shift if self.coeffs else other.shift)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElement(self.context, {n: -c for n, c in self.coeffs.items()}, self.shift)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return LaurentElement(self.context, {n: c * other for n, c in self.coeffs.items()}, self.shift)
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        # xi is even, so powers of xi commute with everything
        out: dict[int, GradedElement] = {}
        for n, a in self.coeffs.items():
            for m, b in other.coeffs.items():
                p = a * b
                if p:
                    out[n + m] = out[n + m] + p if n + m in out else p
        return LaurentElement(self.context, out, self.shift + other.shift)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self * other
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self._inverse() ** (-k)
        result = self.context.one()
        for _ in range(k):
            result = result * self
        return result

    def _inverse(self) -> "LaurentElement":
        if len(self.coeffs) != 1:
            raise AlgebraError(f"cannot invert {self}")
        (n, c), = self.coeffs.items()
        return LaurentElement(self.context, {-n: c ** -1 if not c.is_scalar() else 1 / c.scalar_value()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Rational)):
            other = LaurentElement(self.context, {0: Fraction(other)}, self.shift)
        if not isinstance(other, LaurentElement):
            return NotImplemented
        return (self.context == other.context and self.shift == other.shift
                and self.coeffs == other.coeffs)

    __hash__ = None

    # -- rendering ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        xi = self.context.xi
        parts = []
        single = len(self.coeffs) == 1
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            if n == 0:
                parts.append(str(c) if single or len(c) == 1 else f"({c})")
            elif c == 1:
                parts.append(f"{xi}^{-n}")
            else:
                parts.append(f"({c})*{xi}^{-n}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentElement({self}, shift={self.shift})"


# -- component form -----------------------------------------------------------

@dataclass(frozen=True)
class HoriComponents:
    """``c_n = alpha_n + eL*beta_n + eR*gamma_n + eL*eR*delta_n`` for every ``n``."""

    alpha: dict
    beta: dict
    gamma: dict
    delta: dict
    left: str = "e1L"
    right: str = "e1R"

    def reassemble(self, context: LaurentContext, shift: int = 0) -> LaurentElement:
        sig = context.signature
        eL = sig.gen(self.left) if self.left in sig else None
        eR = sig.gen(self.right) if self.right in sig else None
        coeffs: dict[int, GradedElement] = {}
        keys = set(self.alpha) | set(self.beta) | set(self.gamma) | set(self.delta)
        for n in keys:
            c = sig.zero()
            c = c + self.alpha.get(n, sig.zero()).to(sig)
            for part, factor in ((self.beta, (eL,)), (self.gamma, (eR,)), (self.delta, (eL, eR))):
                v = part.get(n)
                if v:
                    if any(f is None for f in factor):
                        raise AlgebraError("component needs a generator missing from the context")
                    prod = sig.one()
                    for f in factor:
                        prod = prod * f
                    c = c + prod * v.to(sig)
            coeffs[n] = c
        return LaurentElement(context, coeffs, shift)

    def to_dict(self) -> dict:
        def ser(d):
            return {str(n): str(d[n]) for n in sorted(d) if d[n]}
        return {"alpha": ser(self.alpha), "beta": ser(self.beta),
                "gamma": ser(self.gamma), "delta": ser(self.delta)}


def components(w: LaurentElement, left: str = "e1L", right: str = "e1R") -> HoriComponents:
    """Read off the four component series of ``w`` with respect to two odd generators."""
    sig = w.context.signature
    alpha, beta, gamma, delta = {}, {}, {}, {}
    for n, c in w.coeffs.items():
        if left in sig:
            c0, c1 = decompose_by_generator(c, left)
        else:
            c0, c1 = c, sig.zero()
        if right in sig:
            a, g = decompose_by_generator(c0, right)
            b, d = decompose_by_generator(c1, right)
        else:
            a, g, b, d = c0, sig.zero(), c1, sig.zero()
        for target, v in ((alpha, a), (beta, b), (gamma, g), (delta, d)):
            if v:
                target[n] = v
    return HoriComponents(alpha, beta, gamma, delta, left, right)


def series_derivative(series: Mapping[int, GradedElement]) -> dict[int, GradedElement]:
    """``d/dxi`` on a coefficient series: ``xi^-n -> -n xi^(-n-1)``."""
    return {n + 1: c * (-n) for n, c in series.items() if n and c}


def hori_matrix(first: Mapping[int, GradedElement], second: Mapping[int, GradedElement]):
    """The antidiagonal action ``(a, b) -> (b, d/dxi a)`` on component series."""
    return dict(second), series_derivative(first)


def xi_derivative(w: LaurentElement) -> LaurentElement:
    return LaurentElement(w.context, series_derivative(w.coeffs), w.shift - 2)


# -- the pull-iso-push transforms ---------------------------------------------

def _hat(m: DgcaMorphism, src: LaurentContext, tgt: LaurentContext) -> Callable[[LaurentElement], LaurentElement]:
    """Extend ``m`` to Laurent series, assuming ``m(xi_src) = xi_tgt + eta`` with ``eta^2 = 0``.

    Then ``m(xi_src^-n) = xi_tgt^-n - n*eta*xi_tgt^(-n-1)`` for every integer ``n``.
    """
    img = tgt.from_graded(m.images[src.xi])
    if set(img.coeffs) - {-1, 0} or img.coefficient(-1) != 1:
        raise AlgebraError(f"{m.name}({src.xi}) is not of the form {tgt.xi} + eta")
    eta = img.coefficient(0)
    if eta * eta:
        raise AlgebraError(f"eta = {eta} is not square-zero")
    tsig = tgt.signature

    def apply(w: LaurentElement) -> LaurentElement:
        if w.context != src:
            raise AlgebraError("element is not in the source context")
        out: dict[int, GradedElement] = {}
        for n, c in w.coeffs.items():
            mc = m.apply(c).to(tsig)
            out[n] = out[n] + mc if n in out else mc
            if n and eta:
                extra = mc * eta * (-n)
                out[n + 1] = out[n + 1] + extra if n + 1 in out else extra
        return LaurentElement(tgt, out, w.shift)

    return apply


class GradedHori:
    """Laurent-extended gerbe maps and the graded Hori transforms of a tower."""

    def __init__(self, tower: GerbeTower):
        self.tower = tower
        self.hat_G_L = LaurentContext(tower.G_L, "xi2L")
        self.hat_G_R = LaurentContext(tower.G_R, "xi2R")
        self.hat_GL_ext = LaurentContext(tower.GL_ext, "xi2L")
        self.hat_GR_ext = LaurentContext(tower.GR_ext, "xi2R")
        m = tower.morphisms
        self._iota_R = _hat(m["iota_R:G_L->G_L_ext"], self.hat_G_L, self.hat_GL_ext)
        self._iota_L = _hat(m["iota_L:G_R->G_R_ext"], self.hat_G_R, self.hat_GR_ext)
        self._nu = _hat(m["nu"], self.hat_GL_ext, self.hat_GR_ext)
        self._nu_inv = _hat(m["nu_inv"], self.hat_GR_ext, self.hat_GL_ext)

    def hat_iota_R(self, w: LaurentElement) -> LaurentElement:
        return self._iota_R(w)

    def hat_iota_L(self, w: LaurentElement) -> LaurentElement:
        return self._iota_L(w)

    def hat_nu(self, w: LaurentElement) -> LaurentElement:
        return self._nu(w)

    def hat_nu_inv(self, w: LaurentElement) -> LaurentElement:
        return self._nu_inv(w)

    @staticmethod
    def _project(w: LaurentElement, odd: str, tgt: LaurentContext) -> LaurentElement:
        tsig = tgt.signature
        out = {}
        for n, c in w.coeffs.items():
            _, beta = decompose_by_generator(c, odd)
            out[n] = beta.to(tsig)
        return LaurentElement(tgt, out, w.shift - 1)

    def hat_pi(self, w: LaurentElement) -> LaurentElement:
        """``alpha + e1L*beta -> beta`` from ``Ĝ_R_{f(x2L)}`` onto ``Ĝ_R[-1]``."""
        if w.context != self.hat_GR_ext:
            raise AlgebraError("hat_pi expects an element of the extended right gerbe")
        return self._project(w, "e1L", self.hat_G_R)

    def hat_pi_mirror(self, w: LaurentElement) -> LaurentElement:
        """``alpha + e1R*beta -> beta`` from ``Ĝ_L_{f(x2R)}`` onto ``Ĝ_L[-1]``."""
        if w.context != self.hat_GL_ext:
            raise AlgebraError("hat_pi_mirror expects an element of the extended left gerbe")
        return self._project(w, "e1R", self.hat_G_L)

    def hori_LR(self, w: LaurentElement) -> LaurentElement:
        return self.hat_pi(self.hat_nu(self.hat_iota_R(w)))

    def hori_RL(self, w: LaurentElement) -> LaurentElement:
        return self.hat_pi_mirror(self.hat_nu_inv(self.hat_iota_L(w)))

    # closed forms, read straight off the component formulas
    def hori_LR_closed(self, w: LaurentElement) -> LaurentElement:
        """``sum beta_n xi2R^-n + e1R * sum (-n) alpha_n xi2R^(-n-1)``."""
        return self._closed(w, self.hat_G_L, "e1L", self.hat_G_R, "e1R")

    def hori_RL_closed(self, w: LaurentElement) -> LaurentElement:
        """``sum beta_n xi2L^-n + e1L * sum (-n) alpha_n xi2L^(-n-1)``."""
        return self._closed(w, self.hat_G_R, "e1R", self.hat_G_L, "e1L")

    @staticmethod
    def _closed(w, src, odd_in, tgt, odd_out):
        if w.context != src:
            raise AlgebraError("element is in the wrong context")
        tsig = tgt.signature
        alpha, beta = {}, {}
        for n, c in w.coeffs.items():
            a, b = decompose_by_generator(c, odd_in)
            alpha[n], beta[n] = a.to(tsig), b.to(tsig)
        first, second = hori_matrix(alpha, beta)
        e = tsig.gen(odd_out)
        out: dict[int, GradedElement] = dict(first)
        for n, c in second.items():
            out[n] = out[n] + e * c if n in out else e * c
        return LaurentElement(tgt, out, w.shift - 1)

    def pair_components(self, w: LaurentElement) -> tuple[dict, dict]:
        """``(alpha, beta)`` series of an element of Ĝ_L or Ĝ_R, over the base algebra."""
        if w.context == self.hat_G_L:
            odd = "e1L"
        elif w.context == self.hat_G_R:
            odd = "e1R"
        else:
            raise AlgebraError("element is not in Ĝ_L or Ĝ_R")
        base = self.tower.A.signature
        first, second = {}, {}
        for n, c in w.coeffs.items():
            a, b = decompose_by_generator(c, odd)
            if a:
                first[n] = a.to(base)
            if b:
                second[n] = b.to(base)
        return first, second
