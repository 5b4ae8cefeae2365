"""Truncated q-series with graded coefficients and their Hori action.

A :class:`QSeries` stores ``sum_n f_n q^n`` for ``n <= order`` with
coefficients of a fixed degree in a coefficient DGCA ``A0``.  The maps
``mu(i, f) = xi^i f(u xi^-1)`` identify these with Laurent series over
``A = A0[u^-1, u]``, under which ``-q d/dq`` becomes ``d/dxi``.
:class:`JacobiElement` adds a weight tag to an expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .algebra import AlgebraError, GradedElement, decompose_by_generator, degree_of, make_algebra
from .dgca import FreeDGCA
from .laurent import GradedHori, LaurentContext, LaurentElement
from .tduality import TDualityConfig, build_gerbe_tower

__all__ = [
    "JacobiElement",
    "QPair",
    "QSeries",
    "hori_on_qpairs",
    "jacobi_hori",
    "laurent_base",
    "meromorphic_context",
    "mu",
    "mu_inverse",
    "q_log_derivative",
    "transported_hori",
    "with_symbols",
]


def with_symbols(A0: FreeDGCA, symbols: Iterable[str]) -> FreeDGCA:
    """Tensor ``A0`` with a polynomial ring on opaque degree-0 symbols."""
    gens = [(g.name, g.degree) for g in A0.signature] + [(s, 0) for s in symbols]
    sig = make_algebra(gens, allow_degree_zero=True)
    return FreeDGCA(sig, {g.name: A0.d_of(g.name).to(sig) for g in A0.signature},
                    f"{A0.name}(tau)")


def laurent_base(A0: FreeDGCA) -> FreeDGCA:
    """``A0[u^-1, u]`` with ``u`` even of degree 2 and ``d u = 0``."""
    if "u" in A0.signature:
        raise AlgebraError("'u' is reserved for the auxiliary variable")
    return A0.extended_by("u", 2, 0, invertible=True, algebra_name=f"{A0.name}[u^-1,u]")


def meromorphic_context(A0: FreeDGCA, xi: str = "xi") -> LaurentContext:
    """Bare ``A0[u^-1, u][[xi^-1, xi]]`` with ``d xi = 0``."""
    A = laurent_base(A0)
    return LaurentContext(A.extended_by(xi, 2, 0, algebra_name=f"{A.name}[[{xi}^-1,{xi}]]"), xi)


class QSeries:
    """Lower-bounded q-series known up to ``q^order``, homogeneous of one degree."""

    __slots__ = ("ring", "coeffs", "order", "degree")

    def __init__(self, ring: FreeDGCA, coeffs: Mapping[int, object], order: int, degree: int):
        self.ring = ring
        self.order = order
        self.degree = degree
        clean = {}
        for n, c in coeffs.items():
            n = int(n)
            if n > order:
                continue
            c = ring.element(c)
            if not c:
                continue
            d = degree_of(c)
            if d != degree:
                raise AlgebraError(f"coefficient of q^{n} has degree {d}, expected {degree}")
            clean[n] = c
        self.coeffs = clean

    @classmethod
    def monomial(cls, ring: FreeDGCA, n: int, coeff, order: int, degree: int | None = None) -> "QSeries":
        c = ring.element(coeff)
        if degree is None:
            degree = degree_of(c)
            if not isinstance(degree, int):
                raise AlgebraError("pass an explicit degree for a zero or inhomogeneous coefficient")
        return cls(ring, {n: c}, order, degree)

    @property
    def valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient; ``order + 1`` for the zero series."""
        return min(self.coeffs) if self.coeffs else self.order + 1

    def coefficient(self, n: int) -> GradedElement:
        if n > self.order:
            raise AlgebraError(f"q^{n} lies beyond the truncation order {self.order}")
        return self.coeffs.get(n, self.ring.signature.zero())

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.ring, self.coeffs, min(order, self.order), self.degree)

    def _check(self, other: "QSeries"):
        if other.ring != self.ring:
            raise AlgebraError("q-series over different coefficient rings")

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check(other)
        if other.degree != self.degree and self.coeffs and other.coeffs:
            raise AlgebraError("cannot add q-series of different degrees")
        order = min(self.order, other.order)
        coeffs = dict(self.coeffs)
        for n, c in other.coeffs.items():
            coeffs[n] = coeffs[n] + c if n in coeffs else c
        return QSeries(self.ring, coeffs, order, self.degree if self.coeffs else other.degree)

    def __neg__(self) -> "QSeries":
        return QSeries(self.ring, {n: -c for n, c in self.coeffs.items()}, self.order, self.degree)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(self.ring, {n: c * other for n, c in self.coeffs.items()}, self.order, self.degree)
        self._check(other)
        order = min(self.order + other.valuation, other.order + self.valuation)
        out: dict[int, GradedElement] = {}
        for n, a in self.coeffs.items():
            for m, b in other.coeffs.items():
                if n + m > order:
                    continue
                p = a * b
                if p:
                    out[n + m] = out[n + m] + p if n + m in out else p
        return QSeries(self.ring, out, order, self.degree + other.degree)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.ring == other.ring and self.order == other.order
                and self.coeffs == other.coeffs
                and (self.degree == other.degree or not self.coeffs))

    __hash__ = None

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality on the common truncation window."""
        self._check(other)
        window = min(self.order, other.order)
        keys = {n for n in (*self.coeffs, *other.coeffs) if n <= window}
        return all(self.coefficient(n) == other.coefficient(n) for n in keys)

    def __str__(self) -> str:
        parts = []
        for n in sorted(self.coeffs):
            c = self.coeffs[n]
            if n == 0:
                parts.append(str(c) if len(c) == 1 else f"({c})")
            elif c == 1:
                parts.append(f"q^{n}")
            else:
                parts.append(f"({c})*q^{n}")
        parts.append(f"O(q^{self.order + 1})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"QSeries({self}, degree={self.degree})"

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "n0": self.valuation if self.coeffs else None,
            "N": self.order,
            "coeffs": {str(n): str(self.coeffs[n]) for n in sorted(self.coeffs)},
        }


def q_log_derivative(f: QSeries) -> QSeries:
    """``-q d/dq``: ``f_n -> -n f_n``."""
    return QSeries(f.ring, {n: c * (-n) for n, c in f.coeffs.items()}, f.order, f.degree)


def _embed(c: GradedElement, ctx: LaurentContext) -> GradedElement:
    return c.to(ctx.signature)


def mu(i: int, f: QSeries, context: LaurentContext | None = None) -> LaurentElement:
    """``f(q) -> xi^i f(u xi^-1)``: ``f_n q^n`` becomes ``f_n u^n xi^(i-n)``, shift ``2i``.

    ``context`` must contain the generators of ``f.ring`` and an invertible
    ``u``; by default a bare meromorphic context is built.
    """
    ctx = context or meromorphic_context(f.ring)
    u = ctx.signature.gen("u")
    if not ctx.signature["u"].invertible:
        raise AlgebraError("context has no invertible 'u'")
    coeffs = {}
    for n, c in f.coeffs.items():
        coeffs[n - i] = _embed(c, ctx) * u ** n
    return LaurentElement(ctx, coeffs, 2 * i)


def mu_inverse(i: int, w: LaurentElement, ring: FreeDGCA, order: int, degree: int) -> QSeries:
    """Inverse of :func:`mu` on its image; raises when ``w`` is not in the image."""
    sig = w.context.signature
    uo = sig["u"].ordinal
    out: dict[int, GradedElement] = {}
    target = ring.signature
    for m_idx, c in w.coeffs.items():
        n = m_idx + i
        for mono, coef in c.terms():
            uexp = dict(mono).get(uo, 0)
            if uexp != n:
                raise AlgebraError(f"term {coef}*{c.render_monomial(mono)} at xi^{-m_idx} is not in the image of mu_{2 * i}")
            rest = tuple(f for f in mono if f[0] != uo)
            piece = GradedElement(sig, {rest: coef}).to(target)
            out[n] = out[n] + piece if n in out else piece
    return QSeries(ring, out, order, degree)


@dataclass(frozen=True)
class QPair:
    first: QSeries
    second: QSeries

    def __post_init__(self):
        if self.first.ring != self.second.ring:
            raise AlgebraError("pair components over different rings")

    def agrees_with(self, other: "QPair") -> bool:
        return self.first.agrees_with(other.first) and self.second.agrees_with(other.second)

    def to_dict(self) -> dict:
        return {"first": self.first.to_dict(), "second": self.second.to_dict()}


def hori_on_qpairs(p: QPair) -> QPair:
    """The antidiagonal matrix ``(0 1; -q d/dq 0)``."""
    return QPair(p.second, q_log_derivative(p.first))


def transported_hori(p: QPair, cfg: TDualityConfig, direction: str = "LR",
                     hori: GradedHori | None = None) -> QPair:
    """Push ``p`` into the Laurent gerbe over ``A0[u^-1, u]``, apply the Hori map, pull back.

    ``cfg`` is a configuration on ``A0 = p.first.ring``; it is composed with
    ``A0 -> A0[u^-1, u]`` before building the tower.
    """
    A0 = p.first.ring
    if cfg.target != A0:
        raise AlgebraError("configuration does not live on the coefficient ring")
    if hori is None:
        hori = GradedHori(build_gerbe_tower(induced_config(cfg)))
    if direction == "LR":
        src, odd_in, odd_out, apply = hori.hat_G_L, "e1L", "e1R", hori.hori_LR
    elif direction == "RL":
        src, odd_in, odd_out, apply = hori.hat_G_R, "e1R", "e1L", hori.hori_RL
    else:
        raise ValueError(f"direction must be 'LR' or 'RL', got {direction!r}")
    eo = src.signature.gen(odd_in)
    w = mu(0, p.first, src) + eo * mu(0, p.second, src)
    image = apply(w)
    tgt = image.context
    first, second = {}, {}
    for n, c in image.coeffs.items():
        a, b = decompose_by_generator(c, odd_out)
        if a:
            first[n] = a
        if b:
            second[n] = b
    out1 = mu_inverse(0, LaurentElement(tgt, first), A0, p.second.order, p.second.degree)
    out2 = mu_inverse(-1, LaurentElement(tgt, second), A0, p.first.order, p.first.degree)
    return QPair(out1, out2)


def induced_config(cfg: TDualityConfig) -> TDualityConfig:
    """The configuration ``C -> A0 -> A0[u^-1, u]``."""
    A = laurent_base(cfg.target)
    return TDualityConfig(A, cfg.fxL.to(A.signature), cfg.fxR.to(A.signature),
                          cfg.fy.to(A.signature), cfg.name)


@dataclass(frozen=True)
class JacobiElement:
    """A q-expansion tagged with a weight; modularity is not checked."""

    weight: int
    expansion: QSeries

    def __mul__(self, other: "JacobiElement") -> "JacobiElement":
        return JacobiElement(self.weight + other.weight, self.expansion * other.expansion)

    def __add__(self, other: "JacobiElement") -> "JacobiElement":
        if other.weight != self.weight:
            raise AlgebraError("cannot add Jacobi forms of different weights")
        return JacobiElement(self.weight, self.expansion + other.expansion)

    def derivation(self) -> "JacobiElement":
        """``-(1/2 pi i) d/dz = -q d/dq``, raising the weight by one."""
        return JacobiElement(self.weight + 1, q_log_derivative(self.expansion))

    def to_dict(self) -> dict:
        out = self.expansion.to_dict()
        out["weight"] = self.weight
        return out


def jacobi_hori(first: JacobiElement, second: JacobiElement) -> tuple[JacobiElement, JacobiElement]:
    """``(J1, J2)`` of weights ``(s1, s2)`` goes to ``(J2, D J1)`` of weights ``(s2, s1+1)``."""
    return second, first.derivation()
