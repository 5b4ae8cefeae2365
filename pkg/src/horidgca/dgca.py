"""Free DGCAs, their morphisms, and extensions that kill a cocycle."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .algebra import (
    ANY_DEGREE,
    AlgebraError,
    Generator,
    GradedElement,
    Monomial,
    Signature,
    decompose_by_generator,
    degree_of,
)

__all__ = [
    "CocycleExtension",
    "DgcaMorphism",
    "FreeDGCA",
    "Report",
    "ShiftedElement",
    "check_d_squared",
    "check_morphism",
    "differential",
    "extend_by_cocycle",
    "extend_morphism",
    "projection_pi",
    "section_e",
]


@dataclass(frozen=True)
class Report:
    """Outcome of one verification check."""

    check: str
    algebra: str
    status: str
    witness: str | None = None
    detail: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        out = {"check": self.check, "algebra": self.algebra, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail is not None:
            out["detail"] = self.detail
        return out

    def __str__(self) -> str:
        line = f"{self.status.upper():4} {self.check} [{self.algebra}]"
        if self.witness is not None:
            line += f" witness={self.witness}"
        if self.detail:
            line += f" ({self.detail})"
        return line


def _as_element(sig: Signature, value) -> GradedElement:
    if isinstance(value, GradedElement):
        if value.signature != sig:
            return value.to(sig)
        return value
    return sig.scalar(Fraction(value))


class FreeDGCA:
    """A free graded-commutative algebra with a differential on generators.

    Generators missing from ``diff`` have zero differential.  Image degrees
    are validated on construction; ``d^2 = 0`` is not, see
    :func:`check_d_squared`.
    """

    def __init__(self, signature: Signature, diff: Mapping[str, object] | None = None, name: str = ""):
        self.signature = signature
        self.name = name or "A"
        images: dict[str, GradedElement] = {}
        diff = dict(diff or {})
        for key in diff:
            if key not in signature:
                raise AlgebraError(f"differential given for unknown generator {key!r}")
        for g in signature:
            img = _as_element(signature, diff.get(g.name, 0))
            deg = degree_of(img)
            if deg != ANY_DEGREE and deg != g.degree + 1:
                raise AlgebraError(
                    f"d({g.name}) has degree {deg}, expected {g.degree + 1}"
                )
            images[g.name] = img
        self._diff = images
        self._cache: dict[Monomial, GradedElement] = {}

    def __repr__(self) -> str:
        return f"FreeDGCA({self.name}: {', '.join(f'{g.name}:{g.degree}' for g in self.signature)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeDGCA):
            return NotImplemented
        return self.signature == other.signature and self._diff == other._diff

    def __hash__(self) -> int:
        return hash(self.signature)

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self.signature.generators

    def gen(self, name: str) -> GradedElement:
        return self.signature.gen(name)

    def element(self, value) -> GradedElement:
        return _as_element(self.signature, value)

    def d_of(self, name: str) -> GradedElement:
        """Differential of a single generator."""
        self.signature[name]
        return self._diff[name]

    def differential(self, a: GradedElement) -> GradedElement:
        if a.signature != self.signature:
            raise AlgebraError(f"element of {a.signature!r} is not in {self.name}")
        out = self.signature.zero()
        for m, c in a.terms():
            dm = self._cache.get(m)
            if dm is None:
                dm = self._d_monomial(m)
                self._cache[m] = dm
            if dm:
                out = out + dm * c
        return out

    d = differential

    def _d_monomial(self, m: Monomial) -> GradedElement:
        sig = self.signature
        gens = sig.generators
        factors = [sig.gen(gens[o].name) ** e for o, e in m]
        out = sig.zero()
        prefix = sig.one()
        prefix_deg = 0
        for i, (o, e) in enumerate(m):
            g = gens[o]
            dg = self._diff[g.name]
            if dg:
                # d(x^e) = e x^(e-1) dx, valid for odd x (e = 1) and invertible x
                piece = dg if e == 1 else (sig.gen(g.name) ** (e - 1)) * dg * e
                suffix = sig.one()
                for f in factors[i + 1:]:
                    suffix = suffix * f
                term = prefix * piece * suffix
                out = out + (-term if prefix_deg & 1 else term)
            prefix = prefix * factors[i]
            prefix_deg += g.degree * e
        return out

    def extended_by(self, name: str, degree: int, d_value, *, invertible: bool = False,
                    algebra_name: str = "") -> "FreeDGCA":
        sig = self.signature.extend(name, degree, invertible)
        diff = {g: v.to(sig) for g, v in self._diff.items()}
        diff[name] = _as_element(sig, d_value)
        return FreeDGCA(sig, diff, algebra_name or f"{self.name}[{name}]")

    def describe(self) -> list[str]:
        """Generator list and differential as text lines."""
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.signature)
        lines = [f"{self.name} = K[{gens}]"]
        for g in self.signature:
            lines.append(f"  d {g.name} = {self._diff[g.name]}")
        return lines

    def check_d_squared(self) -> Report:
        return check_d_squared(self)


def differential(A: FreeDGCA, a: GradedElement) -> GradedElement:
    return A.differential(a)


def check_d_squared(A: FreeDGCA) -> Report:
    for g in A.signature:
        dd = A.differential(A.d_of(g.name))
        if dd:
            return Report("d_squared", A.name, "fail", g.name, f"d(d {g.name}) = {dd}")
    return Report("d_squared", A.name, "pass")


class DgcaMorphism:
    """Algebra map fixed by generator images; chain-map property checked on demand."""

    def __init__(self, source: FreeDGCA, target: FreeDGCA, images: Mapping[str, object], name: str = ""):
        self.source = source
        self.target = target
        self.name = name or "f"
        imgs = {}
        for key in images:
            if key not in source.signature:
                raise AlgebraError(f"image given for unknown generator {key!r}")
        for g in source.signature:
            if g.name not in images:
                raise AlgebraError(f"no image for generator {g.name!r}")
            imgs[g.name] = _as_element(target.signature, images[g.name])
        self.images = imgs
        self._cache: dict[Monomial, GradedElement] = {}

    @classmethod
    def identity(cls, A: FreeDGCA, name: str = "id") -> "DgcaMorphism":
        return cls(A, A, {g.name: A.gen(g.name) for g in A.signature}, name)

    @classmethod
    def inclusion(cls, source: FreeDGCA, target: FreeDGCA, name: str = "") -> "DgcaMorphism":
        """Send every generator to the same-named generator of ``target``."""
        return cls(source, target, {g.name: target.gen(g.name) for g in source.signature},
                   name or f"{source.name}->{target.name}")

    def __repr__(self) -> str:
        return f"DgcaMorphism({self.name}: {self.source.name} -> {self.target.name})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DgcaMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.images == other.images)

    __hash__ = None

    def __call__(self, a) -> GradedElement:
        return self.apply(a)

    def apply(self, a) -> GradedElement:
        a = _as_element(self.source.signature, a) if not isinstance(a, GradedElement) else a
        if a.signature != self.source.signature:
            raise AlgebraError(f"element is not in the source {self.source.name}")
        tgt = self.target.signature
        out = tgt.zero()
        gens = self.source.signature.generators
        for m, c in a.terms():
            img = self._cache.get(m)
            if img is None:
                img = tgt.one()
                for o, e in m:
                    img = img * self.images[gens[o].name] ** e
                self._cache[m] = img
            out = out + img * c
        return out

    def compose(self, first: "DgcaMorphism") -> "DgcaMorphism":
        """``self ∘ first``."""
        if first.target != self.source:
            raise AlgebraError("morphisms are not composable")
        return DgcaMorphism(first.source, self.target,
                            {g: self.apply(v) for g, v in first.images.items()},
                            f"{self.name}∘{first.name}")

    def check(self) -> Report:
        return check_morphism(self)


def check_morphism(m: DgcaMorphism) -> Report:
    label = f"{m.source.name}->{m.target.name}"
    for g in m.source.signature:
        img = m.images[g.name]
        deg = degree_of(img)
        if deg != ANY_DEGREE and deg != g.degree:
            return Report("morphism", label, "fail", g.name,
                          f"image has degree {deg}, expected {g.degree}")
    for g in m.source.signature:
        lhs = m.apply(m.source.d_of(g.name))
        rhs = m.target.differential(m.images[g.name])
        if lhs != rhs:
            return Report("morphism", label, "fail", g.name,
                          f"f(d {g.name}) = {lhs} but d f({g.name}) = {rhs}")
    return Report("morphism", label, "pass")


@dataclass(frozen=True, eq=False)
class CocycleExtension:
    base: FreeDGCA
    cocycle: GradedElement
    generator: Generator
    extended: FreeDGCA
    inclusion: DgcaMorphism = field(repr=False)

    @property
    def cocycle_degree(self) -> int:
        return self.generator.degree + 1

    @property
    def e(self) -> GradedElement:
        return self.extended.gen(self.generator.name)


def extend_by_cocycle(A: FreeDGCA, t, name: str, *, degree: int | None = None,
                      algebra_name: str = "") -> CocycleExtension:
    """Adjoin a generator ``name`` with ``d(name) = t``.

    ``t`` must be closed and homogeneous of degree at least 2; pass
    ``degree`` when ``t`` is zero.
    """
    t = A.element(t)
    deg = degree_of(t)
    if deg == ANY_DEGREE:
        if degree is None:
            raise AlgebraError("zero cocycle needs an explicit degree")
        deg = degree
    elif not isinstance(deg, int):
        raise AlgebraError(f"cocycle {t} is inhomogeneous")
    elif degree is not None and degree != deg:
        raise AlgebraError(f"cocycle {t} has degree {deg}, not {degree}")
    if deg < 2:
        raise AlgebraError(f"cocycle degree must be at least 2, got {deg}")
    dt = A.differential(t)
    if dt:
        raise AlgebraError(f"{t} is not closed: d = {dt}")
    ext = A.extended_by(name, deg - 1, t.to(A.signature.extend(name, deg - 1)),
                        algebra_name=algebra_name or f"{A.name}_{{{t}}}")
    inc = DgcaMorphism.inclusion(A, ext, f"{A.name}->{ext.name}")
    return CocycleExtension(A, t, ext.signature[name], ext, inc)


def extend_morphism(f: DgcaMorphism, source_ext: CocycleExtension,
                    target_ext: CocycleExtension) -> DgcaMorphism:
    """Extend ``f: (A, t) -> (B, s)`` to ``A_t -> B_s`` sending e_A to e_B."""
    if f.source != source_ext.base or f.target != target_ext.base:
        raise AlgebraError("morphism does not match the extension bases")
    if f.apply(source_ext.cocycle) != target_ext.cocycle:
        raise AlgebraError(
            f"f(t) = {f.apply(source_ext.cocycle)} differs from s = {target_ext.cocycle}"
        )
    tsig = target_ext.extended.signature
    images = {g: v.to(tsig) for g, v in f.images.items()}
    images[source_ext.generator.name] = target_ext.e
    return DgcaMorphism(source_ext.extended, target_ext.extended, images, f"{f.name}^")


@dataclass(frozen=True)
class ShiftedElement:
    """Element of ``A[s]``, where ``A[s]^k = A^(k+s)``."""

    underlying: GradedElement
    shift: int

    @property
    def degree(self) -> int | str:
        deg = degree_of(self.underlying)
        return deg - self.shift if isinstance(deg, int) else deg

    def differential(self, A: FreeDGCA) -> "ShiftedElement":
        d = A.differential(self.underlying)
        return ShiftedElement(-d if self.shift % 2 else d, self.shift)

    def __str__(self) -> str:
        return f"[{self.underlying}]_{{{self.shift}}}"


def projection_pi(E: CocycleExtension, a: GradedElement) -> ShiftedElement:
    """``alpha + e*beta  |->  beta`` in ``A[-n+1]``; needs an even cocycle degree."""
    n = E.cocycle_degree
    if n % 2:
        raise AlgebraError(f"projection needs an even cocycle degree, got {n}")
    a = E.extended.element(a)
    _, beta = decompose_by_generator(a, E.generator)
    return ShiftedElement(beta.to(E.base.signature), -(n - 1))


def section_e(E: CocycleExtension, b) -> GradedElement:
    """Left multiplication by the extension generator."""
    under = b.underlying if isinstance(b, ShiftedElement) else b
    if isinstance(under, GradedElement) and under.contains(E.generator.name):
        raise AlgebraError(f"{under} contains the extension generator")
    return E.e * E.extended.element(under)
