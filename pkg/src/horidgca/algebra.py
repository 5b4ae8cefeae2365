"""Free graded-commutative algebras over the rationals.

An algebra is fixed by a :class:`Signature`, an ordered list of named
generators with positive degrees.  Elements are finite rational linear
combinations of monomials kept in a canonical normal form: factors sorted by
the generator order, odd generators with exponent one, zero coefficients
dropped.  Multiplication applies the Koszul sign rule, so two odd factors
anticommute and every odd generator squares to zero.

Even generators may be declared *invertible*; their exponents may then be
negative.  This is how formal variables such as ``u`` in ``A0[u^-1, u]`` are
modelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "ANY_DEGREE",
    "INHOMOGENEOUS",
    "AlgebraError",
    "Generator",
    "GradedElement",
    "Monomial",
    "Signature",
    "decompose_by_generator",
    "degree_of",
    "make_algebra",
    "multiply",
]

ANY_DEGREE = "any degree"
INHOMOGENEOUS = "inhomogeneous"

# A monomial is a tuple of (ordinal, exponent) pairs, strictly increasing in
# ordinal, with nonzero exponents.
Monomial = tuple[tuple[int, int], ...]
Scalar = Union[int, Fraction]

ONE: Monomial = ()


class AlgebraError(ValueError):
    """Raised on malformed presentations or mismatched operands."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    ordinal: int
    invertible: bool = False

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class Signature:
    """Ordered generator list that fixes the normal form of all elements."""

    __slots__ = ("generators", "_index", "_key", "_hash")

    def __init__(self, generators: Iterable[Generator]):
        gens = tuple(generators)
        index: dict[str, Generator] = {}
        for pos, g in enumerate(gens):
            if g.name in index:
                raise AlgebraError(f"duplicate generator name {g.name!r}")
            if g.ordinal != pos:
                raise AlgebraError(f"generator {g.name!r} has ordinal {g.ordinal}, expected {pos}")
            if g.degree < 0:
                raise AlgebraError(f"generator {g.name!r} has negative degree {g.degree}")
            if g.invertible and g.odd:
                raise AlgebraError(f"odd generator {g.name!r} cannot be invertible")
            index[g.name] = g
        self.generators = gens
        self._index = index
        self._key = tuple((g.name, g.degree, g.invertible) for g in gens)
        self._hash = hash(self._key)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.generators)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Generator:
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Signature):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"Signature({inner})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def extend(self, name: str, degree: int, invertible: bool = False) -> "Signature":
        """Return a new signature with one generator appended."""
        if degree < 1:
            raise AlgebraError(f"generator {name!r} must have positive degree, got {degree}")
        return Signature(self.generators + (Generator(name, degree, len(self), invertible),))

    def without(self, names: Iterable[str]) -> "Signature":
        drop = set(names)
        kept = [g for g in self.generators if g.name not in drop]
        return Signature(Generator(g.name, g.degree, i, g.invertible) for i, g in enumerate(kept))

    # -- element constructors -------------------------------------------------

    def zero(self) -> "GradedElement":
        return GradedElement(self, {})

    def one(self) -> "GradedElement":
        return GradedElement(self, {ONE: Fraction(1)})

    def scalar(self, c: Scalar) -> "GradedElement":
        return GradedElement(self, {ONE: Fraction(c)})

    def gen(self, name: str) -> "GradedElement":
        g = self[name]
        return GradedElement(self, {((g.ordinal, 1),): Fraction(1)})

    def gens(self, *names: str) -> tuple["GradedElement", ...]:
        return tuple(self.gen(n) for n in names)

    def monomial_degree(self, m: Monomial) -> int:
        gens = self.generators
        return sum(gens[o].degree * e for o, e in m)


def make_algebra(
    generators: Sequence[tuple[str, int]],
    *,
    invertible: Iterable[str] = (),
    allow_degree_zero: bool = False,
) -> Signature:
    """Build a signature from ``(name, degree)`` pairs.

    ``allow_degree_zero`` admits degree-0 formal symbols (used for opaque
    coefficient functions); otherwise degrees must be positive.
    """
    inv = set(invertible)
    gens = []
    for pos, (name, degree) in enumerate(generators):
        if not isinstance(degree, int) or degree < (0 if allow_degree_zero else 1):
            raise AlgebraError(f"generator {name!r} has nonpositive degree {degree}")
        gens.append(Generator(name, degree, pos, name in inv))
    unknown = inv - {n for n, _ in generators}
    if unknown:
        raise AlgebraError(f"invertible names not among generators: {sorted(unknown)}")
    return Signature(gens)


def _mul_monomials(sig: Signature, a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    """Multiply two normal-form monomials; returns (sign, monomial), sign 0 if it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    gens = sig.generators
    # odd_after[i]: number of odd factors in a[i:]
    odd_after = [0] * (len(a) + 1)
    for i in range(len(a) - 1, -1, -1):
        odd_after[i] = odd_after[i + 1] + (gens[a[i][0]].degree & 1)
    out = []
    swaps = 0
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        oa, ea = a[i]
        ob, eb = b[j]
        if oa < ob:
            out.append(a[i])
            i += 1
        elif ob < oa:
            if gens[ob].degree & 1:
                swaps += odd_after[i]
            out.append(b[j])
            j += 1
        else:
            if gens[oa].degree & 1:
                return 0, ONE
            e = ea + eb
            if e:
                out.append((oa, e))
            i += 1
            j += 1
    if i < la:
        out.extend(a[i:])
    if j < lb:
        out.extend(b[j:])
    return (-1 if swaps & 1 else 1), tuple(out)


class GradedElement:
    """Immutable element of a free graded-commutative algebra."""

    __slots__ = ("signature", "_terms", "_hash")

    def __init__(self, signature: Signature, terms: Mapping[Monomial, Scalar] | None = None):
        self.signature = signature
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = c if type(c) is Fraction else Fraction(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, signature: Signature, terms: dict) -> "GradedElement":
        # caller guarantees normal form and nonzero Fraction coefficients
        obj = cls.__new__(cls)
        obj.signature = signature
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection -----------------------------------------------------------

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def monomials(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_scalar(self) -> bool:
        return all(m == ONE for m in self._terms)

    def scalar_value(self) -> Fraction:
        if not self.is_scalar():
            raise AlgebraError(f"{self} is not a scalar")
        return self._terms.get(ONE, Fraction(0))

    def contains(self, name: str) -> bool:
        """True if some monomial involves generator ``name``."""
        if name not in self.signature:
            return False
        o = self.signature[name].ordinal
        return any(any(f[0] == o for f in m) for m in self._terms)

    def degree(self) -> int | str:
        return degree_of(self)

    def homogeneous_components(self) -> dict[int, "GradedElement"]:
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            parts.setdefault(self.signature.monomial_degree(m), {})[m] = c
        return {k: GradedElement._raw(self.signature, v) for k, v in sorted(parts.items())}

    def renormalize(self) -> "GradedElement":
        """Rebuild the element by multiplying out every monomial from scratch."""
        sig = self.signature
        out = sig.zero()
        for m, c in self._terms.items():
            term = sig.scalar(c)
            for o, e in m:
                term = term * sig.gen(sig.generators[o].name) ** e
            out = out + term
        return out

    def to(self, signature: Signature) -> "GradedElement":
        """Re-express in another signature by generator name."""
        if signature == self.signature:
            return self if signature is self.signature else GradedElement._raw(signature, self._terms)
        src = self.signature.generators
        terms: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            mapped = []
            for o, e in m:
                g = src[o]
                if g.name not in signature:
                    raise AlgebraError(f"generator {g.name!r} does not exist in {signature!r}")
                tg = signature[g.name]
                if tg.degree != g.degree:
                    raise AlgebraError(f"generator {g.name!r} changes degree")
                mapped.append((tg.ordinal, e, g.degree & 1))
            # sign of the sorting permutation restricted to odd factors
            inv = 0
            for x in range(len(mapped)):
                if mapped[x][2]:
                    for y in range(x + 1, len(mapped)):
                        if mapped[y][2] and mapped[y][0] < mapped[x][0]:
                            inv += 1
            key = tuple((o, e) for o, e, _ in sorted(mapped))
            val = terms.get(key, 0) + (-c if inv & 1 else c)
            if val:
                terms[key] = val
            else:
                terms.pop(key, None)
        return GradedElement._raw(signature, terms)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "GradedElement":
        if isinstance(other, GradedElement):
            if other.signature != self.signature:
                raise AlgebraError(
                    f"signature mismatch: {self.signature!r} vs {other.signature!r}"
                )
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return self.signature.scalar(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                del terms[m]
        return GradedElement._raw(self.signature, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement._raw(self.signature, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            c = Fraction(other)
            if not c:
                return self.signature.zero()
            return GradedElement._raw(self.signature, {m: v * c for m, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        sig = self.signature
        terms: dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                s, m = _mul_monomials(sig, ma, mb)
                if not s:
                    continue
                v = terms.get(m, 0) + (ca * cb if s > 0 else -(ca * cb))
                if v:
                    terms[m] = v
                else:
                    del terms[m]
        return GradedElement._raw(sig, terms)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self._inverse() ** (-n)
        result = self.signature.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _inverse(self) -> "GradedElement":
        if len(self._terms) != 1:
            raise AlgebraError(f"cannot invert {self}")
        (m, c), = self._terms.items()
        gens = self.signature.generators
        if any(not gens[o].invertible for o, _ in m):
            raise AlgebraError(f"cannot invert {self}: non-invertible generator")
        return GradedElement._raw(self.signature, {tuple((o, -e) for o, e in m): 1 / c})

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedElement):
            return self.signature == other.signature and self._terms == other._terms
        if isinstance(other, (int, Fraction, Rational)):
            if not other:
                return not self._terms
            return self._terms == {ONE: Fraction(other)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.signature, frozenset(self._terms.items())))
        return self._hash

    # -- rendering ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        sig = self.signature
        return sorted(self._terms.items(), key=lambda mc: (sig.monomial_degree(mc[0]), mc[0]))

    def render_monomial(self, m: Monomial) -> str:
        gens = self.signature.generators
        parts = []
        for o, e in m:
            name = gens[o].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            mono = self.render_monomial(m)
            if not mono:
                body = _fmt_scalar(a)
            elif a == 1:
                body = mono
            else:
                body = f"{_fmt_scalar(a)}*{mono}"
            if idx == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f" - {body}" if neg else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"GradedElement({self})"


def _fmt_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def multiply(a: GradedElement, b: GradedElement) -> GradedElement:
    if a.signature != b.signature:
        raise AlgebraError(f"signature mismatch: {a.signature!r} vs {b.signature!r}")
    return a * b


def degree_of(a: GradedElement) -> int | str:
    """Common degree of all terms, ``ANY_DEGREE`` for zero, ``INHOMOGENEOUS`` otherwise."""
    degs = {a.signature.monomial_degree(m) for m in a.monomials()}
    if not degs:
        return ANY_DEGREE
    if len(degs) > 1:
        return INHOMOGENEOUS
    return degs.pop()


def decompose_by_generator(a: GradedElement, g: str | Generator) -> tuple[GradedElement, GradedElement]:
    """Split ``a = alpha + g*beta`` with ``alpha`` and ``beta`` free of ``g``.

    ``beta`` absorbs the Koszul sign of moving ``g`` to the front, so that
    ``alpha + g*beta`` reproduces ``a`` exactly.
    """
    name = g.name if isinstance(g, Generator) else g
    sig = a.signature
    gen = sig[name]
    o = gen.ordinal
    alpha: dict[Monomial, Fraction] = {}
    beta: dict[Monomial, Fraction] = {}
    gens = sig.generators
    for m, c in a.terms():
        pos = next((i for i, f in enumerate(m) if f[0] == o), None)
        if pos is None:
            alpha[m] = c
            continue
        if m[pos][1] != 1:
            raise AlgebraError(
                f"generator {name!r} appears with exponent {m[pos][1]}; no binary decomposition"
            )
        rest = m[:pos] + m[pos + 1:]
        sign = 1
        if gen.odd:
            before = sum(gens[x].degree & 1 for x, _ in m[:pos])
            sign = -1 if before & 1 else 1
        beta[rest] = c if sign > 0 else -c
    return GradedElement._raw(sig, alpha), GradedElement._raw(sig, beta)
