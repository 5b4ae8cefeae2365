"""Seeded random generators for property checks.

Everything takes an explicit :class:`random.Random` so runs are reproducible
from a single integer seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from .algebra import GradedElement, Monomial, Signature, make_algebra
from .dgca import FreeDGCA
from .laurent import LaurentContext, LaurentElement
from .qseries import QSeries
from .tduality import TDualityConfig

__all__ = [
    "monomials_of_degree",
    "random_coefficient",
    "random_config",
    "random_element",
    "random_homogeneous",
    "random_laurent",
    "random_qseries",
]


def random_coefficient(rng: random.Random, bound: int = 5, rational: bool = True) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, 3) if rational else 1
    return Fraction(num, den)


@lru_cache(maxsize=None)
def _monomials(sig: Signature, degree: int, start: int) -> tuple[Monomial, ...]:
    if degree == 0:
        return ((),)
    out = []
    for pos in range(start, len(sig.generators)):
        g = sig.generators[pos]
        if g.invertible or g.degree <= 0:
            continue
        top = 1 if g.odd else degree // g.degree
        for e in range(1, top + 1):
            rest = degree - e * g.degree
            if rest < 0:
                break
            for tail in _monomials(sig, rest, pos + 1):
                out.append(((pos, e),) + tail)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_of_degree(sig: Signature, degree: int, avoid: str | None = None) -> tuple[Monomial, ...]:
    """All normal-form monomials of a given degree.

    Invertible and degree-0 generators are skipped, as is ``avoid``.
    """
    if degree < 0:
        return ()
    pool = _monomials(sig, degree, 0)
    if avoid is None:
        return pool
    o = sig[avoid].ordinal
    return tuple(m for m in pool if all(f[0] != o for f in m))


def random_homogeneous(sig: Signature, degree: int, rng: random.Random,
                       terms: int = 3, bound: int = 5, avoid: str | None = None) -> GradedElement:
    """Random element of one degree with at most ``terms`` monomials (zero if none exist)."""
    pool = monomials_of_degree(sig, degree, avoid)
    if not pool:
        return sig.zero()
    picks = rng.sample(pool, min(terms, len(pool)))
    return GradedElement(sig, {m: random_coefficient(rng, bound) for m in picks})


def random_element(sig: Signature, rng: random.Random, max_degree: int = 6,
                   terms: int = 4, avoid: str | None = None) -> GradedElement:
    """Random, usually inhomogeneous, element of degree at most ``max_degree``."""
    out = sig.zero()
    for _ in range(rng.randint(1, terms)):
        out = out + random_homogeneous(sig, rng.randint(0, max_degree), rng, terms=1,
                                       avoid=avoid)
    return out


def random_config(rng: random.Random, name: str = "f") -> TDualityConfig:
    """A small random T-duality configuration.

    The target has closed generators ``a1, b1, p2, q2, h3``, a generator
    ``m2`` whose differential is a random closed 3-form, and ``y3`` whose
    differential is forced to be ``fxL*fxR``.
    """
    sig = make_algebra([("a1", 1), ("b1", 1), ("p2", 2), ("q2", 2), ("h3", 3),
                        ("m2", 2), ("y3", 3)])
    a1, b1, p2, q2, h3, m2, y3 = (sig.gen(n) for n in sig.names)
    closed2 = [p2, q2, a1 * b1]
    closed3 = [h3, a1 * p2, b1 * q2, a1 * q2]

    def combo(pool):
        return sum((rng.randint(-2, 2) * x for x in pool), sig.zero())

    fxL = combo(closed2)
    fxR = combo(closed2)
    dm2 = combo(closed3)
    A = FreeDGCA(sig, {"m2": dm2, "y3": fxL * fxR}, f"A{rng.randint(0, 10**6)}")
    fy = y3 + combo(closed3) + rng.randint(-2, 2) * dm2
    return TDualityConfig(A, fxL, fxR, fy, name)


def random_laurent(ctx: LaurentContext, rng: random.Random, span: int = 8,
                   max_terms: int = 5, max_degree: int = 6,
                   degree: int | None = None) -> LaurentElement:
    """Random finite-support element with indices in ``[-span, span]``.

    With ``degree`` set the result is homogeneous of that total degree.
    """
    sig = ctx.signature
    coeffs: dict[int, GradedElement] = {}
    for n in rng.sample(range(-span, span + 1), rng.randint(1, max_terms)):
        if degree is None:
            c = random_element(sig, rng, max_degree=max_degree, terms=3, avoid=ctx.xi)
        else:
            c = random_homogeneous(sig, degree + 2 * n, rng, avoid=ctx.xi)
        if c:
            coeffs[n] = c
    return ctx.element(coeffs)


def random_qseries(ring: FreeDGCA, rng: random.Random, low: int, high: int,
                   degree: int = 0, density: float = 0.6) -> QSeries:
    """Random q-expansion on ``[low, high]`` with coefficients of one degree."""
    coeffs = {}
    for n in range(low, high + 1):
        if rng.random() < density:
            c = random_homogeneous(ring.signature, degree, rng, terms=2)
            if c:
                coeffs[n] = c
    return QSeries(ring, coeffs, high, degree)
