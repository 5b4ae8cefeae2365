"""Rational T-duality for free differential graded-commutative algebras.

Given a T-duality configuration the package builds its gerbe tower and the
gerbe isomorphism between the two sides.  The graded Hori transforms act on
Laurent series over the gerbes and have q-series and Jacobi-form shadows.
"""

from .algebra import AlgebraError, GradedElement, Signature, make_algebra
from .dgca import (
    CocycleExtension,
    DgcaMorphism,
    FreeDGCA,
    Report,
    check_d_squared,
    check_morphism,
    extend_by_cocycle,
    extend_morphism,
    projection_pi,
    section_e,
)
from .laurent import GradedHori, LaurentContext, LaurentElement, xi_derivative
from .qseries import (
    JacobiElement,
    QPair,
    QSeries,
    hori_on_qpairs,
    jacobi_hori,
    mu,
    mu_inverse,
    q_log_derivative,
    transported_hori,
)
from .tduality import (
    GerbeTower,
    TDualityConfig,
    build_gerbe_tower,
    classifying_algebra,
    hofib_cyc_backward,
    hofib_cyc_forward,
    nu,
    nu_inv,
    swapped_config,
    universal_config,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraError", "CocycleExtension", "DgcaMorphism", "FreeDGCA", "GerbeTower",
    "GradedElement", "GradedHori", "JacobiElement", "LaurentContext", "LaurentElement",
    "QPair", "QSeries", "Report", "Signature", "TDualityConfig", "build_gerbe_tower",
    "check_d_squared", "check_morphism", "classifying_algebra", "extend_by_cocycle",
    "extend_morphism", "hofib_cyc_backward", "hofib_cyc_forward", "hori_on_qpairs",
    "jacobi_hori", "make_algebra", "mu", "mu_inverse", "nu", "nu_inv", "projection_pi",
    "q_log_derivative", "section_e", "swapped_config", "transported_hori",
    "universal_config", "xi_derivative",
]
