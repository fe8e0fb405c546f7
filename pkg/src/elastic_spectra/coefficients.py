"""Counting-function and heat-trace coefficient formulas.

Two families of second-term counting coefficients coexist here as
first-class, tagged values:

* ``NonIntegral`` - closed-form brackets for all four boundary conditions,
  with exact mirror symmetry between Dirichlet/free and DF/FD.
* ``IntegralSaVa`` - the integral-bearing expressions for Dirichlet and free
  conditions, involving the surface-wave root and an arctan integral.

The toolkit never prefers one family; adjudication happens downstream in
comparison reports.  Heat-trace coefficients for the mixed conditions and
the gamma-factor conversion between counting and heat normalizations close
the loop: converting the mixed counting coefficients reproduces the heat
coefficients identically.

Note on the mixed-condition bracket: the factor is ``(d - 3)``, consistent
under the gamma-factor conversion with the counting-side bracket.  One
widely printed statement of the heat coefficient spells the same factor with
a stray ``n``; it is read as the dimension ``d`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core import BoundaryCondition, LameParameters
from .errors import InputError
from .specfun import arctan_integral, gamma, rayleigh_root


class WeylFamily(Enum):
    """Provenance tag of a second-coefficient formula."""

    NON_INTEGRAL = "NonIntegral"
    INTEGRAL_SAVA = "IntegralSaVa"


@dataclass(frozen=True)
class WeylCoefficients:
    """Two-term counting coefficients ``(a0, a1)`` with their provenance."""

    a0: float
    a1: float
    bc: BoundaryCondition
    family: WeylFamily
    d: int

    def __post_init__(self):
        if not self.a0 > 0:
            raise InputError("a0 must be positive")
        if self.family is WeylFamily.INTEGRAL_SAVA and self.bc not in (
            BoundaryCondition.DIRICHLET,
            BoundaryCondition.FREE,
        ):
            raise InputError("the integral family exists only for Dirichlet and free conditions")


@dataclass(frozen=True)
class HeatCoefficients:
    """Leading heat-trace coefficients ``(b0, b1)`` per unit volume/boundary."""

    b0: float
    b1: float
    bc: BoundaryCondition
    d: int

    def __post_init__(self):
        if not self.b0 > 0:
            raise InputError("b0 must be positive")


def _check_d(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise InputError(f"dimension must be an integer >= 2, got {d!r}")


def leading_coefficient(d: int, params: LameParameters) -> float:
    """First Weyl coefficient per unit volume.

    ``a0 = [(d-1)/mu^{d/2} + 1/(lam+2mu)^{d/2}] / ((4 pi)^{d/2} Gamma(1 + d/2))``.
    """
    _check_d(d)
    bracket = (d - 1) / params.mu ** (d / 2.0) + params.pressure_modulus ** (-d / 2.0)
    return bracket / ((4.0 * math.pi) ** (d / 2.0) * gamma(1.0 + d / 2.0))


def _second_prefactor(d: int) -> float:
    return 1.0 / (2.0 ** (d + 1) * math.pi ** ((d - 1) / 2.0) * gamma((d + 1) / 2.0))


def second_coefficient(bc: BoundaryCondition, d: int, params: LameParameters) -> float:
    """Closed-form (NonIntegral family) second coefficient per unit boundary.

    Dirichlet/free use the bracket ``(d-1)/mu^{(d-1)/2} + 1/(lam+2mu)^{(d-1)/2}``
    with sign -/+; the mixed DF/FD conditions use ``(d-3)`` in place of
    ``(d-1)`` with sign -/+.
    """
    _check_d(d)
    if not bc.is_elastic:
        raise InputError(f"no second coefficient for {bc.value}")
    p = (d - 1) / 2.0
    prefactor = _second_prefactor(d)
    if bc in (BoundaryCondition.DIRICHLET, BoundaryCondition.FREE):
        bracket = (d - 1) / params.mu ** p + params.pressure_modulus ** (-p)
        sign = -1.0 if bc is BoundaryCondition.DIRICHLET else 1.0
    else:
        bracket = (d - 3) / params.mu ** p + params.pressure_modulus ** (-p)
        sign = float(bc.sign)
    return sign * prefactor * bracket


def second_coefficient_sava(
    bc: BoundaryCondition, d: int, params: LameParameters
) -> float:
    """Integral-family (IntegralSaVa) second coefficient per unit boundary.

    Defined for Dirichlet and free conditions with speed ratio
    ``alpha = mu/(lam+2mu)`` in (0, 1]; larger ratios are rejected rather
    than analytically continued.  The free expression additionally carries
    the ``4 gamma_R^{1-d}`` surface-wave term, so it requires ``alpha < 1``.
    """
    _check_d(d)
    if bc not in (BoundaryCondition.DIRICHLET, BoundaryCondition.FREE):
        raise InputError("the integral family exists only for Dirichlet and free conditions")
    alpha = params.alpha
    if alpha > 1.0:
        raise InputError(f"integral family needs alpha <= 1, got alpha={alpha}")
    p = (d - 1) / 2.0
    prefactor = params.mu ** (-p) * _second_prefactor(d)
    if bc is BoundaryCondition.DIRICHLET:
        integral = arctan_integral(d, alpha, "dirichlet")
        bracket = alpha ** p + (d - 1) + (4.0 * (d - 1) / math.pi) * integral
        return -prefactor * bracket
    integral = arctan_integral(d, alpha, "free")
    gamma_r = rayleigh_root(alpha).gamma_r
    bracket = (
        alpha ** p
        + (d - 5)
        + 4.0 * gamma_r ** (1 - d)
        + (4.0 * (d - 1) / math.pi) * integral
    )
    return prefactor * bracket


def heat_coefficients(
    bc: BoundaryCondition, d: int, params: LameParameters
) -> HeatCoefficients:
    """Leading heat-trace coefficients for the mixed DF/FD conditions.

    ``b0 = (d-1)/(4 pi mu)^{d/2} + 1/(4 pi (2mu+lam))^{d/2}`` and
    ``b1 = sign/4 * [(d-3)/(4 pi mu)^{(d-1)/2} + 1/(4 pi (2mu+lam))^{(d-1)/2}]``
    with sign -1 for DF and +1 for FD.
    """
    _check_d(d)
    if not bc.is_mixed:
        raise InputError(f"heat coefficients are provided for DF/FD only, not {bc.value}")
    four_pi = 4.0 * math.pi
    b0 = (d - 1) / (four_pi * params.mu) ** (d / 2.0) + (
        four_pi * params.pressure_modulus
    ) ** (-d / 2.0)
    p = (d - 1) / 2.0
    bracket = (d - 3) / (four_pi * params.mu) ** p + (four_pi * params.pressure_modulus) ** (-p)
    b1 = bc.sign * 0.25 * bracket
    return HeatCoefficients(b0=b0, b1=b1, bc=bc, d=d)


def counting_to_heat(a0: float, a1: float, d: int) -> tuple:
    """Gamma-factor conversion from counting to heat-trace coefficients.

    ``b0 = Gamma(1 + d/2) a0`` and ``b1 = Gamma(1 + (d-1)/2) a1``.
    """
    _check_d(d)
    return gamma(1.0 + d / 2.0) * a0, gamma(1.0 + (d - 1) / 2.0) * a1


def make_weyl_coefficients(
    bc: BoundaryCondition,
    d: int,
    params: LameParameters,
    family: WeylFamily = WeylFamily.NON_INTEGRAL,
) -> WeylCoefficients:
    """Bundle ``(a0, a1)`` for the requested family into a tagged value."""
    a0 = leading_coefficient(d, params)
    if family is WeylFamily.NON_INTEGRAL:
        a1 = second_coefficient(bc, d, params)
    else:
        a1 = second_coefficient_sava(bc, d, params)
    return WeylCoefficients(a0=a0, a1=a1, bc=bc, family=family, d=d)
