"""Material parameters, flat domains, and the pointwise elastic operators.

Everything here is exact pointwise algebra on analytically supplied
derivatives: the producing modules (box/disk spectra) hand over closed-form
first and second partials, and this module applies the Navier operator, the
boundary traction, and the four boundary-condition residuals.  No numerical
differentiation happens anywhere, so residuals certify fields rather than
finite-difference noise.

All domains are flat (Euclidean); the curvature term of the general operator
is identically zero here and is not represented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ContractViolation, InputError, UnsupportedDimensionError

#: Default absolute tolerance under which a residual counts as "vanished".
RESIDUAL_TOL = 1e-9

_UNIT_NORMAL_TOL = 1e-12


@dataclass(frozen=True)
class LameParameters:
    """Isotropic material constants (first parameter and shear modulus).

    Construction enforces strong ellipticity: ``mu > 0`` and
    ``lam + 2*mu > 0``.  Note that ``lam + mu < 0`` is allowed.
    """

    lam: float
    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.mu)):
            raise InputError("Lame parameters must be finite")
        if not self.mu > 0.0:
            raise InputError(f"shear modulus must be positive, got mu={self.mu}")
        if not self.lam + 2.0 * self.mu > 0.0:
            raise InputError(
                f"strong ellipticity requires lam + 2*mu > 0, got {self.lam + 2.0 * self.mu}"
            )

    @property
    def pressure_modulus(self) -> float:
        """Squared-speed factor of the curl-free wave branch, ``lam + 2*mu``."""
        return self.lam + 2.0 * self.mu

    @property
    def alpha(self) -> float:
        """Squared speed ratio ``mu / (lam + 2*mu)``; finite and positive."""
        return self.mu / (self.lam + 2.0 * self.mu)

    def scaled(self, c: float) -> "LameParameters":
        """Jointly rescaled copy ``(c*lam, c*mu)``, ``c > 0``."""
        if not c > 0:
            raise InputError("scale factor must be positive")
        return LameParameters(c * self.lam, c * self.mu)


class BoundaryCondition(Enum):
    """The four elastic boundary conditions plus the scalar auxiliaries."""

    DIRICHLET = "Dirichlet"
    FREE = "Free"
    DF = "DF"
    FD = "FD"
    SCALAR_DIRICHLET = "ScalarDirichlet"
    SCALAR_NEUMANN = "ScalarNeumann"

    @property
    def is_elastic(self) -> bool:
        return self in (
            BoundaryCondition.DIRICHLET,
            BoundaryCondition.FREE,
            BoundaryCondition.DF,
            BoundaryCondition.FD,
        )

    @property
    def is_mixed(self) -> bool:
        return self in (BoundaryCondition.DF, BoundaryCondition.FD)

    @property
    def sign(self) -> int:
        """Mixed-condition sign: -1 for DF, +1 for FD; undefined otherwise."""
        if self is BoundaryCondition.DF:
            return -1
        if self is BoundaryCondition.FD:
            return +1
        raise InputError(f"sign is defined only for DF/FD, not {self.value}")

    @classmethod
    def parse(cls, text: str) -> "BoundaryCondition":
        key = text.strip().lower()
        for bc in cls:
            if bc.value.lower() == key:
                return bc
        aliases = {"dir": cls.DIRICHLET, "neumann": cls.SCALAR_NEUMANN}
        if key in aliases:
            return aliases[key]
        raise InputError(f"unknown boundary condition {text!r}")


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, optionally periodic per axis (flat cylinders/tori).

    Boundary measure counts only the faces of non-periodic axes.
    """

    lengths: tuple
    periodic: tuple = ()

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        periodic = tuple(bool(p) for p in self.periodic) if self.periodic else tuple(
            False for _ in lengths
        )
        if len(lengths) < 2:
            raise UnsupportedDimensionError("boxes need dimension >= 2")
        if any(not (x > 0 and math.isfinite(x)) for x in lengths):
            raise InputError("edge lengths must be positive and finite")
        if len(periodic) != len(lengths):
            raise InputError("periodic flags must match the number of axes")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "periodic", periodic)

    @property
    def dimension(self) -> int:
        return len(self.lengths)

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))

    @property
    def boundary_measure(self) -> float:
        total = 0.0
        for i, per in enumerate(self.periodic):
            if per:
                continue
            face = 1.0
            for j, L in enumerate(self.lengths):
                if j != i:
                    face *= L
            total += 2.0 * face
        return total


@dataclass(frozen=True)
class Disk:
    """Planar disk; only the two-dimensional case exists."""

    radius: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise InputError("disk radius must be positive and finite")

    @property
    def dimension(self) -> int:
        return 2

    @property
    def volume(self) -> float:
        return math.pi * self.radius ** 2

    @property
    def boundary_measure(self) -> float:
        return 2.0 * math.pi * self.radius


FlatDomain = Union[Box, Disk]


@dataclass(frozen=True)
class VectorFieldSample:
    """A vector field evaluated at one point, with analytic partials.

    ``first[a, b]`` holds the partial of component ``b`` along axis ``a``;
    ``second[a, b, c]`` holds the second partial of component ``c`` along
    axes ``a`` and ``b`` and must be symmetric in ``(a, b)``.  Either
    derivative block may be omitted when the consumer does not need it.
    """

    point: np.ndarray
    value: np.ndarray
    first: Optional[np.ndarray] = None
    second: Optional[np.ndarray] = None

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float)
        value = np.asarray(self.value, dtype=float)
        if point.ndim != 1 or value.shape != point.shape:
            raise InputError("point and value must be d-vectors of equal length")
        d = point.shape[0]
        object.__setattr__(self, "point", point)
        object.__setattr__(self, "value", value)
        if self.first is not None:
            first = np.asarray(self.first, dtype=float)
            if first.shape != (d, d):
                raise InputError(f"first derivatives must have shape ({d}, {d})")
            object.__setattr__(self, "first", first)
        if self.second is not None:
            second = np.asarray(self.second, dtype=float)
            if second.shape != (d, d, d):
                raise InputError(f"second derivatives must have shape ({d}, {d}, {d})")
            scale = max(1.0, float(np.max(np.abs(second))))
            if np.max(np.abs(second - np.swapaxes(second, 0, 1))) > 1e-10 * scale:
                raise ContractViolation(
                    "second derivatives must be symmetric in the differentiation indices"
                )
            object.__setattr__(self, "second", second)

    @property
    def dimension(self) -> int:
        return self.point.shape[0]


def _require_unit_normal(normal, d: int) -> np.ndarray:
    n = np.asarray(normal, dtype=float)
    if n.shape != (d,):
        raise InputError(f"normal must be a {d}-vector")
    if abs(float(np.linalg.norm(n)) - 1.0) > _UNIT_NORMAL_TOL:
        raise InputError("normal must have unit Euclidean length")
    return n


def navier_apply(sample: VectorFieldSample, params: LameParameters) -> np.ndarray:
    """Apply the flat elasticity operator at the sample point.

    Returns ``-mu * laplacian(u) - (lam + mu) * grad(div u)`` assembled
    componentwise from the supplied second derivatives.
    """
    if sample.second is None:
        raise ContractViolation("navier_apply needs second derivatives")
    second = sample.second
    lap = np.einsum("aac->c", second)
    grad_div = np.einsum("cbb->c", second)
    return -params.mu * lap - (params.lam + params.mu) * grad_div


def traction_apply(
    sample: VectorFieldSample, normal, params: LameParameters
) -> np.ndarray:
    """Boundary traction ``lam*n*div(u) + mu*(dn u + (grad u)^T n)`` at the point."""
    if sample.first is None:
        raise ContractViolation("traction_apply needs first derivatives")
    n = _require_unit_normal(normal, sample.dimension)
    first = sample.first
    div = float(np.trace(first))
    normal_deriv = n @ first        # sum_b n_b d_b u_c
    transpose_part = first @ n      # sum_b n_b d_c u_b
    return params.lam * n * div + params.mu * (normal_deriv + transpose_part)


def bc_residual(
    bc: BoundaryCondition,
    sample: VectorFieldSample,
    normal,
    params: LameParameters,
) -> np.ndarray:
    """Residual of the active boundary equations, packed into 2d slots.

    Slots ``[0:d]`` hold displacement-type conditions and ``[d:2d]``
    traction-type ones; unused slots stay zero, so a field satisfies the
    condition at the point exactly when the whole vector vanishes.  The
    caller is responsible for evaluating on the boundary.
    """
    if not bc.is_elastic:
        raise InputError(f"bc_residual handles elastic conditions only, not {bc.value}")
    d = sample.dimension
    n = _require_unit_normal(normal, d)
    out = np.zeros(2 * d)
    if bc is BoundaryCondition.DIRICHLET:
        out[:d] = sample.value
        return out
    if bc is BoundaryCondition.FREE:
        out[d:] = traction_apply(sample, n, params)
        return out
    traction = traction_apply(sample, n, params)
    if bc is BoundaryCondition.DF:
        out[:d] = sample.value - np.dot(n, sample.value) * n
        out[d:] = np.dot(n, traction) * n
    else:  # FD
        out[:d] = np.dot(n, sample.value) * n
        out[d:] = traction - np.dot(n, traction) * n
    return out


def residual_vanishes(residual: np.ndarray, tol: float = RESIDUAL_TOL) -> bool:
    """True when every residual slot is below ``tol`` in absolute value."""
    return bool(np.max(np.abs(residual)) <= tol)
