"""Two-term spectral asymptotics toolkit for the flat elasticity operator.

Library surface:

* :mod:`elastic_spectra.core` - material parameters, domains, pointwise
  Navier/traction operators and boundary-condition residuals.
* :mod:`elastic_spectra.specfun` - self-contained Bessel functions, root
  bracketing, the surface-wave cubic, and the arctan integrals.
* :mod:`elastic_spectra.coefficients` - every competing counting and
  heat-trace coefficient formula plus the gamma-factor conversion.
* :mod:`elastic_spectra.box` / :mod:`elastic_spectra.disk` - certified
  spectra on boxes (optionally periodic) and the unit disk.
* :mod:`elastic_spectra.asymptotics` - remainder profiles, averaged
  second-coefficient extraction, heat traces, consistency checks, reports.
* :mod:`elastic_spectra.cli` - the ``elastic-spectra`` command.
"""

from .core import (
    BoundaryCondition,
    Box,
    Disk,
    FlatDomain,
    LameParameters,
    VectorFieldSample,
    bc_residual,
    navier_apply,
    traction_apply,
)
from .coefficients import (
    HeatCoefficients,
    WeylCoefficients,
    WeylFamily,
    counting_to_heat,
    heat_coefficients,
    leading_coefficient,
    second_coefficient,
    second_coefficient_sava,
)
from .specfun import (
    RayleighRoot,
    RootList,
    arctan_integral,
    bessel_j,
    bessel_j_deriv,
    bessel_jn,
    bracket_roots,
    rayleigh_cubic,
    rayleigh_root,
)
from .spectrum import Spectrum, counting
from .box import elastic_box_spectrum, scalar_box_spectrum
from .disk import (
    AuditReport,
    completeness_audit,
    disk_spectrum,
    dispersion_matrix,
    displacement_from_potentials,
)
from .asymptotics import (
    CoefficientEstimate,
    ComparisonReport,
    RemainderProfile,
    comparison_report,
    fit_second_coefficient,
    heat_trace,
    remainder_profile,
    stieltjes_consistency,
)

__version__ = "0.1.0"
