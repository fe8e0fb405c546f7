"""Turning certified spectra into asymptotic evidence.

The raw two-term remainder ``R(L) = [N(L) - a0 Vol L^{d/2}] / (Vol' L^{(d-1)/2})``
oscillates too strongly at any finite scale to read off a coefficient, so the
profile machinery averages it over the trailing window ``[L/2, L]``.  The
average is an integral of a staircase against a power, so by default it is
evaluated exactly (closed-form piecewise integration); an n-point sampled
variant is kept for comparison.  Estimates always come with a dispersion
(half-spread over the trailing fit window): a point value with no honesty
metric is exactly the practice this toolkit exists to replace.

No claim is made about the true large-eigenvalue limit; every report carries
that caveat.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .coefficients import WeylCoefficients
from .core import FlatDomain, LameParameters
from .errors import (
    ContractViolation,
    InputError,
    InsufficientRangeError,
    TailDominatedError,
)
from .specfun import gamma, upper_incomplete_gamma
from .spectrum import Spectrum

REPORT_CAVEAT = (
    "Averaged trailing-window estimate with dispersion; no pointwise "
    "statement about the infinite-eigenvalue limit is implied."
)

#: Relative nudge applied to grid points so they never sit on an eigenvalue.
_GRID_NUDGE = 1e-12


@dataclass(frozen=True)
class RemainderProfile:
    """Sampled raw and window-averaged second-term remainder."""

    grid: np.ndarray
    raw: np.ndarray
    averaged: np.ndarray
    a0: float
    domain: FlatDomain
    bc: object
    params: Optional[LameParameters]
    averaging: str = "exact"

    @property
    def span(self) -> float:
        return float(self.grid[-1] / self.grid[0])


@dataclass(frozen=True)
class CoefficientEstimate:
    """Trailing-window mean of the averaged remainder, with half-spread."""

    value: float
    dispersion: float
    window: tuple
    converged: bool

    def __post_init__(self):
        if self.dispersion < 0:
            raise InputError("dispersion must be non-negative")
        lo, hi = self.window
        if not lo >= hi / 4.0:
            raise InputError("trailing-window rule violated: window low end below hi/4")


def remainder_profile(
    spectrum: Spectrum,
    a0: float,
    domain: FlatDomain,
    grid_size: int = 64,
    subpoints: Optional[int] = None,
) -> RemainderProfile:
    """Remainder profile on a log grid over ``[lambda_max/100, lambda_max]``.

    Averaged values are the mean of the raw remainder over ``[L/2, L]``.
    With ``subpoints=None`` the window integral is evaluated exactly from
    the staircase; passing an integer (the documented tunable, classically
    64) switches to midpoint sampling with that many sub-points.
    """
    if grid_size < 16:
        raise InputError("grid_size must be at least 16")
    d = domain.dimension
    vol = domain.volume
    vol_b = domain.boundary_measure
    if vol_b <= 0:
        raise InputError("remainder normalization needs a non-empty boundary")
    lam_hi = spectrum.lambda_max
    grid = np.geomspace(lam_hi / 100.0, lam_hi, grid_size)
    grid = grid * (1.0 + _GRID_NUDGE)
    grid[-1] = lam_hi  # keep the top point inside the certified range

    def raw_at(lams: np.ndarray) -> np.ndarray:
        counts = spectrum.counting(lams)
        return (counts - a0 * vol * lams ** (d / 2.0)) / (vol_b * lams ** ((d - 1) / 2.0))

    raw = raw_at(grid)
    averaged = np.empty_like(raw)
    power = -(d - 1) / 2.0
    for i, lam in enumerate(grid):
        a, b = lam / 2.0, lam
        if subpoints is None:
            n_int = spectrum.staircase_integral(a, b, power)
            if d == 3:
                main = a0 * vol * (b * b - a * a) / 2.0
            else:
                main = a0 * vol * (2.0 / 3.0) * (b ** 1.5 - a ** 1.5)
            averaged[i] = (n_int - main) / (vol_b * (b - a))
        else:
            pts = a + (b - a) * (np.arange(subpoints) + 0.5) / subpoints
            averaged[i] = float(np.mean(raw_at(pts)))
    return RemainderProfile(
        grid=grid,
        raw=raw,
        averaged=averaged,
        a0=a0,
        domain=domain,
        bc=spectrum.bc,
        params=spectrum.params,
        averaging="exact" if subpoints is None else f"midpoint-{subpoints}",
    )


def fit_second_coefficient(profile: RemainderProfile) -> CoefficientEstimate:
    """Trailing quarter-decade mean of the averaged remainder.

    The estimate is ``converged`` when its half-spread is at most 5% of its
    magnitude, or below 1e-4 absolutely when the value itself is near zero.
    """
    if profile.span < 10.0:
        raise InsufficientRangeError(
            f"profile spans factor {profile.span:.2f}; need at least one decade"
        )
    hi = float(profile.grid[-1])
    lo = hi * 10.0 ** (-0.25)
    mask = profile.grid >= lo
    window_vals = profile.averaged[mask]
    value = float(np.mean(window_vals))
    dispersion = float(0.5 * (np.max(window_vals) - np.min(window_vals)))
    converged = dispersion <= 0.05 * abs(value) or dispersion <= 1e-4
    return CoefficientEstimate(value, dispersion, (lo, hi), converged)


def heat_trace(
    spectrum: Spectrum, t: float, a0_for_tail: float, vol: float
) -> tuple:
    """Partition function value and a rigorous truncation tail bound.

    ``value`` sums ``mult * exp(-t * L_k)`` over the certified entries;
    ``tail_bound`` controls the missing modes above ``lambda_max`` through
    the first Weyl term inflated by 10%.  Regimes with ``t * lambda_max < 20``
    are refused: there the tail would not be negligible.
    """
    if not t > 0:
        raise InputError("t must be positive")
    x = t * spectrum.lambda_max
    if x < 20.0:
        raise TailDominatedError(
            f"t * lambda_max = {x:.3g} < 20; the tail bound would dominate"
        )
    d = spectrum.domain.dimension
    value = float(np.dot(spectrum.mults, np.exp(-t * spectrum.values)))
    tail = (
        a0_for_tail
        * vol
        * upper_incomplete_gamma(1.0 + d / 2.0, x)
        / t ** (d / 2.0)
        * 1.1
    )
    return value, tail


def stieltjes_consistency(spectrum: Spectrum, t_grid: Sequence) -> float:
    """Max relative gap between direct summation and staircase integration.

    The second route integrates ``exp(-t L)`` against the counting staircase
    by exact piecewise integration (equivalently, integration by parts); the
    two sides are the same finite sum rebracketed, so the gap measures only
    accumulated rounding.
    """
    worst = 0.0
    vals = spectrum.values
    cum = np.cumsum(spectrum.mults)
    top = spectrum.lambda_max
    for t in t_grid:
        if not t > 0:
            raise InputError("t values must be positive")
        direct = float(np.dot(spectrum.mults, np.exp(-t * vals)))
        edges = np.concatenate((vals, [top]))
        stieltjes = float(
            np.dot(cum, np.exp(-t * edges[:-1]) - np.exp(-t * edges[1:]))
        ) + float(cum[-1]) * math.exp(-t * top)
        denom = max(abs(direct), 1e-300)
        worst = max(worst, abs(direct - stieltjes) / denom)
    return worst


@dataclass(frozen=True)
class ComparisonReport:
    """Empirical estimate against every candidate coefficient formula."""

    geometry: dict
    params: LameParameters
    bc: object
    estimate: CoefficientEstimate
    candidates: list
    closest: str
    caveat: str = REPORT_CAVEAT

    def to_json_dict(self, config: Optional[dict] = None) -> dict:
        doc = {
            "format_version": 1,
            "config": config or {},
            "geometry": self.geometry,
            "params": {"lambda": self.params.lam, "mu": self.params.mu},
            "bc": self.bc.value,
            "estimate": {
                "value": self.estimate.value,
                "dispersion": self.estimate.dispersion,
                "window": list(self.estimate.window),
                "converged": self.estimate.converged,
            },
            "candidates": self.candidates,
            "closest": self.closest,
            "caveat": self.caveat,
        }
        return doc

    def to_text(self) -> str:
        lines = [
            f"bc={self.bc.value}  lambda={self.params.lam:g}  mu={self.params.mu:g}",
            f"estimate: {self.estimate.value:.6g} +/- {self.estimate.dispersion:.6g} "
            f"(window {self.estimate.window[0]:.6g}..{self.estimate.window[1]:.6g}, "
            f"{'converged' if self.estimate.converged else 'not converged'})",
            f"{'family':<14}{'a1':>14}{'distance':>14}{'normalized':>14}",
        ]
        for cand in self.candidates:
            lines.append(
                f"{cand['family']:<14}{cand['value']:>14.6g}"
                f"{cand['distance']:>14.6g}{cand['normalized_distance']:>14.6g}"
            )
        lines.append(f"closest: {self.closest}")
        lines.append(self.caveat)
        return "\n".join(lines)


def comparison_report(
    estimates,
    candidates: Sequence[WeylCoefficients],
    geometry: dict,
    params: LameParameters,
) -> ComparisonReport:
    """Rank candidate second coefficients against the empirical estimate.

    ``estimates`` may be a single estimate or a list; the last entry is the
    primary one.  All candidates must share boundary condition and dimension.
    """
    if isinstance(estimates, CoefficientEstimate):
        estimates = [estimates]
    if not estimates:
        raise InputError("need at least one estimate")
    if not candidates:
        raise InputError("need at least one candidate")
    bcs = {c.bc for c in candidates}
    dims = {c.d for c in candidates}
    if len(bcs) != 1 or len(dims) != 1:
        raise ContractViolation("candidates must share boundary condition and dimension")
    estimate = estimates[-1]
    floor = max(estimate.dispersion, 1e-300)
    rows = []
    for cand in candidates:
        dist = abs(cand.a1 - estimate.value)
        rows.append(
            {
                "family": cand.family.value,
                "value": cand.a1,
                "distance": dist,
                "normalized_distance": dist / floor,
            }
        )
    closest = min(rows, key=lambda r: r["distance"])["family"]
    return ComparisonReport(
        geometry=geometry,
        params=params,
        bc=next(iter(bcs)),
        estimate=estimate,
        candidates=rows,
        closest=closest,
    )


def profile_csv_text(profile: RemainderProfile, config: Optional[dict] = None) -> str:
    """Plot-data serialization: ``Lambda,R_raw,R_averaged`` with a config header."""
    lines = ["# format_version: 1", "# config: " + json.dumps(config or {}, sort_keys=True)]
    lines.append("Lambda,R_raw,R_averaged")
    for lam, r, avg in zip(profile.grid, profile.raw, profile.averaged):
        lines.append(f"{lam:.17g},{r:.17g},{avg:.17g}")
    return "\n".join(lines) + "\n"
