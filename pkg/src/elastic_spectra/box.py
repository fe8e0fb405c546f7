"""Exact elastic and scalar spectra on boxes, flat cylinders, and tori.

The mixed boundary conditions separate on boxes: every eigenfield is a
product of per-axis sines/cosines with a constant polarization vector, and
splits into a curl-free (pressure) family at squared speed ``lam + 2*mu``
and a divergence-free (shear) family at squared speed ``mu``.  Periodic
axes carry both phases of each nonzero frequency and, at frequency zero,
both the constant-one and constant-zero factor assignments; working the
polarization bookkeeping through those cases yields closed-form
multiplicity rules per lattice point (implemented in ``_family_tables``).

Clamped (Dirichlet) and traction-free elastic conditions do not separate on
boxes and are deliberately not provided: requesting them raises instead of
emitting an uncertified spectrum.

Certification: every emitted field's polarization identity is checked
algebraically (a sup-norm bound over the whole domain), and fields are
additionally pushed through the actual Navier/traction residual operators
on an 8^d interior grid plus 8^(d-1) grids per face - all of them for
moderate mode counts, a lowest-eigenvalue prefix plus a deterministic
stride sample once counts grow past ``certify_budget``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    BoundaryCondition,
    Box,
    LameParameters,
    VectorFieldSample,
    bc_residual,
    navier_apply,
)
from .errors import (
    CertificationError,
    InputError,
    ResourceBudgetError,
    UnsupportedCombinationError,
    UnsupportedDimensionError,
)
from .spectrum import FamilyBlock, Spectrum, merge_entries

DEFAULT_LATTICE_BUDGET = 250_000_000
DEFAULT_CERTIFY_BUDGET = 200_000

_GRID_OFFSET = 0.61803398875  # golden-ratio offset keeps sample points off symmetry lines


def _axis_steps(domain: Box) -> np.ndarray:
    return np.array(
        [
            (2.0 * math.pi if per else math.pi) / L
            for L, per in zip(domain.lengths, domain.periodic)
        ]
    )


def _lattice(domain: Box, speed: float, lambda_max: float, budget: int):
    """All m >= 0 lattice points with speed * |omega(m)|^2 <= lambda_max."""
    steps = _axis_steps(domain)
    bound = math.sqrt(lambda_max / speed)
    sizes = [int(math.ceil(bound / s)) + 2 for s in steps]
    total = 1
    for n in sizes:
        total *= n
    if total > budget:
        raise ResourceBudgetError(
            f"lattice enumeration would visit {total} points (budget {budget})"
        )
    grids = np.meshgrid(*[np.arange(n, dtype=np.int64) for n in sizes], indexing="ij")
    m = np.stack([g.reshape(-1) for g in grids], axis=1)
    omega = m * steps[None, :]
    omega2 = np.einsum("nd,nd->n", omega, omega)
    keep = speed * omega2 <= lambda_max
    return m[keep], omega[keep], omega2[keep], steps


def scalar_box_spectrum(
    domain: Box,
    bc: BoundaryCondition,
    lambda_max: float,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> Spectrum:
    """Scalar Laplacian spectrum on a box, complete below ``lambda_max``.

    Non-periodic axes contribute ``(pi m / L)^2`` with ``m >= 1`` (Dirichlet)
    or ``m >= 0`` (Neumann); periodic axes contribute ``(2 pi m / L)^2`` with
    multiplicity two for ``m >= 1``.
    """
    if bc not in (BoundaryCondition.SCALAR_DIRICHLET, BoundaryCondition.SCALAR_NEUMANN):
        raise InputError("scalar_box_spectrum handles the scalar auxiliaries only")
    if not lambda_max > 0:
        raise InputError("lambda_max must be positive")
    dirichlet = bc is BoundaryCondition.SCALAR_DIRICHLET

    axes = []
    est = 1
    for L, per in zip(domain.lengths, domain.periodic):
        step = (2.0 * math.pi if per else math.pi) / L
        m_max = int(math.floor(math.sqrt(lambda_max) / step)) + 1
        est *= m_max + 1
        if est > budget:
            raise ResourceBudgetError(
                f"scalar enumeration would visit more than {budget} points"
            )
        m = np.arange(0 if (per or not dirichlet) else 1, m_max + 1, dtype=np.int64)
        vals = (step * m) ** 2
        mults = np.ones(m.size, dtype=np.int64)
        if per:
            mults[m >= 1] = 2
        keep = vals <= lambda_max
        axes.append((vals[keep], mults[keep]))

    values = np.array([0.0])
    mults = np.array([1], dtype=np.int64)
    for ax_vals, ax_mults in axes:
        values = values[:, None] + ax_vals[None, :]
        mults = mults[:, None] * ax_mults[None, :]
        keep = values.reshape(-1) <= lambda_max
        values, mults, _ = merge_entries(values.reshape(-1)[keep], mults.reshape(-1)[keep])
    return Spectrum(values, mults, lambda_max, domain, bc, None)


# ---------------------------------------------------------------------------
# elastic families
# ---------------------------------------------------------------------------


@dataclass
class _FieldBatch:
    """Explicit eigenfields of one structural class (one phase representative)."""

    omega: np.ndarray      # (K, d) axis frequencies
    coeff: np.ndarray      # (K, d) polarization
    state_b: np.ndarray    # (K, d) True where the zero-frequency axis takes the (1, 0) phase
    lam_val: np.ndarray    # (K,) eigenvalues
    family: str            # "pressure" | "shear"


def _perp_basis_2d(omega: np.ndarray) -> np.ndarray:
    unit = omega / np.linalg.norm(omega, axis=1, keepdims=True)
    return np.stack([-unit[:, 1], unit[:, 0]], axis=1)


def _perp_basis_3d_full(omega: np.ndarray):
    """Two orthonormal vectors perpendicular to each row of ``omega``."""
    unit = omega / np.linalg.norm(omega, axis=1, keepdims=True)
    pick = np.argmin(np.abs(unit), axis=1)
    helper = np.zeros_like(unit)
    helper[np.arange(unit.shape[0]), pick] = 1.0
    b1 = np.cross(unit, helper)
    b1 /= np.linalg.norm(b1, axis=1, keepdims=True)
    b2 = np.cross(unit, b1)
    b2 /= np.linalg.norm(b2, axis=1, keepdims=True)
    return b1, b2


def _perp_in_plane(omega: np.ndarray, zero_axis: np.ndarray) -> np.ndarray:
    """In-plane perpendicular when exactly one component of each row is zero."""
    n, d = omega.shape
    unit = omega / np.linalg.norm(omega, axis=1, keepdims=True)
    out = np.zeros_like(omega)
    axes = np.arange(d)
    for a in range(d):
        rows = zero_axis == a
        if not np.any(rows):
            continue
        others = axes[axes != a]
        p, q = others[0], others[1]
        out[rows, p] = -unit[rows, q]
        out[rows, q] = unit[rows, p]
    return out


def _family_tables(bc, m, omega, omega2, periodic):
    """Multiplicity rules and field classes per lattice point.

    Returns ``(pressure_mults, shear_mults, classes)`` with phase doubling
    applied to the multiplicity arrays; ``classes`` describes one explicit
    representative per polarization for certification.
    """
    n, d = m.shape
    zeros = m == 0
    per = np.asarray(periodic, dtype=bool)
    z = zeros.sum(axis=1)
    p0 = (zeros & per[None, :]).sum(axis=1)
    n0 = z - p0
    phase = np.exp2((m >= 1)[:, per].sum(axis=1)).astype(np.int64) if np.any(per) else np.ones(n, np.int64)
    nonzero = omega2 > 0

    classes = []
    press = np.zeros(n, dtype=np.int64)
    shear = np.zeros(n, dtype=np.int64)

    if bc is BoundaryCondition.DF:
        press_mask = nonzero & (n0 == 0)
        main_mask = press_mask & (d - z - 1 >= 1)
        state_fn = lambda rows: zeros[rows] & per[None, :]  # noqa: E731
        shear[nonzero & (n0 == 0)] += d - 1
        shear[nonzero & (n0 == 1)] += 1
        shear[(~nonzero) & (n0 == 0)] += d
        shear[(~nonzero) & (n0 == 1)] += 1
        # axis-aligned shear representatives: one per admissible zero axis
        axis_masks = []
        for k in range(d):
            other_np_zero = (zeros & ~per[None, :]).copy()
            other_np_zero[:, k] = False
            mask = zeros[:, k] & (other_np_zero.sum(axis=1) == 0)
            axis_masks.append(mask)
    else:  # FD
        press_mask = nonzero
        main_mask = nonzero & (d - z - 1 >= 1)
        state_fn = lambda rows: np.zeros((rows.sum(), d), dtype=bool)  # noqa: E731
        shear[nonzero] += (d - z - 1)[nonzero] + p0[nonzero]
        shear[~nonzero] += p0[~nonzero]
        axis_masks = [zeros[:, k] & per[k] for k in range(d)]

    press[press_mask] += 1
    press *= phase
    shear *= phase

    def add_class(rows_mask, coeff, states, family):
        rows = np.flatnonzero(rows_mask)
        if rows.size == 0:
            return
        classes.append(
            _FieldBatch(
                omega=omega[rows],
                coeff=coeff,
                state_b=states,
                lam_val=None,  # filled by caller per family speed
                family=family,
            )
        )

    # pressure representatives
    rows = np.flatnonzero(press_mask)
    if rows.size:
        unit = omega[rows] / np.sqrt(omega2[rows])[:, None]
        add_class(press_mask, unit, state_fn(press_mask), "pressure")

    # main shear representatives (polarizations inside the support)
    rows = np.flatnonzero(main_mask)
    if rows.size:
        om = omega[rows]
        if d == 2:
            add_class(main_mask, _perp_basis_2d(om), state_fn(main_mask), "shear")
        else:
            full = z[rows] == 0
            if np.any(full):
                sub = rows[full]
                mask = np.zeros(n, bool)
                mask[sub] = True
                b1, b2 = _perp_basis_3d_full(omega[sub])
                add_class(mask, b1, state_fn(mask), "shear")
                add_class(mask, b2, state_fn(mask), "shear")
            plane = z[rows] == 1
            if np.any(plane):
                sub = rows[plane]
                mask = np.zeros(n, bool)
                mask[sub] = True
                zero_axis = np.argmax(zeros[sub], axis=1)
                add_class(
                    mask, _perp_in_plane(omega[sub], zero_axis), state_fn(mask), "shear"
                )

    # axis-aligned shear representatives
    for k, mask in enumerate(axis_masks):
        rows = np.flatnonzero(mask)
        if rows.size == 0:
            continue
        coeff = np.zeros((rows.size, d))
        coeff[:, k] = 1.0
        states = zeros[rows].copy()
        states[:, k] = False
        if bc is BoundaryCondition.FD:
            states[:] = False
            states[:, k] = True
        add_class(mask, coeff, states, "shear")

    return press, shear, classes


def elastic_box_spectrum(
    domain: Box,
    params: LameParameters,
    bc: BoundaryCondition,
    lambda_max: float,
    certify: str = "auto",
    certify_budget: int = DEFAULT_CERTIFY_BUDGET,
    certify_tol: Optional[float] = None,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> Spectrum:
    """Certified-complete elastic spectrum for mixed conditions on a box.

    ``certify`` is ``"auto"`` (grid residuals for a lowest-eigenvalue prefix
    of ``certify_budget`` fields plus a stride sample, algebraic certificates
    for everything), ``"grid"`` (grid residuals for every field), or
    ``"none"`` (algebraic certificates only).  ``certify_tol`` defaults to
    ``max(1e-9, 4e-13 * lambda_max)``; the scaled floor acknowledges that at
    huge eigenvalues the residual sits at the rounding noise of ``Lambda``
    itself.
    """
    if not isinstance(domain, Box):
        raise InputError("elastic_box_spectrum needs a Box domain")
    d = domain.dimension
    if d not in (2, 3):
        raise UnsupportedDimensionError(f"elastic box spectra support d in {{2, 3}}, got {d}")
    if bc not in (BoundaryCondition.DF, BoundaryCondition.FD):
        raise UnsupportedCombinationError(
            "only the mixed DF/FD conditions separate on boxes; "
            "clamped and traction-free spectra are not provided"
        )
    if not lambda_max > 0:
        raise InputError("lambda_max must be positive")
    if certify not in ("auto", "grid", "none"):
        raise InputError("certify must be one of 'auto', 'grid', 'none'")
    tol = certify_tol if certify_tol is not None else max(1e-9, 4e-13 * lambda_max)

    speeds = {"pressure": params.pressure_modulus, "shear": params.mu}
    blocks = {}
    batches = []
    counts = {}
    for family in ("pressure", "shear"):
        v = speeds[family]
        m, omega, omega2, _ = _lattice(domain, v, lambda_max, budget)
        press, shear, classes = _family_tables(bc, m, omega, omega2, domain.periodic)
        mults = press if family == "pressure" else shear
        keep = mults > 0
        vals, ms, _ = merge_entries(v * omega2[keep], mults[keep])
        blocks[family] = FamilyBlock(family, vals, ms)
        counts[family] = int(ms.sum())
        for cls in classes:
            if cls.family != family:
                continue
            cls.lam_val = v * np.einsum("kd,kd->k", cls.omega, cls.omega)
            batches.append(cls)

    merged_vals, merged_mults, _ = merge_entries(
        np.concatenate([blocks["pressure"].values, blocks["shear"].values]),
        np.concatenate([blocks["pressure"].mults, blocks["shear"].mults]),
    )
    if merged_mults.sum() != counts["pressure"] + counts["shear"]:
        raise CertificationError("family recount mismatch after merging")

    meta = {
        "family_counts": counts,
        "certify_tol": tol,
        "certify_mode": certify,
    }
    spectrum = Spectrum(
        merged_vals,
        merged_mults,
        lambda_max,
        domain,
        bc,
        params,
        [blocks["pressure"], blocks["shear"]],
        meta,
    )
    _certify_batches(domain, params, bc, batches, certify, certify_budget, tol, meta)
    return spectrum


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


def _concat_batches(batches):
    omega = np.concatenate([b.omega for b in batches])
    coeff = np.concatenate([b.coeff for b in batches])
    state = np.concatenate([b.state_b for b in batches])
    lam = np.concatenate([b.lam_val for b in batches])
    fams = np.concatenate(
        [np.full(b.omega.shape[0], 0 if b.family == "pressure" else 1, np.uint8) for b in batches]
    )
    return omega, coeff, state, lam, fams


def _certify_batches(domain, params, bc, batches, certify, budget, tol, meta):
    if not batches:
        meta.update(n_fields=0, n_grid_certified=0, max_pde_residual=0.0, max_bc_residual=0.0)
        return
    omega, coeff, state, lam, fams = _concat_batches(batches)
    n_fields = omega.shape[0]

    # algebraic certificate: the polarization identity bounds the PDE
    # residual over the whole domain because every trig factor is <= 1.
    omega2 = np.einsum("kd,kd->k", omega, omega)
    cw = np.einsum("kd,kd->k", coeff, omega)
    rho = (
        params.mu * omega2[:, None] * coeff
        + (params.lam + params.mu) * cw[:, None] * omega
        - lam[:, None] * coeff
    )
    alg_max = float(np.max(np.abs(rho))) if n_fields else 0.0
    if alg_max > tol:
        raise CertificationError(
            f"polarization identity residual {alg_max:.3e} exceeds tolerance {tol:.3e}"
        )

    meta["n_fields"] = int(n_fields)
    meta["max_algebraic_residual"] = alg_max
    if certify == "none":
        meta.update(n_grid_certified=0, max_pde_residual=None, max_bc_residual=None)
        return

    if certify == "grid" or n_fields <= budget:
        sel = np.arange(n_fields)
    else:
        order = np.argsort(lam, kind="stable")
        prefix = order[:budget]
        rest = order[budget:]
        stride = max(1, rest.size // max(1, budget // 20))
        sel = np.concatenate([prefix, rest[::stride]])

    max_pde = 0.0
    max_bc = 0.0
    chunk = 32768 if domain.dimension == 2 else 4096
    for start in range(0, sel.size, chunk):
        idx = sel[start : start + chunk]
        pde, bcres = _grid_residuals(
            domain, params, bc, omega[idx], coeff[idx], state[idx], lam[idx]
        )
        max_pde = max(max_pde, pde)
        max_bc = max(max_bc, bcres)
        if max(max_pde, max_bc) > tol:
            raise CertificationError(
                f"grid residual {max(max_pde, max_bc):.3e} exceeds tolerance {tol:.3e} "
                f"(pde={pde:.3e}, bc={bcres:.3e})"
            )
    meta.update(
        n_grid_certified=int(sel.size),
        max_pde_residual=max_pde,
        max_bc_residual=max_bc,
    )

    _spot_check_public_api(domain, params, bc, omega, coeff, state, lam, tol)


def _axis_tables(omega_ax, state_ax, x):
    """Sine/cosine factor tables with the phase-B override at frequency zero."""
    s = np.sin(omega_ax[:, None] * x[None, :])
    c = np.cos(omega_ax[:, None] * x[None, :])
    if np.any(state_ax):
        s[state_ax] = 1.0
        c[state_ax] = 0.0
    return s, c


def _role_tables(bc, own, s, c, w):
    """(order0, order1, order2) factor tables for one axis of one component."""
    sin_role = own if bc is BoundaryCondition.FD else not own
    if sin_role:
        return s, w[:, None] * c, -(w[:, None] ** 2) * s
    return c, -w[:, None] * s, -(w[:, None] ** 2) * c


def _grid_residuals(domain, params, bc, omega, coeff, state, lam):
    """Max interior PDE residual and face BC residual over the sample grids."""
    d = domain.dimension
    pts = [
        L * (np.arange(8) + _GRID_OFFSET) / 8.0 for L in domain.lengths
    ]
    tables = [
        _axis_tables(omega[:, i], state[:, i], pts[i]) for i in range(d)
    ]

    def factors(j, i, order):
        s, c = tables[i]
        return _role_tables(bc, i == j, s, c, omega[:, i])[order]

    mu, lamb = params.mu, params.lam

    if d == 2:
        def tensor(j, o0, o1):
            return np.einsum("kp,kq->kpq", factors(j, 0, o0), factors(j, 1, o1))

        u = [coeff[:, j, None, None] * tensor(j, 0, 0) for j in range(2)]
        dd = {}
        for j in range(2):
            dd[(0, 0, j)] = coeff[:, j, None, None] * tensor(j, 2, 0)
            dd[(1, 1, j)] = coeff[:, j, None, None] * tensor(j, 0, 2)
            dd[(0, 1, j)] = coeff[:, j, None, None] * tensor(j, 1, 1)
        pde = 0.0
        for cidx in range(2):
            lap = dd[(0, 0, cidx)] + dd[(1, 1, cidx)]
            grad_div = sum(
                dd[(min(cidx, b), max(cidx, b), b)] for b in range(2)
            )
            res = -mu * lap - (lamb + mu) * grad_div - lam[:, None, None] * u[cidx]
            pde = max(pde, float(np.max(np.abs(res))))
        bc_max = _face_residuals_2d(domain, params, bc, omega, coeff, state, pts, factors)
        return pde, bc_max

    # d == 3
    def tensor3(j, o0, o1, o2):
        return np.einsum(
            "kp,kq,kr->kpqr", factors(j, 0, o0), factors(j, 1, o1), factors(j, 2, o2)
        )

    orders_second = {
        (0, 0): (2, 0, 0), (1, 1): (0, 2, 0), (2, 2): (0, 0, 2),
        (0, 1): (1, 1, 0), (0, 2): (1, 0, 1), (1, 2): (0, 1, 1),
    }
    u = [coeff[:, j, None, None, None] * tensor3(j, 0, 0, 0) for j in range(3)]
    dd = {}
    for j in range(3):
        for (a, b), orders in orders_second.items():
            dd[(a, b, j)] = coeff[:, j, None, None, None] * tensor3(j, *orders)
    pde = 0.0
    for cidx in range(3):
        lap = dd[(0, 0, cidx)] + dd[(1, 1, cidx)] + dd[(2, 2, cidx)]
        grad_div = sum(dd[(min(cidx, b), max(cidx, b), b)] for b in range(3))
        res = -mu * lap - (lamb + mu) * grad_div - lam[:, None, None, None] * u[cidx]
        pde = max(pde, float(np.max(np.abs(res))))
    bc_max = _face_residuals_3d(domain, params, bc, omega, coeff, state, pts, factors)
    return pde, bc_max


def _face_axis_values(bc, own, omega_ax, state_ax, x):
    """Order-0/1 factor values of one axis at a single face coordinate."""
    s = np.sin(omega_ax * x)
    c = np.cos(omega_ax * x)
    if np.any(state_ax):
        s = np.where(state_ax, 1.0, s)
        c = np.where(state_ax, 0.0, c)
    sin_role = own if bc is BoundaryCondition.FD else not own
    if sin_role:
        return s, omega_ax * c
    return c, -omega_ax * s


def _face_residuals_2d(domain, params, bc, omega, coeff, state, pts, factors):
    mu, lamb = params.mu, params.lam
    worst = 0.0
    for i in range(2):
        if domain.periodic[i]:
            continue
        o = 1 - i
        for x_face in (0.0, domain.lengths[i]):
            # per component: face-axis factor values (K,) at orders 0/1 and
            # other-axis tables (K, 8) at orders 0/1.
            vals, d_i, d_o = {}, {}, {}
            for j in range(2):
                f0, f1 = _face_axis_values(bc, i == j, omega[:, i], state[:, i], x_face)
                g0 = factors(j, o, 0)
                g1 = factors(j, o, 1)
                vals[j] = coeff[:, j, None] * f0[:, None] * g0
                d_i[j] = coeff[:, j, None] * f1[:, None] * g0
                d_o[j] = coeff[:, j, None] * f0[:, None] * g1
            div = d_i[i] + d_o[o]
            if bc is BoundaryCondition.DF:
                res = np.maximum(np.abs(vals[o]), np.abs(lamb * div + 2.0 * mu * d_i[i]))
            else:
                res = np.maximum(np.abs(vals[i]), np.abs(mu * (d_i[o] + d_o[i])))
            worst = max(worst, float(np.max(res)))
    return worst


def _face_residuals_3d(domain, params, bc, omega, coeff, state, pts, factors):
    mu, lamb = params.mu, params.lam
    worst = 0.0
    for i in range(3):
        if domain.periodic[i]:
            continue
        others = [a for a in range(3) if a != i]
        for x_face in (0.0, domain.lengths[i]):
            vals, grad = {}, {}
            for j in range(3):
                f0, f1 = _face_axis_values(bc, i == j, omega[:, i], state[:, i], x_face)
                g = {
                    (0, 0): np.einsum(
                        "kp,kq->kpq", factors(j, others[0], 0), factors(j, others[1], 0)
                    ),
                    (1, 0): np.einsum(
                        "kp,kq->kpq", factors(j, others[0], 1), factors(j, others[1], 0)
                    ),
                    (0, 1): np.einsum(
                        "kp,kq->kpq", factors(j, others[0], 0), factors(j, others[1], 1)
                    ),
                }
                vals[j] = coeff[:, j, None, None] * f0[:, None, None] * g[(0, 0)]
                grad[(i, j)] = coeff[:, j, None, None] * f1[:, None, None] * g[(0, 0)]
                grad[(others[0], j)] = coeff[:, j, None, None] * f0[:, None, None] * g[(1, 0)]
                grad[(others[1], j)] = coeff[:, j, None, None] * f0[:, None, None] * g[(0, 1)]
            div = sum(grad[(b, b)] for b in range(3))
            if bc is BoundaryCondition.DF:
                res = np.abs(lamb * div + 2.0 * mu * grad[(i, i)])
                for t in others:
                    res = np.maximum(res, np.abs(vals[t]))
            else:
                res = np.abs(vals[i])
                for t in others:
                    res = np.maximum(res, np.abs(mu * (grad[(i, t)] + grad[(t, i)])))
            worst = max(worst, float(np.max(res)))
    return worst


def separated_mode_sample(
    bc: BoundaryCondition,
    domain: Box,
    params: LameParameters,
    omega,
    coeff,
    state_b,
    point,
) -> VectorFieldSample:
    """Value and analytic derivatives of one separated eigenfield at a point.

    This is the scalar counterpart of the vectorized certification tables;
    the spot-check path feeds its output through the public residual
    operators.
    """
    omega = np.asarray(omega, dtype=float)
    coeff = np.asarray(coeff, dtype=float)
    state_b = np.asarray(state_b, dtype=bool)
    point = np.asarray(point, dtype=float)
    d = omega.size

    def axis_fn(i, own, order, x):
        s, c = math.sin(omega[i] * x), math.cos(omega[i] * x)
        if state_b[i]:
            s, c = 1.0, 0.0
        sin_role = own if bc is BoundaryCondition.FD else not own
        base = (s, omega[i] * c, -omega[i] ** 2 * s) if sin_role else (
            c, -omega[i] * s, -omega[i] ** 2 * c
        )
        return base[order]

    value = np.zeros(d)
    first = np.zeros((d, d))
    second = np.zeros((d, d, d))
    for j in range(d):
        if coeff[j] == 0.0:
            continue
        f0 = [axis_fn(i, i == j, 0, point[i]) for i in range(d)]
        value[j] = coeff[j] * math.prod(f0)
        for a in range(d):
            fa = [axis_fn(i, i == j, 1 if i == a else 0, point[i]) for i in range(d)]
            first[a, j] = coeff[j] * math.prod(fa)
            for b in range(a, d):
                fab = [
                    axis_fn(
                        i,
                        i == j,
                        (2 if a == b else 1) if i in (a, b) else 0,
                        point[i],
                    )
                    for i in range(d)
                ]
                second[a, b, j] = coeff[j] * math.prod(fab)
                second[b, a, j] = second[a, b, j]
    return VectorFieldSample(point=point, value=value, first=first, second=second)


def _spot_check_public_api(domain, params, bc, omega, coeff, state, lam, tol):
    """Push a deterministic handful of fields through the public operators."""
    n = omega.shape[0]
    take = np.unique(np.concatenate([np.arange(min(n, 24)), np.arange(0, n, max(1, n // 24))]))
    d = domain.dimension
    interior = np.array([L * 0.37311 for L in domain.lengths])
    for idx in take:
        sample = separated_mode_sample(
            bc, domain, params, omega[idx], coeff[idx], state[idx], interior
        )
        res = navier_apply(sample, params) - lam[idx] * sample.value
        if np.max(np.abs(res)) > tol:
            raise CertificationError(
                f"public-api interior residual {np.max(np.abs(res)):.3e} at field {idx}"
            )
        for i in range(d):
            if domain.periodic[i]:
                continue
            for x_face, sign in ((0.0, -1.0), (domain.lengths[i], 1.0)):
                pt = interior.copy()
                pt[i] = x_face
                normal = np.zeros(d)
                normal[i] = sign
                smp = separated_mode_sample(bc, domain, params, omega[idx], coeff[idx], state[idx], pt)
                res = bc_residual(bc, smp, normal, params)
                if np.max(np.abs(res)) > tol:
                    raise CertificationError(
                        f"public-api boundary residual {np.max(np.abs(res)):.3e} at field {idx}"
                    )
