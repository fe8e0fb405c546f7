"""Self-contained special functions and 1-D root machinery.

Bessel functions of the first kind are computed from scratch with three
regimes: an ascending power series for small arguments, backward recurrence
normalized by the even-order Neumann sum in the mid range, and the
large-argument trigonometric asymptotic expansion for low orders beyond it.
The supported envelope is ``order <= 250`` and ``0 <= x <= 2000``; values
whose true magnitude lies below the double-precision floor come back as 0.0.

Root finding is bisection only: brackets found on a scan grid are refined to
near machine width, which trades speed for a certificate.  Tangential roots
(no sign change) are not detected; that is documented behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    EvaluationError,
    InputError,
    IntegrityError,
    RangeError,
)

BESSEL_MAX_ORDER = 250
BESSEL_MAX_ARG = 2000.0

_SERIES_CUTOFF = 10.0
_ASYMPT_MAX_ORDER = 12


def _check_envelope(k: int, x_max: float) -> None:
    if k < 0 or k > BESSEL_MAX_ORDER:
        raise RangeError(f"Bessel order {k} outside supported envelope [0, {BESSEL_MAX_ORDER}]")
    if x_max > BESSEL_MAX_ARG:
        raise RangeError(f"Bessel argument {x_max} outside supported envelope [0, {BESSEL_MAX_ARG}]")


def _series_orders(k_max: int, x: np.ndarray) -> np.ndarray:
    """Ascending series for all orders 0..k_max at small arguments.

    Leading factors are built in log space so large orders underflow to zero
    cleanly instead of overflowing intermediates.
    """
    out = np.zeros((k_max + 1, x.size))
    q = 0.25 * x * x
    half = 0.5 * x
    with np.errstate(divide="ignore"):
        log_half = np.where(half > 0, np.log(half), -np.inf)
    for k in range(k_max + 1):
        lead_log = k * log_half - math.lgamma(k + 1)
        term = np.where(lead_log > -745.0, np.exp(lead_log), 0.0)
        acc = term.copy()
        for j in range(60):
            term = -term * q / ((j + 1.0) * (k + j + 1.0))
            acc += term
            if np.max(np.abs(term)) <= 1e-18 * max(np.max(np.abs(acc)), 1e-300):
                break
        out[k] = acc
    return out


def _miller_orders(k_max: int, x: np.ndarray) -> np.ndarray:
    """Backward recurrence with even-order Neumann-sum normalization.

    Works on a batch of positive arguments at once; columns rescale
    independently whenever the recurrence grows past 1e250.
    """
    n_cols = x.size
    top = float(np.max(x))
    start = int(max(k_max, top)) + int(12.0 * max(k_max, top, 1.0) ** (1.0 / 3.0)) + 60
    out = np.zeros((k_max + 1, n_cols))
    jp = np.zeros(n_cols)            # J_{n+1}
    jc = np.full(n_cols, 1e-30)      # J_n
    norm = np.zeros(n_cols)          # accumulates J_0 + 2*sum_{m>=1} J_{2m}
    inv_x = 1.0 / x
    # Rescale every 16 steps: worst-case growth (2n/x)^16 stays well inside
    # the double range from the 1e250 trigger.
    for n in range(start, 0, -1):
        jm = (2.0 * n) * inv_x * jc - jp
        jp = jc
        jc = jm
        order = n - 1
        if order <= k_max:
            out[order] = jm
        if order % 2 == 0:
            norm += jm if order == 0 else 2.0 * jm
        if n % 16 == 0:
            big = np.abs(jc) > 1e250
            if np.any(big):
                scale = np.where(big, 1e-250, 1.0)
                jc *= scale
                jp *= scale
                norm *= scale
                out[:, big] *= 1e-250
    with np.errstate(invalid="ignore", divide="ignore"):
        out /= norm
    return np.where(np.isfinite(out), out, 0.0)


def _asymptotic_single(k: int, x: float) -> float:
    """Large-argument expansion; accurate for low orders, x >> k^2."""
    mu4 = 4.0 * k * k
    p_sum = 1.0
    q_sum = 0.0
    term = 1.0
    for m in range(1, 30):
        term *= (mu4 - (2.0 * m - 1.0) ** 2) / (8.0 * m * x)
        if abs(term) < 1e-18:
            break
        r = m % 4
        if r == 1:
            q_sum += term
        elif r == 2:
            p_sum -= term
        elif r == 3:
            q_sum -= term
        else:
            p_sum += term
    chi = x - (2.0 * k + 1.0) * math.pi / 4.0
    return math.sqrt(2.0 / (math.pi * x)) * (p_sum * math.cos(chi) - q_sum * math.sin(chi))


def _asymptotic_threshold(k: int) -> float:
    return max(30.0, 3.0 * k * k + 20.0)


def bessel_jn(k_max: int, x) -> np.ndarray:
    """All orders ``J_0..J_{k_max}`` at the given argument(s).

    Returns shape ``(k_max + 1,) + shape(x)``.  This is the batch entry
    point the dispersion scans use; per-column the series or the backward
    recurrence is selected by argument size.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        flat = arr.reshape(-1)
        return bessel_jn(k_max, flat).reshape((k_max + 1,) + arr.shape)
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise RangeError("Bessel arguments must be finite and non-negative")
    _check_envelope(k_max, float(np.max(arr)) if arr.size else 0.0)
    out = np.zeros((k_max + 1, arr.size))
    zero = arr == 0.0
    if np.any(zero):
        out[0, zero] = 1.0
    small = (~zero) & (arr <= _SERIES_CUTOFF)
    if np.any(small):
        out[:, small] = _series_orders(k_max, arr[small])
    large = (~zero) & (arr > _SERIES_CUTOFF)
    if np.any(large):
        out[:, large] = _miller_orders(k_max, arr[large])
    return out


def bessel_j(k: int, x: float) -> float:
    """First-kind Bessel value ``J_k(x)`` on the supported envelope."""
    if not math.isfinite(x) or x < 0:
        raise RangeError(f"Bessel argument must be finite and >= 0, got {x}")
    _check_envelope(k, x)
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    if x <= _SERIES_CUTOFF:
        return float(_series_orders(k, np.array([x]))[k, 0])
    if k <= _ASYMPT_MAX_ORDER and x >= _asymptotic_threshold(k):
        return _asymptotic_single(k, x)
    return float(_miller_orders(k, np.array([x]))[k, 0])


def bessel_j_deriv(k: int, x: float) -> float:
    """Derivative ``J_k'(x)`` via ``(J_{k-1} - J_{k+1}) / 2`` (``J_0' = -J_1``)."""
    if k == 0:
        return -bessel_j(1, x)
    vals = bessel_jn(k + 1, np.array([x]))
    return float(0.5 * (vals[k - 1, 0] - vals[k + 1, 0]))


@dataclass(frozen=True)
class RootList:
    """Certified simple roots of a scalar function on an interval.

    Every listed root came from a sign change on the scan grid, refined by
    bisection; ``residual_bound`` is the largest ``|f(root)|`` observed.
    Tangential roots are invisible to this detector.
    """

    function_id: str
    interval: tuple
    roots: np.ndarray
    residual_bound: float
    grid: int

    def __post_init__(self):
        roots = np.asarray(self.roots, dtype=float)
        if roots.size > 1 and np.any(np.diff(roots) <= 0):
            raise IntegrityError("roots must be strictly increasing")
        object.__setattr__(self, "roots", roots)


def _eval_checked(f: Callable, xs: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, accepting scalar-only callables."""
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape != xs.shape:
            raise TypeError
    except (TypeError, ValueError):
        ys = np.array([float(f(float(v))) for v in xs])
    if np.any(~np.isfinite(ys)):
        bad = float(xs[np.flatnonzero(~np.isfinite(ys))[0]])
        raise EvaluationError("non-finite function value", bad)
    return ys


def bisect_many(
    f: Callable,
    lo: np.ndarray,
    hi: np.ndarray,
    width: float,
) -> np.ndarray:
    """Vectorized bisection on sign-changing brackets; returns midpoints."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    if lo.size == 0:
        return lo
    flo = _eval_checked(f, lo)
    steps = max(1, int(math.ceil(math.log2(max(float(np.max(hi - lo)), width) / width))))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        fmid = _eval_checked(f, mid)
        take_left = (flo <= 0) == (fmid <= 0)
        lo = np.where(take_left, mid, lo)
        flo = np.where(take_left, fmid, flo)
        hi = np.where(take_left, hi, mid)
    return 0.5 * (lo + hi)


def bracket_roots(
    f: Callable,
    a: float,
    b: float,
    grid: int,
    function_id: str = "f",
) -> RootList:
    """Scan ``grid + 1`` equispaced samples and bisect every sign change.

    Roots refine to width ``1e-13 * max(1, |b|)``.  Samples that hit zero
    exactly are recorded as roots directly.  Non-finite values abort with an
    error carrying the offending abscissa.
    """
    if not (a < b):
        raise InputError("bracket_roots needs a < b")
    if grid < 2:
        raise InputError("bracket_roots needs grid >= 2")
    xs = np.linspace(a, b, grid + 1)
    ys = _eval_checked(f, xs)
    width = 1e-13 * max(1.0, abs(b))

    roots = [float(x) for x, y in zip(xs, ys) if y == 0.0]
    sign = np.sign(ys)
    idx = np.flatnonzero((sign[:-1] != 0) & (sign[1:] != 0) & (sign[:-1] != sign[1:]))
    if idx.size:
        refined = bisect_many(f, xs[idx], xs[idx + 1], width)
        roots.extend(float(r) for r in refined)
    roots_arr = np.array(sorted(set(roots)))
    residual = float(np.max(np.abs(_eval_checked(f, roots_arr)))) if roots_arr.size else 0.0
    return RootList(function_id, (a, b), roots_arr, residual, grid)


def rayleigh_cubic(alpha: float, w) -> float:
    """The surface-wave cubic ``w^3 - 8w^2 + 8(3 - 2a)w + 16(a - 1)``."""
    return ((w - 8.0) * w + 8.0 * (3.0 - 2.0 * alpha)) * w + 16.0 * (alpha - 1.0)


@dataclass(frozen=True)
class RayleighRoot:
    """Distinguished root of the surface-wave cubic in (0, 1)."""

    alpha: float
    w1: float
    gamma_r: float


def rayleigh_root(alpha: float, grid: int = 64) -> RayleighRoot:
    """Unique root of the cubic in (0, 1) for speed ratio ``alpha`` in (0, 1).

    Multiple sign changes on the scan grid are a hard integrity error, not a
    tie-break; the root is polished to machine width and its residual must
    come out below 1e-12.
    """
    if not (0.0 < alpha < 1.0):
        raise InputError(f"rayleigh_root needs alpha in (0, 1), got {alpha}")
    found = bracket_roots(lambda w: rayleigh_cubic(alpha, w), 0.0, 1.0, grid, "rayleigh_cubic")
    if found.roots.size != 1:
        raise IntegrityError(
            f"expected exactly one sign change of the cubic on (0,1), found {found.roots.size}"
        )
    lo = max(0.0, found.roots[0] - 1e-12)
    hi = min(1.0, found.roots[0] + 1e-12)
    flo = rayleigh_cubic(alpha, lo)
    if flo > 0:  # widen until the bracket straddles the root again
        lo, hi = found.roots[0] - 1e-9, found.roots[0] + 1e-9
    while hi - lo > 4.0 * np.finfo(float).eps * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if (rayleigh_cubic(alpha, lo) <= 0) == (rayleigh_cubic(alpha, mid) <= 0):
            lo = mid
        else:
            hi = mid
    w1 = 0.5 * (lo + hi)
    if abs(rayleigh_cubic(alpha, w1)) > 1e-12:
        raise IntegrityError(f"cubic residual {rayleigh_cubic(alpha, w1):.3e} above 1e-12")
    if not (0.0 < w1 < 1.0):
        raise IntegrityError("root escaped (0, 1)")
    return RayleighRoot(alpha, w1, math.sqrt(w1))


# ---------------------------------------------------------------------------
# arctan integrals of the integral-family second coefficients
# ---------------------------------------------------------------------------

_GL_NODES_CACHE: dict = {}


def _gl_rule(n: int):
    if n not in _GL_NODES_CACHE:
        _GL_NODES_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_NODES_CACHE[n]


def _adaptive_gl(fn, a: float, b: float, tol: float, depth: int = 0) -> float:
    """Adaptive Gauss-Legendre with interval bisection (20 vs 40 nodes)."""
    x20, w20 = _gl_rule(20)
    x40, w40 = _gl_rule(40)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    coarse = half * float(np.dot(w20, fn(mid + half * x20)))
    fine = half * float(np.dot(w40, fn(mid + half * x40)))
    if abs(fine - coarse) <= tol or depth >= 24:
        return fine
    return _adaptive_gl(fn, a, mid, 0.5 * tol, depth + 1) + _adaptive_gl(
        fn, mid, b, 0.5 * tol, depth + 1
    )


def arctan_integral(d: int, alpha: float, kind: str) -> float:
    """Arctan boundary-layer integral over ``[sqrt(alpha), 1]``.

    ``kind`` selects the clamped ("dirichlet") or traction-free ("free")
    integrand.  Both have square-root behavior at the two endpoints; the
    substitution ``tau^2 = alpha + (1 - alpha) sin^2(theta)`` removes it, and
    the free-kind arctan argument is evaluated through ``arctan2`` so the
    endpoint limits (pi/2, or 0 in the degenerate alpha = 1/2 corner) come
    out exactly.  Absolute accuracy is 1e-10 or better.
    """
    if d < 2:
        raise InputError("dimension must be >= 2")
    if kind not in ("dirichlet", "free"):
        raise InputError(f"kind must be 'dirichlet' or 'free', got {kind!r}")
    if not (0.0 < alpha <= 1.0):
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    if alpha == 1.0:
        return 0.0

    one_minus = 1.0 - alpha

    def integrand(theta):
        s, c = np.sin(theta), np.cos(theta)
        tau_sq = alpha + one_minus * s * s
        tau = np.sqrt(tau_sq)
        jacobian = one_minus * s * c / tau
        root = one_minus * s * c          # sqrt((tau^2 - alpha)(1 - tau^2))
        if kind == "dirichlet":
            angle = np.arctan2(root, tau_sq)
        else:
            angle = np.arctan2((1.0 - 2.0 * tau_sq) ** 2, 4.0 * tau_sq * root)
        return tau ** (d - 2) * angle * jacobian

    return _adaptive_gl(integrand, 0.0, 0.5 * math.pi, 1e-12)


# ---------------------------------------------------------------------------
# gamma-family helpers
# ---------------------------------------------------------------------------


def gamma(x: float) -> float:
    """Euler gamma via the C library's Lanczos-class implementation."""
    return math.gamma(x)


def upper_incomplete_gamma(s: float, x: float) -> float:
    """Upper incomplete gamma for integer or half-integer ``s >= 1/2``.

    Built by upward recursion from ``exp(-x)`` (integer) or
    ``sqrt(pi) * erfc(sqrt(x))`` (half-integer); exactly the shapes the
    heat-trace tail bound needs.
    """
    if x < 0:
        raise InputError("upper_incomplete_gamma needs x >= 0")
    doubled = 2.0 * s
    if abs(doubled - round(doubled)) > 1e-12 or s < 0.5:
        raise InputError("only integer and half-integer s >= 1/2 are supported")
    if abs(s - round(s)) < 1e-12:
        base_s = 1.0
        value = math.exp(-x)
    else:
        base_s = 0.5
        value = math.sqrt(math.pi) * math.erfc(math.sqrt(x))
    current = base_s
    while current + 1e-9 < s:
        value = current * value + x ** current * math.exp(-x)
        current += 1.0
    return value
