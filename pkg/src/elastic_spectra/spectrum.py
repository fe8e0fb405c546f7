"""Certified spectra: the container, the counting function, and staircase math.

A ``Spectrum`` is a sorted multiset of (eigenvalue, multiplicity) pairs that
is complete below its stated ``lambda_max``.  Counting uses strict
inequality (``N(L) = #{k : L_k < L}``) and refuses queries beyond the
completeness bound rather than silently undercounting.

Besides counting, this module provides exact piecewise integration of
``N(s) * s^p`` over the staircase, which the averaging and heat-trace
machinery build on, and the delimited serialization shared by the box and
disk builders.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .core import BoundaryCondition, FlatDomain, LameParameters
from .errors import CompletenessError, InputError

MERGE_RTOL = 1e-9

#: Slack accepted when querying exactly at the completeness bound.
_COUNT_GUARD = 1.0 + 1e-9


def merge_entries(values: np.ndarray, mults: np.ndarray, rtol: float = MERGE_RTOL):
    """Sort and merge entries whose eigenvalues agree within ``rtol``.

    Returns ``(values, mults, coincidences)`` where ``coincidences`` counts
    merges between non-identical floats (logged by the disk builder).
    """
    values = np.asarray(values, dtype=float)
    mults = np.asarray(mults, dtype=np.int64)
    if values.size == 0:
        return values, mults, 0
    order = np.argsort(values, kind="stable")
    values = values[order]
    mults = mults[order]
    gaps = np.diff(values)
    tol = rtol * np.maximum(np.abs(values[1:]), 1.0)
    new_group = np.concatenate(([True], gaps > tol))
    coincidences = int(np.sum((~new_group[1:]) & (gaps > 0)))
    group_idx = np.cumsum(new_group) - 1
    n_groups = group_idx[-1] + 1
    merged_vals = np.zeros(n_groups)
    merged_mults = np.zeros(n_groups, dtype=np.int64)
    np.add.at(merged_mults, group_idx, mults)
    first_of_group = np.flatnonzero(new_group)
    merged_vals[:] = values[first_of_group]
    return merged_vals, merged_mults, coincidences


@dataclass(frozen=True)
class FamilyBlock:
    """Pre-merge rows of one wave family, kept for serialization."""

    label: str
    values: np.ndarray
    mults: np.ndarray
    angular: Optional[np.ndarray] = None


@dataclass
class Spectrum:
    """Sorted eigenvalue multiset, certified complete below ``lambda_max``."""

    values: np.ndarray
    mults: np.ndarray
    lambda_max: float
    domain: FlatDomain
    bc: BoundaryCondition
    params: Optional[LameParameters] = None
    components: Optional[list] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.mults = np.asarray(self.mults, dtype=np.int64)
        if self.values.shape != self.mults.shape or self.values.ndim != 1:
            raise InputError("values and multiplicities must be matching 1-D arrays")
        if self.values.size:
            if np.any(np.diff(self.values) <= 0):
                raise InputError("eigenvalues must be strictly ascending")
            if self.values[0] < 0:
                raise InputError("eigenvalues must be non-negative")
            if self.values[-1] > self.lambda_max * _COUNT_GUARD:
                raise InputError("entries exceed the stated completeness bound")
        if np.any(self.mults < 1):
            raise InputError("multiplicities must be positive")
        self._cum = np.cumsum(self.mults)

    @property
    def total_count(self) -> int:
        return int(self._cum[-1]) if self.values.size else 0

    def counting(self, lam) -> Union[int, np.ndarray]:
        """Strict counting function ``N(L) = #{k : L_k < L}`` with multiplicity.

        Refuses ``L`` beyond ``lambda_max`` (the answer would be a lower
        bound, not a count).
        """
        arr = np.asarray(lam, dtype=float)
        if np.any(arr > self.lambda_max * _COUNT_GUARD):
            raise CompletenessError(
                f"counting query beyond certified bound {self.lambda_max}"
            )
        idx = np.searchsorted(self.values, arr, side="left")
        cum = np.concatenate(([0], self._cum))
        out = cum[idx]
        if np.isscalar(lam) or arr.ndim == 0:
            return int(out)
        return out.astype(np.int64)

    def truncated(self, new_lambda_max: float) -> "Spectrum":
        """Copy restricted to eigenvalues at or below ``new_lambda_max``."""
        if new_lambda_max > self.lambda_max:
            raise CompletenessError("cannot extend a spectrum beyond its certified bound")
        keep = self.values <= new_lambda_max
        return Spectrum(
            self.values[keep],
            self.mults[keep],
            new_lambda_max,
            self.domain,
            self.bc,
            self.params,
            None,
            dict(self.meta),
        )

    # -- staircase integrals ------------------------------------------------

    def staircase_integral(self, a: float, b: float, power: float) -> float:
        """Exact ``integral_a^b N(s) s^power ds`` over the counting staircase."""
        if not (0.0 <= a <= b):
            raise InputError("need 0 <= a <= b")
        if b > self.lambda_max * _COUNT_GUARD:
            raise CompletenessError("integration beyond certified bound")
        if a == b or self.values.size == 0:
            return 0.0

        if power == -1.0:
            antider = np.log
        else:
            q = power + 1.0
            antider = lambda s: s ** q / q  # noqa: E731

        vals = self.values
        cum = self._cum
        i0 = int(np.searchsorted(vals, a, side="right"))
        i1 = int(np.searchsorted(vals, b, side="right"))
        # Breakpoints strictly inside (a, b) plus the endpoints.
        inner = vals[i0:i1]
        pts = np.concatenate(([a], inner, [b]))
        levels = np.concatenate(([cum[i0 - 1] if i0 > 0 else 0], cum[i0:i1]))
        f = antider(pts)
        return float(np.dot(levels, f[1:] - f[:-1]))

    # -- serialization ------------------------------------------------------

    def write_csv(self, path: str, config: Optional[dict] = None) -> None:
        """Delimited dump: ``eigenvalue,multiplicity,family[,angular_index]``.

        Family rows come from the pre-merge component blocks when present,
        so coincident eigenvalues of different families stay distinguishable;
        otherwise merged entries are emitted with family ``all``.  Leading
        comment lines embed the format version and the generating config.
        """
        rows = []
        has_angular = False
        if self.components:
            has_angular = any(blk.angular is not None for blk in self.components)
            for blk in self.components:
                ang = blk.angular if blk.angular is not None else np.full(blk.values.size, -1)
                for v, m, k in zip(blk.values, blk.mults, ang):
                    rows.append((float(v), int(m), blk.label, int(k)))
            rows.sort(key=lambda r: (r[0], r[2], r[3]))
        else:
            rows = [(float(v), int(m), "all", -1) for v, m in zip(self.values, self.mults)]
        lines = ["# format_version: 1"]
        lines.append("# config: " + json.dumps(config or {}, sort_keys=True))
        header = "eigenvalue,multiplicity,family"
        if has_angular:
            header += ",angular_index"
        lines.append(header)
        for v, m, fam, k in rows:
            line = f"{v:.17g},{m},{fam}"
            if has_angular:
                line += f",{k}"
            lines.append(line)
        atomic_write_text(path, "\n".join(lines) + "\n")


def counting(spectrum: Spectrum, lam) -> Union[int, np.ndarray]:
    """Module-level alias for :meth:`Spectrum.counting`."""
    return spectrum.counting(lam)


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file and rename, so failures leave nothing behind."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
