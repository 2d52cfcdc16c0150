"""Vacuum energy change: sum of negative-branch per-mode shifts.

The change in vacuum energy caused by the drive is the sum over the negative
branch of the per-mode shifts, regularized by a symmetric cutoff |r| <= R.
Two routes are provided: the closed-form second-order sum (fast, any R) and
full dynamical evolutions of every mode (slow, modest R).  A numeric sum is
always compared against the analytic partial sum at the *same* cutoff;
comparing it to the infinite-R limit would conflate truncation error with
dynamics error.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .basis import ModeLabel, PhysicalParams
from .errors import ConfigError, FitError
from .evolution import EnergyShiftRecord, TimeGrid, compute_shift_record
from .perturbation import analytic_limit, partial_vacuum_sum


@dataclass(frozen=True)
class VacuumReport:
    """Partial vacuum-energy sums with the closed-form limit attached.

    Values in partial_sums and limit_analytic include the q^2 factor, so they
    are energies, not energies-per-q^2.  analytic_at_cutoff holds the matched
    comparator q^2 * partial_vacuum_sum(R_sum) for numeric runs.
    """

    params: PhysicalParams
    mode: str  # "analytic" | "numeric"
    R_sum: int
    partial_sums: tuple[tuple[int, float], ...]
    limit_analytic: float
    relative_error: float
    per_mode: tuple[EnergyShiftRecord, ...] | None = None
    analytic_at_cutoff: float | None = None

    @property
    def value(self) -> float:
        return self.partial_sums[-1][1]


def vacuum_shift_analytic(params: PhysicalParams, R_list: list[int]) -> VacuumReport:
    """Second-order vacuum shift q^2 * partial sum at each cutoff in R_list."""
    if not R_list:
        raise ConfigError("R_list must be non-empty")
    if sorted(R_list) != list(R_list):
        raise ConfigError("R_list must be ascending")
    q2 = params.q**2
    partial = tuple((R, q2 * partial_vacuum_sum(R, params)) for R in R_list)
    limit = q2 * analytic_limit(params)
    final = partial[-1][1]
    rel = abs(final - limit) / abs(limit) if limit != 0.0 else 0.0
    return VacuumReport(
        params=params,
        mode="analytic",
        R_sum=R_list[-1],
        partial_sums=partial,
        limit_analytic=limit,
        relative_error=rel,
    )


def _one_record(args) -> EnergyShiftRecord:
    base, params, grid, B, margin = args
    return compute_shift_record(base, params, grid, B, margin)


def vacuum_shift_numeric(
    params: PhysicalParams,
    R_sum: int,
    grid: TimeGrid,
    B: int = 3,
    margin: float | None = None,
    workers: int | None = 1,
) -> VacuumReport:
    """Evolve every negative-branch mode with |r| <= R_sum and sum the shifts.

    Modes are independent, so they can be fanned out over processes
    (workers=None uses the CPU count); results are reassembled in ascending r
    regardless of scheduling, keeping reports deterministic.
    """
    if R_sum < 0:
        raise ConfigError(f"R_sum must be >= 0, got {R_sum}")
    bases = [ModeLabel(-1, r) for r in range(-R_sum, R_sum + 1)]
    tasks = [(b, params, grid, B, margin) for b in bases]
    if workers is None:
        workers = min(os.cpu_count() or 1, len(tasks))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_one_record, tasks))
    else:
        records = [_one_record(t) for t in tasks]

    # cumulative symmetric partial sums: R' = 0 .. R_sum, ascending
    by_r = {rec.label.r: rec.delta_e_numeric for rec in records}
    partial = []
    running = by_r.get(0, 0.0)
    partial.append((0, running))
    for R in range(1, R_sum + 1):
        running += by_r[R] + by_r[-R]
        partial.append((R, running))

    limit = params.q**2 * analytic_limit(params)
    final = partial[-1][1]
    rel = abs(final - limit) / abs(limit) if limit != 0.0 else 0.0
    comparator = (
        params.q**2 * partial_vacuum_sum(R_sum, params) if R_sum >= params.w else None
    )
    return VacuumReport(
        params=params,
        mode="numeric",
        R_sum=R_sum,
        partial_sums=tuple(partial),
        limit_analytic=limit,
        relative_error=rel,
        per_mode=tuple(records),
        analytic_at_cutoff=comparator,
    )


@dataclass(frozen=True)
class QScalingFit:
    """Log-log fit of |energy shift| against coupling strength."""

    exponent: float
    coefficient: float  # signed shift per q^2 inferred from the intercept
    records: tuple[EnergyShiftRecord, ...]
    records_negated: tuple[EnergyShiftRecord, ...] | None = None

    @property
    def odd_fraction(self) -> float:
        """Largest |odd part| / |even part| of the shift under q -> -q."""
        if not self.records_negated:
            return math.nan
        worst = 0.0
        for pos, neg in zip(self.records, self.records_negated):
            even = 0.5 * (pos.delta_e_numeric + neg.delta_e_numeric)
            odd = 0.5 * (pos.delta_e_numeric - neg.delta_e_numeric)
            if even != 0.0:
                worst = max(worst, abs(odd) / abs(even))
        return worst


def _check_consistent_signs(values: list[float]) -> None:
    signs = {math.copysign(1.0, v) for v in values if v != 0.0}
    if len(signs) > 1 or any(v == 0.0 for v in values):
        raise FitError(f"shift signs are inconsistent across couplings: {values}")


def q_scaling_fit(
    params: PhysicalParams,
    q_list: list[float],
    base: ModeLabel,
    grid: TimeGrid,
    B: int = 3,
    margin: float | None = None,
    include_negated: bool = True,
) -> QScalingFit:
    """Fit log|shift| vs log q over q_list; expects slope 2.

    The intercept gives the leading coefficient, to be compared with the
    closed-form second-order shift.  With include_negated the runs are
    repeated at -q so the odd-in-q component can be bounded.
    """
    if len(q_list) < 4:
        raise ConfigError(f"need at least 4 couplings for a scaling fit, got {len(q_list)}")
    if any(q <= 0 for q in q_list):
        raise ConfigError("q_list entries must be positive (signs are probed separately)")

    def run(q: float) -> EnergyShiftRecord:
        p = PhysicalParams(L=params.L, m=params.m, q=q, w=params.w)
        return compute_shift_record(base, p, grid, B, margin)

    records = tuple(run(q) for q in q_list)
    shifts = [r.delta_e_numeric for r in records]
    _check_consistent_signs(shifts)
    slope, intercept = np.polyfit(np.log(q_list), np.log(np.abs(shifts)), 1)
    coefficient = math.copysign(math.exp(intercept), shifts[0])
    records_neg = tuple(run(-q) for q in q_list) if include_negated else None
    return QScalingFit(
        exponent=float(slope),
        coefficient=float(coefficient),
        records=records,
        records_negated=records_neg,
    )
