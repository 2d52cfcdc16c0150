"""Self-contained invariant suite backing the `check` CLI subcommand.

Each check returns a measured value and its bound; the suite is meant to be
cheap enough to run before trusting any long computation (a few seconds,
dominated by one short evolution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .basis import ModeLabel, PhysicalParams, check_orthonormality, eigen_residual, free_mode
from .drive import coupling, coupling_matrix, time_profile
from .evolution import TimeGrid, energy_shift_numeric, evolve_mode
from .perturbation import (
    analytic_limit,
    delta_e1,
    delta_e2,
    delta_e2_via_amplitudes,
    partial_vacuum_sum,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    bound: float
    detail: str = ""


def _basis_orthonormality(p: PhysicalParams) -> CheckResult:
    dev = check_orthonormality(p, 100)
    return CheckResult("basis_orthonormality", dev < 1e-12, dev, 1e-12)


def _basis_eigen_relation(p: PhysicalParams) -> CheckResult:
    worst = max(
        eigen_residual(free_mode(ModeLabel(s, r), p), p)
        for r in range(-100, 101)
        for s in (-1, 1)
    )
    return CheckResult("basis_eigen_relation", worst < 1e-12, worst, 1e-12)


def _basis_pair_completeness(p: PhysicalParams) -> CheckResult:
    worst = 0.0
    for r in range(-100, 101):
        U = math.sqrt(p.L) * np.column_stack(
            [free_mode(ModeLabel(s, r), p).spinor for s in (1, -1)]
        )
        worst = max(worst, float(np.max(np.abs(U.conj().T @ U - np.eye(2)))))
    return CheckResult("basis_pair_completeness", worst < 1e-12, worst, 1e-12)


def _coupling_hermiticity(p: PhysicalParams) -> CheckResult:
    labels = [ModeLabel(s, r) for r in range(-6, 7) for s in (-1, 1)]
    M = coupling_matrix(labels, p)
    dev = float(np.max(np.abs(M - M.conj().T)))
    return CheckResult("coupling_hermiticity", dev < 1e-12, dev, 1e-12)


def _coupling_selection_rule(p: PhysicalParams) -> CheckResult:
    worst = 0.0
    for r in range(-4, 5):
        for dr in (0, p.w + 1, 2 * p.w + 1):
            if dr == p.w:
                continue
            v = coupling(ModeLabel(-1, r), ModeLabel(-1, r + dr), p).value
            worst = max(worst, abs(v))
    return CheckResult("coupling_selection_rule", worst == 0.0, worst, 0.0)


def _coupling_parity(p: PhysicalParams) -> CheckResult:
    worst = 0.0
    for s in (-1, 1):
        for r in range(0, 8):
            a = abs(coupling(ModeLabel(s, r), ModeLabel(s, r + p.w), p).value)
            b = abs(coupling(ModeLabel(s, -r), ModeLabel(s, -r - p.w), p).value)
            worst = max(worst, abs(a - b))
    return CheckResult("coupling_parity", worst < 1e-12, worst, 1e-12)


def _profile_decay(p: PhysicalParams) -> CheckResult:
    ts = np.linspace(0.037, 311.0, 1501)
    worst = float(max(abs(time_profile(t, p.m)) - 1.0 / abs(t) for t in ts))
    return CheckResult("profile_decay_bound", worst <= 1e-15, worst, 0.0)


def _first_order_vanishes(p: PhysicalParams) -> CheckResult:
    worst = max(abs(delta_e1(ModeLabel(s, r), p)) for r in range(-20, 21) for s in (-1, 1))
    return CheckResult("first_order_vanishes", worst == 0.0, worst, 0.0)


def _second_order_negative(p: PhysicalParams) -> CheckResult:
    worst = max(delta_e2(ModeLabel(-1, r), p) for r in range(-200, 201))
    return CheckResult("second_order_negative_branch", worst < 0.0, worst, 0.0)


def _oracle_agreement(p: PhysicalParams) -> CheckResult:
    worst = 0.0
    for r in range(-50, 51):
        a = delta_e2(ModeLabel(-1, r), p)
        b = delta_e2_via_amplitudes(ModeLabel(-1, r), p)
        worst = max(worst, abs(a - b) / abs(a))
    return CheckResult("second_order_oracle_agreement", worst < 1e-10, worst, 1e-10)


def _branch_antisymmetry(p: PhysicalParams) -> CheckResult:
    worst = max(
        abs(delta_e2(ModeLabel(1, r), p) + delta_e2(ModeLabel(-1, r), p))
        for r in range(-50, 51)
    )
    return CheckResult("second_order_branch_antisymmetry", worst == 0.0, worst, 0.0)


def _telescoped_vs_direct(p: PhysicalParams) -> CheckResult:
    worst = 0.0
    for R in (p.w, 5, 10, 25):
        if R < p.w:
            continue
        direct = sum(delta_e2(ModeLabel(-1, r), p) for r in range(-R, R + 1))
        tele = partial_vacuum_sum(R, p)
        worst = max(worst, abs(direct - tele) / abs(direct))
    return CheckResult("partial_sum_telescoping", worst < 1e-12, worst, 1e-12)


def _partial_sum_monotone(p: PhysicalParams) -> CheckResult:
    vals = [partial_vacuum_sum(R, p) for R in (10, 25, 50, 100, 200)]
    limit = analytic_limit(p)
    ok = all(abs(vals[i]) < abs(vals[i + 1]) <= abs(limit) for i in range(len(vals) - 1))
    rel = abs(vals[-1] - limit) / abs(limit)
    return CheckResult("partial_sum_monotone_to_limit", ok and rel < 1e-3, rel, 1e-3)


def _zero_coupling_identity(p: PhysicalParams, T: float) -> CheckResult:
    p0 = PhysicalParams(L=p.L, m=p.m, q=0.0, w=p.w)
    state = evolve_mode(ModeLabel(-1, 0), p0, TimeGrid(half_window=T), B=2)
    dev = abs(energy_shift_numeric(state))
    return CheckResult("zero_coupling_identity", dev == 0.0, dev, 0.0)


def _unitarity_short_run(p: PhysicalParams, T: float) -> CheckResult:
    state = evolve_mode(ModeLabel(-1, 0), p, TimeGrid(half_window=T), B=2)
    drift = abs(state.norm() - 1.0)
    return CheckResult("unitarity_short_run", drift < 1e-8, drift, 1e-8)


def run_checks(params: PhysicalParams, short_T: float = 50.0) -> list[CheckResult]:
    """Run every invariant check against `params`; never stops at a failure."""
    checks: list[Callable[[], CheckResult]] = [
        lambda: _basis_orthonormality(params),
        lambda: _basis_eigen_relation(params),
        lambda: _basis_pair_completeness(params),
        lambda: _coupling_hermiticity(params),
        lambda: _coupling_selection_rule(params),
        lambda: _coupling_parity(params),
        lambda: _profile_decay(params),
        lambda: _first_order_vanishes(params),
        lambda: _second_order_negative(params),
        lambda: _oracle_agreement(params),
        lambda: _branch_antisymmetry(params),
        lambda: _telescoped_vs_direct(params),
        lambda: _partial_sum_monotone(params),
        lambda: _zero_coupling_identity(params, short_T),
        lambda: _unitarity_short_run(params, short_T),
    ]
    results = []
    for fn in checks:
        try:
            results.append(fn())
        except Exception as exc:  # a crashed check is a failed check
            name = getattr(fn, "__name__", "check")
            results.append(CheckResult(name, False, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
    return results
