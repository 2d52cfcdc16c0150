"""External drive potential V(z, t) = 4 cos(k_w z) sin(m t)/t.

The time factor sin(m t)/t is bandlimited: its Fourier transform is pi on
|omega| < m and zero outside, so over an infinite window the drive only
connects free modes whose energy gap is below m.  Within one branch the gap
of a single w-hop is |E_{r+-w} - E_r| < k_w < m, always inside the band;
across branches the gap is at least 2m, always outside.

The spatial factor couples modes whose indices differ by exactly w:
2 cos(k_w z) = e^{i k_w z} + e^{-i k_w z} shifts the momentum index by +-w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import FreeMode, ModeLabel, PhysicalParams, free_mode, inner
from .errors import BandEdgeError, ConfigError

DEFAULT_EDGE_MARGIN = 0.05  # fraction of m; see band_edge_check


def time_profile(t: float, m: float) -> float:
    """sin(m t)/t, continued through the removable singularity at t = 0."""
    if t == 0.0:
        return m
    return math.sin(m * t) / t


def profile_transform(omega: float, m: float) -> float:
    """Full-line Fourier transform of the time profile at frequency omega.

    Equals pi inside the band |omega| < m, zero outside, and pi/2 exactly at
    the edge (symmetric-limit convention).  Configurations that would place a
    transition at the edge are rejected upstream, so the edge value never
    enters a physical result.
    """
    a = abs(omega)
    if a < m:
        return math.pi
    if a == m:
        return math.pi / 2.0
    return 0.0


@dataclass(frozen=True)
class DriveProfile:
    """Time profile of the drive plus the finite half-window T used numerically.

    The physical potential extends over all t; T only truncates the
    integration and is a convergence knob, never a physical modification.
    """

    params: PhysicalParams
    half_window: float

    def __post_init__(self) -> None:
        if not (self.half_window > 0 and math.isfinite(self.half_window)):
            raise ConfigError(f"half_window must be positive, got {self.half_window}")

    def __call__(self, t: float) -> float:
        return time_profile(t, self.params.m)

    def transform(self, omega: float) -> float:
        return profile_transform(omega, self.params.m)


@dataclass(frozen=True)
class CouplingMatrixElement:
    """Spatial matrix element of 4 cos(k_w z) between two free modes."""

    from_label: ModeLabel
    to_label: ModeLabel
    value: complex


def coupling(
    from_label: ModeLabel, to_label: ModeLabel, params: PhysicalParams
) -> CouplingMatrixElement:
    """Matrix element of 4 cos(k_w z): 2L u_to^dag u_from when the indices
    differ by exactly w, zero otherwise."""
    from_label = ModeLabel(*from_label)
    to_label = ModeLabel(*to_label)
    if abs(to_label.r - from_label.r) != params.w:
        return CouplingMatrixElement(from_label, to_label, 0.0 + 0.0j)
    uf = free_mode(from_label, params).spinor
    ut = free_mode(to_label, params).spinor
    return CouplingMatrixElement(from_label, to_label, 2.0 * params.L * inner(ut, uf))


def coupling_matrix(labels: list[ModeLabel], params: PhysicalParams) -> np.ndarray:
    """Hermitian coupling matrix M[i, j] = <label_i| 4 cos(k_w z) |label_j>."""
    modes = [free_mode(lab, params) for lab in labels]
    n = len(modes)
    M = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(modes[i].label.r - modes[j].label.r) == params.w:
                M[i, j] = 2.0 * params.L * inner(modes[i].spinor, modes[j].spinor)
                M[j, i] = M[i, j].conjugate()
    return M


def sample_potential(z, t, params: PhysicalParams):
    """Potential value 4 cos(k_w z) sin(m t)/t; accepts scalars or arrays."""
    m = params.m
    # sin(m t)/t = m * sinc(m t / pi), with the t = 0 limit built in
    prof = m * np.sinc(m * np.asarray(t, dtype=float) / np.pi)
    out = 4.0 * np.cos(params.k_w * np.asarray(z, dtype=float)) * prof
    if np.isscalar(z) and np.isscalar(t):
        return float(out)
    return out


def first_hop_gaps(base: ModeLabel, params: PhysicalParams) -> list[tuple[ModeLabel, float]]:
    """Transition energies |eps' - eps| for the four one-hop targets of base."""
    base = ModeLabel(*base)
    e0 = free_mode(base, params).eps
    out = []
    for sign in (-1, 1):
        for r in (base.r - params.w, base.r + params.w):
            lab = ModeLabel(sign, r)
            out.append((lab, abs(free_mode(lab, params).eps - e0)))
    return out


def band_edge_check(
    base: ModeLabel, params: PhysicalParams, margin: float | None = None
) -> None:
    """Reject configurations with a one-hop gap within `margin` of the bandlimit m.

    Near the edge the finite-window transform converges like
    1/(T * |m - gap|), which poisons every downstream tolerance.  The default
    margin is 0.05 * m.
    """
    if margin is None:
        margin = DEFAULT_EDGE_MARGIN * params.m
    for lab, gap in first_hop_gaps(base, params):
        if abs(gap - params.m) < margin:
            raise BandEdgeError(
                f"transition {tuple(ModeLabel(*base))} -> {tuple(lab)} has energy gap "
                f"{gap:.6g}, within {margin:g} of the bandlimit m = {params.m:g}; "
                f"change m, w, or L"
            )
