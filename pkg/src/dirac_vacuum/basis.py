"""Free-particle plane-wave spinor basis of the 1+1D Dirac Hamiltonian.

The single-particle Hamiltonian on a periodic box of length L is

    h = -i sigma_x d/dz + m sigma_z        (natural units, hbar = c = 1)

whose plane-wave eigenfunctions u exp(i p z) exp(-i eps t) carry momentum
p_r = 2 pi r / L and signed energy eps = sign * E_r, E_r = sqrt(p_r^2 + m^2).
The two-component spinors are normalized so that the box integral of
|phi|^2 is one, i.e. u^dag u = 1/L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ConfigError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class PhysicalParams:
    """Box length L, fermion mass m, coupling q and drive harmonic w.

    The drive wavenumber k_w = 2 pi w / L must stay below the mass m so the
    bandlimited time profile cannot excite cross-branch transitions.
    """

    L: float
    m: float
    q: float
    w: int = 1

    def __post_init__(self) -> None:
        for name in ("L", "m", "q"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ConfigError(f"{name} must be a finite number, got {v!r}")
        if self.L <= 0:
            raise ConfigError(f"box length L must be positive, got {self.L}")
        if self.m <= 0:
            raise ConfigError(f"mass m must be positive, got {self.m}")
        if not isinstance(self.w, int) or isinstance(self.w, bool) or self.w < 1:
            raise ConfigError(f"drive harmonic w must be a positive integer, got {self.w!r}")
        if self.k_w >= self.m:
            raise ConfigError(
                f"drive wavenumber k_w = 2*pi*w/L = {self.k_w:g} must be below "
                f"the mass m = {self.m:g}; increase L or m, or decrease w"
            )

    @property
    def k_w(self) -> float:
        return 2.0 * math.pi * self.w / self.L


class ModeLabel(NamedTuple):
    """Basis-mode label: energy sign (+1 or -1) and integer momentum index."""

    sign: int
    r: int


@dataclass(frozen=True)
class FreeMode:
    """One plane-wave eigenmode: label, momentum, energies and spinor."""

    label: ModeLabel
    p: float
    energy: float  # positive branch energy E_r
    eps: float     # signed energy sign * E_r
    spinor: np.ndarray = field(repr=False)  # shape (2,), complex


def momentum(r: int, params: PhysicalParams) -> float:
    """Momentum of mode index r on the periodic box, 2 pi r / L."""
    return 2.0 * math.pi * r / params.L


def momentum_space_hamiltonian(p: float, m: float) -> np.ndarray:
    """2x2 momentum-space Hamiltonian sigma_x * p + sigma_z * m."""
    return SIGMA_X * p + SIGMA_Z * m


def free_mode(label: ModeLabel, params: PhysicalParams) -> FreeMode:
    """Construct the free eigenmode for a label.

    The generic spinor is N * (1, p/(sign*E + m)) with real positive N.  At
    the degenerate point (sign=-1, r=0) that expression is 0/0; there the
    sigma_z eigenvector (0, 1)/sqrt(L) is used.  Only |overlaps|^2 enter any
    observable downstream, so the phase convention is harmless.
    """
    label = ModeLabel(*label)
    if label.sign not in (-1, 1):
        raise ConfigError(f"mode label sign must be +1 or -1, got {label.sign}")
    p = momentum(label.r, params)
    E = math.hypot(p, params.m)
    eps = label.sign * E
    if label.sign == -1 and label.r == 0:
        u = np.array([0.0, 1.0], dtype=complex) / math.sqrt(params.L)
    else:
        a = eps + params.m
        N = math.sqrt(a / (2.0 * params.L * eps))
        u = N * np.array([1.0, p / a], dtype=complex)
    return FreeMode(label=label, p=p, energy=E, eps=eps, spinor=u)


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Spinor inner product conj(a) . b."""
    return complex(np.vdot(a, b))


def check_orthonormality(params: PhysicalParams, r_max: int) -> float:
    """Largest deviation of the basis Gram matrix from the identity.

    Box integrals of phi_a^dag phi_b vanish exactly for distinct momentum
    indices (plane-wave orthogonality), so only same-r spinor pairs carry
    numerical content: the 2x2 Gram L * u_s^dag u_s' must be the identity.
    """
    if r_max < 0:
        raise ConfigError(f"r_max must be >= 0, got {r_max}")
    worst = 0.0
    eye = np.eye(2)
    for r in range(-r_max, r_max + 1):
        pair = [free_mode(ModeLabel(s, r), params).spinor for s in (-1, 1)]
        gram = params.L * np.array([[inner(a, b) for b in pair] for a in pair])
        worst = max(worst, float(np.max(np.abs(gram - eye))))
    return worst


def eigen_residual(mode: FreeMode, params: PhysicalParams) -> float:
    """Relative residual ||h(p) u - eps u|| / (|eps| ||u||)."""
    h = momentum_space_hamiltonian(mode.p, params.m)
    res = h @ mode.spinor - mode.eps * mode.spinor
    return float(np.linalg.norm(res) / (abs(mode.eps) * np.linalg.norm(mode.spinor)))
