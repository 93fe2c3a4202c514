"""Thermal occupation, free-space and surface-modified transition rates,
and N-level rate-equation dynamics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm, null_space

from . import constants as const
from .errors import DomainError
from .greens import (DEFAULT_SPEC, QuadratureSpec, nonretarded_green, retarded_green,
                     scattering_green)
from .materials import Drude, Reflector, eval_material
from .spectro import Transition

MODES = ("numeric", "nonretarded", "retarded", "empirical")


@dataclass(frozen=True)
class ThermalBath:
    T: float

    def __post_init__(self):
        if not self.T >= 0:
            raise DomainError("temperature must be non-negative")


def thermal_n(omega: float, T: float) -> float:
    """Mean thermal photon number 1/(exp(hbar w / k T) - 1); 0 at T = 0."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    if T < 0:
        raise DomainError("temperature must be non-negative")
    if T == 0:
        return 0.0
    x = const.hbar * omega / (const.k_B * T)
    if x > 700:
        return 0.0
    return 1.0 / math.expm1(x)


def spontaneous_rate(omega: float, d2: float) -> float:
    """Einstein A coefficient w^3 |d|^2 / (3 pi eps0 hbar c^3)."""
    return omega ** 3 * d2 / (3.0 * math.pi * const.hbar * const.epsilon_0 * const.c ** 3)


def freespace_rate(transition: Transition, T: float) -> float:
    """Upward (absorption) rate of one channel in free space, 1/s."""
    return spontaneous_rate(transition.omega, transition.d2_total) * thermal_n(transition.omega, T)


def _weights(f_z: float) -> Tuple[float, float]:
    # rate ratio = 1 + (6 pi c / w) [(1 - f_z) Im g_xx + f_z Im g_zz]
    return 1.0 - f_z, f_z


def green_ratio(g, omega: float, f_z: float = 1.0 / 3.0) -> float:
    """Surface contribution Gamma1/Gamma0 for a dipole with normal fraction ``f_z``."""
    wx, wz = _weights(f_z)
    return 6.0 * math.pi * const.c / omega * (wx * g.g_xx.imag + wz * g.g_zz.imag)


def ratio_with_error(transition: Transition, z: float, reflector: Reflector,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> Tuple[float, float]:
    """Numerical Gamma/Gamma0 and its quadrature error estimate."""
    g = scattering_green(z, transition.omega, reflector, spec)
    wx, wz = _weights(transition.d2_z_fraction)
    pre = 6.0 * math.pi * const.c / transition.omega
    err = pre * (wx * g.errors[1] + wz * g.errors[3])
    return 1.0 + green_ratio(g, transition.omega, transition.d2_z_fraction), err


def surface_ratio(transition: Transition, z: float, reflector: Reflector,
                  spec: QuadratureSpec = DEFAULT_SPEC, mode: str = "numeric") -> float:
    """Gamma(z)/Gamma0, which is independent of temperature."""
    if not z > 0:
        raise DomainError("z must be positive")
    w = transition.omega
    if mode == "numeric":
        return ratio_with_error(transition, z, reflector, spec)[0]
    if mode == "nonretarded":
        eps, _ = eval_material(reflector.material, w)
        return 1.0 + green_ratio(nonretarded_green(z, w, eps), w, transition.d2_z_fraction)
    if mode == "retarded":
        eps, mu = eval_material(reflector.material, w)
        return 1.0 + green_ratio(retarded_green(z, w, eps, mu), w, transition.d2_z_fraction)
    if mode == "empirical":
        from .scales import critical_distance, empirical_zc, z_nonretarded

        eps, _ = eval_material(reflector.material, w)
        z_nr = z_nonretarded(w, eps)
        if isinstance(reflector.material, Drude):
            z_c = empirical_zc(w, reflector.material.omega_P, reflector.material.gamma)
        else:
            z_c = critical_distance(transition, reflector, spec).z_c
        return 1.0 + (z_c / z) ** 2 + (z_nr / z) ** 3
    raise DomainError(f"unknown mode {mode!r}; expected one of {MODES}")


def surface_rate(transition: Transition, T: float, z: float, reflector: Reflector,
                 spec: QuadratureSpec = DEFAULT_SPEC, mode: str = "numeric") -> Tuple[float, float]:
    """Heating rate of one channel at height ``z``.

    Returns
    -------
    (gamma, ratio)
        The rate in 1/s and its ratio to the free-space rate.
    """
    ratio = surface_ratio(transition, z, reflector, spec, mode)
    return ratio * freespace_rate(transition, T), ratio


# --- rate equations ------------------------------------------------------------

@dataclass
class RateMatrix:
    """``gamma[n, k]`` is the rate of n -> k in 1/s; energies in J."""

    labels: Tuple[str, ...]
    energies: np.ndarray
    gamma: np.ndarray
    populations: np.ndarray = field(default=None)

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=float)
        self.gamma = np.asarray(self.gamma, dtype=float)
        n = len(self.energies)
        if self.gamma.shape != (n, n) or len(self.labels) != n:
            raise DomainError("levels, energies and rate matrix sizes disagree")
        if np.any(self.gamma < 0) or np.any(np.diag(self.gamma) != 0):
            raise DomainError("rates must be non-negative with a zero diagonal")
        if self.populations is None:
            p = np.zeros(n)
            p[int(np.argmin(self.energies))] = 1.0
            self.populations = p
        self.populations = np.asarray(self.populations, dtype=float)
        if self.populations.shape != (n,) or np.any(self.populations < 0) \
                or abs(self.populations.sum() - 1.0) > 1e-12:
            raise DomainError("populations must be a probability vector")

    @property
    def generator(self) -> np.ndarray:
        """L with dp/dt = L p: off-diagonal L[n, k] = gamma[k, n]."""
        L = self.gamma.T.copy()
        L[np.diag_indices_from(L)] = -self.gamma.sum(axis=1)
        return L


def build_rate_matrix(levels: Sequence[Tuple[str, float]], dipoles, T: float,
                      z: Optional[float] = None, reflector: Optional[Reflector] = None,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      ratio: Optional[Callable[[float, float], float]] = None,
                      populations=None) -> RateMatrix:
    """Rate matrix from level energies and squared dipole matrix elements.

    Parameters
    ----------
    levels : sequence of (label, energy in J)
    dipoles : (N, N) array of |d_nk|^2 in C^2 m^2, symmetric
    z, reflector : optional surface; free space when omitted
    ratio : optional callable (omega, d2_z_fraction) -> Gamma/Gamma0 that
        replaces the Green-tensor evaluation (used by tests and caching)
    """
    labels = tuple(str(l) for l, _ in levels)
    E = np.array([e for _, e in levels], dtype=float)
    n = len(E)
    if n < 2:
        raise DomainError("at least two levels are needed")
    if len(np.unique(E)) != n:
        raise DomainError("level energies must be non-degenerate")
    d2 = np.asarray(dipoles, dtype=float)
    if d2.shape != (n, n) or np.any(d2 < 0) or not np.allclose(d2, d2.T, rtol=1e-12, atol=0):
        raise DomainError("dipoles must be a symmetric non-negative (N, N) array")
    if (z is None) != (reflector is None) and ratio is None:
        raise DomainError("z and reflector must be given together")

    gamma = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            if d2[a, b] == 0:
                continue
            lo, hi = (a, b) if E[a] < E[b] else (b, a)
            omega = (E[hi] - E[lo]) / const.hbar
            A = spontaneous_rate(omega, d2[a, b])
            if ratio is not None:
                A *= ratio(omega, 1.0 / 3.0)
            elif reflector is not None:
                A *= surface_ratio(Transition(omega, d2[a, b]), z, reflector, spec)
            nth = thermal_n(omega, T)
            gamma[hi, lo] = A * (nth + 1.0)
            gamma[lo, hi] = A * nth
    return RateMatrix(labels, E, gamma, populations)


def evolve_populations(rm: RateMatrix, t: float) -> np.ndarray:
    """Populations at time ``t`` from the matrix exponential of the generator."""
    if t < 0:
        raise DomainError("time must be non-negative")
    p = expm(rm.generator * t) @ rm.populations
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def steady_state(rm: RateMatrix) -> np.ndarray:
    """Stationary populations: the null vector of the generator."""
    ns = null_space(rm.generator)
    if ns.shape[1] != 1:
        raise DomainError("rate matrix is reducible; steady state not unique")
    v = np.abs(ns[:, 0])
    return v / v.sum()


def boltzmann(energies, T: float) -> np.ndarray:
    E = np.asarray(energies, dtype=float)
    if T == 0:
        p = (E == E.min()).astype(float)
        return p / p.sum()
    w = np.exp(-(E - E.min()) / (const.k_B * T))
    return w / w.sum()


def rigid_rotor_ladder(B_e: float, mu_e: float, levels: int):
    """Non-degenerate ladder N = 0..levels-1 with E = h B N(N+1) and
    nearest-neighbour squared dipoles mu_e^2 (N+1)/(2N+1)."""
    if levels < 2:
        raise DomainError("at least two levels are needed")
    lv = [(f"N={n}", const.h * B_e * n * (n + 1)) for n in range(levels)]
    d2 = np.zeros((levels, levels))
    for n in range(levels - 1):
        d2[n, n + 1] = d2[n + 1, n] = mu_e ** 2 * (n + 1) / (2 * n + 1)
    return lv, d2
