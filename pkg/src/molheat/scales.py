"""Characteristic distances: the near-field scale, the exact critical
distance where surface and free-space heating are equal, and the
empirical Drude-metal estimates."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import brentq

from .constants import c
from .errors import DomainError, RootNotFoundError
from .greens import DEFAULT_SPEC, QuadratureSpec
from .materials import Reflector
from .rates import ratio_with_error
from .spectro import Transition

Z_MIN = 1e-9
Z_MAX = 1.0
POINTS_PER_DECADE = 40


@dataclass(frozen=True)
class CriticalDistanceResult:
    z_c: float
    bracket: Tuple[float, float]
    iterations: int
    residual: float


def z_nonretarded(omega: float, eps: complex) -> float:
    """(c/w) [Im eps / (2 |eps + 1|^2)]^(1/3), in m."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    eps = complex(eps)
    return c / omega * (max(eps.imag, 0.0) / (2.0 * abs(eps + 1.0) ** 2)) ** (1.0 / 3.0)


def z_nonretarded_drude(omega: float, omega_P: float, gamma: float) -> float:
    """Low-frequency Drude form c [gamma / (2 wP^2 w^2)]^(1/3)."""
    if not (omega > 0 and omega_P > 0 and gamma > 0):
        raise DomainError("inputs must be positive")
    if not (omega < gamma <= omega_P):
        warnings.warn("Drude shortcut assumes omega << gamma <= omega_P", RuntimeWarning,
                      stacklevel=2)
    return c * (gamma / (2.0 * omega_P ** 2 * omega ** 2)) ** (1.0 / 3.0)


def empirical_zc(omega: float, omega_P: float, gamma: float) -> float:
    """Fitted critical distance (3c/4) [gamma / (2 wP^2 w^3)]^(1/4), in m."""
    if not (omega > 0 and omega_P > 0 and gamma > 0):
        raise DomainError("inputs must be positive")
    return 0.75 * c * (gamma / (2.0 * omega_P ** 2 * omega ** 3)) ** 0.25


def empirical_rate(z: float, gamma0: float, z_c: float, z_nr: float) -> float:
    """gamma0 (1 + z_c^2/z^2 + z_nr^3/z^3)."""
    if not z > 0:
        raise DomainError("z must be positive")
    return gamma0 * (1.0 + (z_c / z) ** 2 + (z_nr / z) ** 3)


def critical_distance(transition: Transition, reflector: Reflector,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      z_min: float = Z_MIN, z_max: float = Z_MAX) -> CriticalDistanceResult:
    """Outermost height at which the surface-induced rate equals the
    free-space rate (total ratio 2).

    The scan starts at ten times c/(2w), moves outward while the ratio is
    still above 2, then walks inward on a logarithmic grid until the sign
    changes; brentq refines the bracket to 1e-8 relative.
    """
    evals = []

    def f(z):
        r = ratio_with_error(transition, z, reflector, spec)[0] - 2.0
        evals.append((z, r))
        return r

    step = 10.0 ** (1.0 / POINTS_PER_DECADE)
    z_hi = min(max(10.0 * c / (2.0 * transition.omega), z_min), z_max)
    f_hi = f(z_hi)
    while f_hi > 0:
        if z_hi >= z_max:
            raise RootNotFoundError("ratio still above 2 at the largest distance", evals)
        z_hi = min(z_hi * 10.0, z_max)
        f_hi = f(z_hi)

    n_steps = int(math.ceil(math.log10(z_hi / z_min) * POINTS_PER_DECADE))
    z_lo = None
    for i in range(1, n_steps + 1):
        z = max(z_hi / step, z_min)
        fz = f(z)
        if fz >= 0:
            z_lo = z
            break
        z_hi, f_hi = z, fz
        if z <= z_min:
            break
    if z_lo is None:
        raise RootNotFoundError(f"no crossing of ratio 2 in [{z_min:g}, {z_hi:g}] m", evals)
    if fz == 0:
        return CriticalDistanceResult(z_lo, (z_lo, z_hi), 0, 0.0)

    # bracket in log z keeps the relative tolerance meaningful
    root, info = brentq(lambda u: f(math.exp(u)), math.log(z_lo), math.log(z_hi),
                        xtol=1e-9, rtol=4 * np.finfo(float).eps, full_output=True)
    z_c = math.exp(root)
    residual = ratio_with_error(transition, z_c, reflector, spec)[0] - 2.0
    return CriticalDistanceResult(z_c, (z_lo, z_hi), info.iterations, residual)
