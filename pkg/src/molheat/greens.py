"""Scattering Green tensor at coincident points above a planar reflector.

The numerical route integrates over the normal wave-vector component,
split into a propagating part (0 <= beta <= w/c, oscillatory) and an
evanescent part (beta = i b, exponentially damped).  Both parts are
handled by the kernel in :mod:`molheat.kernels`; this module lays out the
panels, adds the analytic tail beyond the evanescent cutoff and converts
back to SI units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .constants import c
from .errors import DomainError, QuadratureError
from .materials import HalfSpace, Reflector, Slab, eval_material

_8PI = 8.0 * math.pi


@dataclass(frozen=True)
class GreenDiag:
    """Diagonal of G1(r, r, w); ``g_yy == g_xx`` by symmetry (units 1/m).

    ``errors`` holds the absolute error estimates of
    (Re g_xx, Im g_xx, Re g_zz, Im g_zz); closed forms report zeros.
    """

    g_xx: complex
    g_zz: complex
    z: float
    omega: float
    errors: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    @property
    def im_trace(self) -> float:
        return 2.0 * self.g_xx.imag + self.g_zz.imag

    @property
    def im_trace_error(self) -> float:
        return 2.0 * self.errors[1] + self.errors[3]


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy controls for :func:`scattering_green`.

    ``abs_tol`` is in 1/m; ``None`` means 1e-20 * w/c.
    ``max_subdivisions`` caps the panel bisections per integral.
    """

    rel_tol: float = 1e-8
    abs_tol: Optional[float] = None
    max_subdivisions: int = 5000
    evanescent_cutoff_factor: float = 40.0

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-2:
            raise DomainError("rel_tol must lie in (0, 1e-2]")
        if self.max_subdivisions < 10:
            raise DomainError("max_subdivisions must be at least 10")
        if self.abs_tol is not None and not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not self.evanescent_cutoff_factor > 1:
            raise DomainError("evanescent_cutoff_factor must exceed 1")


DEFAULT_SPEC = QuadratureSpec()


def im_trace_G0(omega: float) -> float:
    """Im tr G0(r, r, w) = w / (2 pi c) in free space."""
    return omega / (2.0 * math.pi * c)


def _media(reflector: Reflector, omega: float):
    eps, mu = eval_material(reflector.material, omega)
    if isinstance(reflector, Slab):
        eps_s, mu_s = eval_material(reflector.substrate, omega)
        kd = omega / c * reflector.d
    elif isinstance(reflector, HalfSpace):
        eps_s, mu_s, kd = 1.0 + 0j, 1.0 + 0j, -1.0
    else:
        raise TypeError(f"not a reflector: {reflector!r}")
    return eps, mu, eps_s, mu_s, kd


def _insert(edges, points):
    pts = [p for p in points if edges[0] < p < edges[-1]]
    if not pts:
        return edges
    out = np.unique(np.concatenate([edges, pts]))
    # drop slivers that would only waste function evaluations
    keep = np.concatenate([[True], np.diff(out) > 1e-9 * (out[-1] - out[0])])
    keep[-1] = True
    return out[keep]


def propagating_edges(zeta, eps, mu, eps_s, mu_s):
    """Panel edges on t = beta c / w in [0, 1]: quarter-period panels of
    exp(2 i t zeta) plus the points where a medium's beta1 changes fastest."""
    n = max(1, math.ceil(4.0 * zeta / math.pi))
    edges = np.linspace(0.0, 1.0, n + 1)
    return _insert(edges, [math.sqrt(abs(1.0 - eps * mu)), math.sqrt(abs(1.0 - eps_s * mu_s))])


def evanescent_edges(zeta, eps, mu, eps_s, mu_s, kd, factor):
    """Geometric panel edges on x = b c / w in [0, X] and the cutoff X."""
    n = max(abs(np.sqrt(eps * mu)), abs(np.sqrt(eps_s * mu_s)))
    x_max = factor * max(0.5 / zeta, n)
    scales = [1.0 / n, 0.5 / zeta, math.sqrt(abs(eps * mu - 1.0)),
              math.sqrt(abs(eps_s * mu_s - 1.0)), 1.0]
    if kd > 0:
        scales.append(1.0 / kd)
    x0 = max(min(s for s in scales if s > 0) / 4.0, x_max * 1e-12)
    edges = [0.0]
    x = x0
    while x < x_max / 2.0:
        edges.append(x)
        x *= 4.0
    edges.append(x_max)
    return np.array(edges), x_max


def _tail(x_max, zeta, eps, mu, eps_s, mu_s, kd):
    # r_s, r_p frozen at the cutoff; integrand is then elementary
    rs, rp = kernels.reflection_coefficients(1, np.array([x_max]), eps, mu, eps_s, mu_s, kd)
    rs, rp = complex(rs[0]), complex(rp[0])
    damp = math.exp(-2.0 * x_max * zeta)
    if damp == 0.0:
        return 0j, 0j
    m0 = 1.0 / (2.0 * zeta)
    m2 = x_max ** 2 / (2.0 * zeta) + x_max / (2.0 * zeta ** 2) + 1.0 / (4.0 * zeta ** 3)
    return damp * (rs * m0 + rp * m2), damp * 2.0 * rp * (m0 + m2)


def scattering_green(z: float, omega: float, reflector: Reflector,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> GreenDiag:
    """Numerical scattering Green tensor at height ``z`` above ``reflector``.

    Raises
    ------
    QuadratureError
        If either integral misses its tolerance within
        ``spec.max_subdivisions`` bisections.
    """
    if not z > 0:
        raise DomainError("z must be positive")
    if not omega > 0:
        raise DomainError("omega must be positive")
    k = omega / c
    zeta = k * z
    eps, mu, eps_s, mu_s, kd = _media(reflector, omega)
    abs_tol_si = spec.abs_tol if spec.abs_tol is not None else 1e-20 * k
    abs_tol = abs_tol_si * _8PI / k

    results = []
    tail = (0j, 0j)
    for kind in (0, 1):
        if kind == 0:
            edges = propagating_edges(zeta, eps, mu, eps_s, mu_s)
        else:
            edges, x_max = evanescent_edges(zeta, eps, mu, eps_s, mu_s, kd,
                                            spec.evanescent_cutoff_factor)
            tail = _tail(x_max, zeta, eps, mu, eps_s, mu_s, kd)
        res = kernels.integrate(kind, edges, zeta, eps, mu, eps_s, mu_s, kd,
                                spec.rel_tol, abs_tol, spec.max_subdivisions)
        results.append(res)

    scale = k / _8PI
    i_xx = results[0][0] + results[1][0] + tail[0]
    i_zz = results[0][1] + results[1][1] + tail[1]
    tail_err = np.array([abs(tail[0].real), abs(tail[0].imag), abs(tail[1].real), abs(tail[1].imag)])
    err = (np.asarray(results[0][2]) + np.asarray(results[1][2]) + tail_err) * scale
    g = GreenDiag(complex(i_xx * scale), complex(i_zz * scale), float(z), float(omega),
                  tuple(float(e) for e in err))
    if not (results[0][5] and results[1][5]):
        part = "propagating" if not results[0][5] else "evanescent"
        raise QuadratureError(f"{part} integral not converged at z={z:g} m, omega={omega:g} rad/s "
                              f"after {spec.max_subdivisions} bisections",
                              estimate=g, error=float(err.max()))
    return g


def nonretarded_green(z: float, omega: float, eps: complex) -> GreenDiag:
    """Near-field closed form: c^2 (eps-1)/(eps+1) / (32 pi w^2 z^3), doubled on zz."""
    if not z > 0:
        raise DomainError("z must be positive")
    eps = complex(eps)
    g = c ** 2 / (32.0 * math.pi * omega ** 2 * z ** 3) * (eps - 1.0) / (eps + 1.0)
    return GreenDiag(g, 2.0 * g, float(z), float(omega))


def retarded_green(z: float, omega: float, eps: complex, mu: complex = 1.0) -> GreenDiag:
    """Far-field closed form: normal-incidence reflection times a spherical
    wave returning from the mirror image; g_zz vanishes at this order."""
    if not z > 0:
        raise DomainError("z must be positive")
    se, sm = np.sqrt(complex(eps)), np.sqrt(complex(mu))
    r = (sm - se) / (sm + se)
    g = np.exp(2j * z * omega / c) / (8.0 * math.pi * z) * r
    return GreenDiag(complex(g), 0j, float(z), float(omega))
