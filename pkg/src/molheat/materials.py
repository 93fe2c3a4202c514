"""Material response models and Fresnel reflection coefficients of a
half-space or a single slab on a substrate.

All wave vectors are in rad/m and all square roots use the branch
``Im >= 0`` (``Re >= 0`` on the real axis).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Tuple, Union

import numpy as np

from .constants import c
from .errors import DomainError, RangeError


@dataclass(frozen=True)
class Drude:
    """Free-electron metal, eps = 1 - wp^2 / (w (w + i gamma)), mu = 1."""

    omega_P: float
    gamma: float
    name: str = ""

    def __post_init__(self):
        if not (self.omega_P > 0 and self.gamma > 0):
            raise DomainError("Drude parameters must be positive")


@dataclass(frozen=True)
class Constant:
    """Frequency-independent eps and mu."""

    eps: complex
    mu: complex = 1.0
    name: str = ""

    def __post_init__(self):
        if complex(self.eps).imag < 0 or complex(self.mu).imag < 0:
            raise DomainError("passive media need Im eps >= 0 and Im mu >= 0")


@dataclass(frozen=True)
class Table:
    """Tabulated eps(omega), mu(omega), interpolated linearly in log(omega).

    ``rows`` is a sequence of ``(omega, eps, mu)`` with strictly increasing
    omega.
    """

    rows: Tuple[Tuple[float, complex, complex], ...]
    name: str = ""
    _cols: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple((float(w), complex(e), complex(m)) for w, e, m in self.rows)
        if len(rows) < 2:
            raise DomainError("a material table needs at least two rows")
        w = np.array([r[0] for r in rows])
        if np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise DomainError("table frequencies must be positive and increasing")
        eps = np.array([r[1] for r in rows])
        mu = np.array([r[2] for r in rows])
        if np.any(eps.imag < 0) or np.any(mu.imag < 0):
            raise DomainError("passive media need Im eps >= 0 and Im mu >= 0")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_cols", (np.log(w), eps, mu))


MaterialModel = Union[Drude, Constant, Table]

VACUUM = Constant(1.0, 1.0, name="vacuum")


@dataclass(frozen=True)
class HalfSpace:
    material: MaterialModel


@dataclass(frozen=True)
class Slab:
    """Layer of thickness ``d`` (m) coated onto a semi-infinite substrate."""

    material: MaterialModel
    d: float
    substrate: MaterialModel = VACUUM

    def __post_init__(self):
        if not self.d > 0:
            raise DomainError("slab thickness must be positive")


Reflector = Union[HalfSpace, Slab]


class WaveVectors(NamedTuple):
    beta: complex
    beta1: complex
    beta_s: complex
    q: float


def eval_material(material: MaterialModel, omega: float) -> Tuple[complex, complex]:
    """Return ``(eps, mu)`` at angular frequency ``omega``."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    if isinstance(material, Drude):
        eps = 1.0 - material.omega_P ** 2 / (omega * (omega + 1j * material.gamma))
        return complex(eps), 1.0 + 0j
    if isinstance(material, Constant):
        return complex(material.eps), complex(material.mu)
    if isinstance(material, Table):
        logw, eps, mu = material._cols
        x = np.log(omega)
        if not logw[0] <= x <= logw[-1]:
            raise RangeError(f"omega={omega:g} outside tabulated range "
                             f"[{np.exp(logw[0]):g}, {np.exp(logw[-1]):g}]")
        e = np.interp(x, logw, eps.real) + 1j * np.interp(x, logw, eps.imag)
        m = np.interp(x, logw, mu.real) + 1j * np.interp(x, logw, mu.imag)
        return complex(e), complex(m)
    raise TypeError(f"not a material model: {material!r}")


def sqrt_upper(x):
    """Square root on the branch Im >= 0 (Re >= 0 when Im == 0)."""
    r = np.sqrt(np.asarray(x, dtype=complex))
    flip = (r.imag < 0) | ((r.imag == 0) & (r.real < 0))
    r = np.where(flip, -r, r)
    return r if r.ndim else complex(r)


def wave_vectors(omega, q, eps, mu, eps_s=1.0, mu_s=1.0) -> WaveVectors:
    """Normal wave-vector components in vacuum, the layer and the substrate."""
    k2 = (omega / c) ** 2
    q2 = np.asarray(q, dtype=float) ** 2
    return WaveVectors(sqrt_upper(k2 - q2), sqrt_upper(k2 * eps * mu - q2),
                       sqrt_upper(k2 * eps_s * mu_s - q2), q)


def _fresnel(a, b, beta_a, beta_b):
    # (b beta_a - a beta_b)/(b beta_a + a beta_b): impedance-weighted interface
    return (b * beta_a - a * beta_b) / (b * beta_a + a * beta_b)


def reflection_half_space(omega, q, material):
    """``(r_s, r_p)`` of a vacuum/half-space interface at transverse wave
    vector ``q`` (scalar or array)."""
    eps, mu = eval_material(material, omega)
    wv = wave_vectors(omega, q, eps, mu)
    r_s = (mu * wv.beta - wv.beta1) / (mu * wv.beta + wv.beta1)
    r_p = (eps * wv.beta - wv.beta1) / (eps * wv.beta + wv.beta1)
    return r_s, r_p


def reflection_slab(omega, q, material, d, substrate=VACUUM):
    """``(r_s, r_p)`` of a layer of thickness ``d`` on a substrate.

    Uses the two-interface (Airy) form with the round-trip phase factor
    exp(2 i beta1 d), whose modulus never exceeds one.
    """
    if not d > 0:
        raise DomainError("slab thickness must be positive")
    eps, mu = eval_material(material, omega)
    eps_s, mu_s = eval_material(substrate, omega)
    wv = wave_vectors(omega, q, eps, mu, eps_s, mu_s)
    phase = np.exp(2j * wv.beta1 * d)
    out = []
    for m1, m2 in ((mu, mu_s), (eps, eps_s)):
        r01 = _fresnel(1.0, m1, wv.beta, wv.beta1)
        r12 = _fresnel(m1, m2, wv.beta1, wv.beta_s)
        out.append((r01 + r12 * phase) / (1.0 + r01 * r12 * phase))
    return tuple(out)


def reflection(omega, q, reflector: Reflector):
    if isinstance(reflector, HalfSpace):
        return reflection_half_space(omega, q, reflector.material)
    return reflection_slab(omega, q, reflector.material, reflector.d, reflector.substrate)


def refractive_scale(reflector: Reflector, omega: float) -> float:
    """max |sqrt(eps mu)| over the media of a reflector."""
    eps, mu = eval_material(reflector.material, omega)
    n = abs(np.sqrt(eps * mu))
    if isinstance(reflector, Slab):
        es, ms = eval_material(reflector.substrate, omega)
        n = max(n, abs(np.sqrt(es * ms)))
    return float(n)
