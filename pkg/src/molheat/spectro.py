"""Molecular structure: angular momentum algebra, fine structure and the
squared transition dipoles that feed the heating-rate formulas.

Quantum numbers may be passed as ints, floats or ``fractions.Fraction``;
half-integers are handled internally as doubled integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional

from . import constants as const
from .errors import DomainError

GROUND_STATES = ("Sigma1", "Sigma2", "Sigma3", "Pi2")
_SPIN = {"Sigma1": 1, "Sigma2": 2, "Sigma3": 3}  # 2S + 1


@dataclass(frozen=True)
class Molecule:
    """Spectroscopic constants of a diatomic molecule.

    Frequencies are ordinary frequencies in Hz; ``mu_e`` in C m,
    ``mu_e_prime`` in C, ``m_reduced`` in kg.
    """

    name: str
    ground_state_label: str
    B_e: float
    omega_e: float
    mu_e: float
    mu_e_prime: Optional[float]
    m_reduced: float
    A_so: Optional[float] = None
    d_vib_override: Optional[float] = None

    def __post_init__(self):
        if self.ground_state_label not in GROUND_STATES:
            raise DomainError(f"unknown ground state {self.ground_state_label!r}")
        for field in ("B_e", "omega_e", "mu_e", "m_reduced"):
            if not getattr(self, field) > 0:
                raise DomainError(f"{self.name}: {field} must be positive")
        if (self.A_so is not None) != (self.ground_state_label == "Pi2"):
            raise DomainError(f"{self.name}: A_so is required for, and only for, Pi2 states")


@dataclass(frozen=True)
class Transition:
    """One heating channel out of the ground state.

    ``omega`` is an angular frequency (rad/s); ``d2_total`` is the squared
    dipole summed over final and averaged over initial sublevels.
    """

    omega: float
    d2_total: float
    d2_z_fraction: float = 1.0 / 3.0
    label: str = ""

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("transition frequency must be positive")
        if self.d2_total < 0:
            raise DomainError("squared dipole must be non-negative")
        if not 0.0 <= self.d2_z_fraction <= 1.0:
            raise DomainError("d2_z_fraction must lie in [0, 1]")


@dataclass(frozen=True)
class FineStructure:
    """Spin-orbit/rotation eigenvalues of a 2Pi state at fixed J.

    Energies are E/h in Hz.  For J = 1/2 only the F2 level exists and
    ``E_F1`` is None.
    """

    J: float
    E_F1: Optional[float]
    E_F2: float
    c_plus: float
    c_minus: float
    Q: float


# --- angular momentum -------------------------------------------------------

def _twice(x) -> int:
    t = 2 * x
    n = round(float(t))
    if abs(float(t) - n) > 1e-9:
        raise DomainError(f"{x!r} is not an integer or half-integer")
    return n


def _lfact(n2: int) -> float:
    # log((n2/2)!) for an even doubled argument
    return math.lgamma(n2 // 2 + 1)


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol by the Racah sum, accumulated in log-factorials."""
    J1, J2, J3 = _twice(j1), _twice(j2), _twice(j3)
    M1, M2, M3 = _twice(m1), _twice(m2), _twice(m3)
    for J, M in ((J1, M1), (J2, M2), (J3, M3)):
        if J < 0 or abs(M) > J or (J - M) % 2:
            raise DomainError(f"invalid angular momentum pair j={J / 2}, m={M / 2}")
    if M1 + M2 + M3 != 0:
        return 0.0
    if (J1 + J2 + J3) % 2 or J3 > J1 + J2 or J3 < abs(J1 - J2):
        return 0.0

    log_delta = (_lfact(J1 + J2 - J3) + _lfact(J1 - J2 + J3) + _lfact(-J1 + J2 + J3)
                 - _lfact(J1 + J2 + J3 + 2))
    log_pre = 0.5 * (log_delta
                     + _lfact(J1 + M1) + _lfact(J1 - M1)
                     + _lfact(J2 + M2) + _lfact(J2 - M2)
                     + _lfact(J3 + M3) + _lfact(J3 - M3))

    kmin = max(0, J2 - J3 - M1, J1 - J3 + M2)
    kmax = min(J1 + J2 - J3, J1 - M1, J2 + M2)
    total = 0.0
    for K in range(kmin, kmax + 1, 2):
        log_den = (_lfact(K) + _lfact(J3 - J2 + K + M1) + _lfact(J3 - J1 + K - M2)
                   + _lfact(J1 + J2 - J3 - K) + _lfact(J1 - K - M1) + _lfact(J2 - K + M2))
        sign = -1.0 if (K // 2) % 2 else 1.0
        total += sign * math.exp(log_pre - log_den)
    phase = (J1 - J2 - M3) // 2
    return -total if phase % 2 else total


def dipole_u(J, Omega, M, Jp, Omegap, Mp, q) -> float:
    """Spherical component q of the internuclear unit vector between
    Hund's case (a) states |Omega J M> (bra) and |Omega' J' M'> (ket)."""
    if q not in (-1, 0, 1):
        raise DomainError("q must be -1, 0 or +1")
    for j, o, m in ((J, Omega, M), (Jp, Omegap, Mp)):
        if abs(o) > j or abs(m) > j:
            raise DomainError("projection exceeds angular momentum")
    a = wigner3j(J, 1, Jp, -M, q, Mp)
    if a == 0.0:
        return 0.0
    b = wigner3j(J, 1, Jp, -Omega, 0, Omegap)
    phase = (_twice(M) - _twice(Omega)) // 2
    sign = -1.0 if phase % 2 else 1.0
    return sign * math.sqrt((_twice(J) + 1) * (_twice(Jp) + 1)) * a * b


def _m_values(J):
    n = _twice(J)
    return [(-n + 2 * i) / 2 for i in range(n + 1)]


def line_strength(final: Dict[float, float], J, initial: Dict[float, float], Jp) -> float:
    """|d|^2 / mu_e^2 between two states given as {Omega: amplitude}
    expansions in the case (a) basis, summed over final M and averaged
    over initial M'."""
    total = 0.0
    mps = _m_values(Jp)
    for Mp in mps:
        for M in _m_values(J):
            for q in (-1, 0, 1):
                amp = 0.0
                for om, a in final.items():
                    for omp, b in initial.items():
                        amp += a * b * dipole_u(J, om, M, Jp, omp, Mp, q)
                total += amp * amp
    return total / len(mps)


# --- Sigma states -------------------------------------------------------------

def sigma_state(S, N, J) -> Dict[float, float]:
    """Case (b) |S N J M> expanded in case (a) |Omega J M> states."""
    sign = -1.0 if ((_twice(J) - _twice(S)) // 2) % 2 else 1.0
    out = {}
    for om in _m_values(S):
        if abs(om) > J:
            continue
        coef = sign * math.sqrt(2 * N + 1) * wigner3j(J, S, N, om, -om, 0)
        if coef != 0.0:
            out[om] = coef
    return out


def sigma_branching(molecule: Molecule) -> Dict[float, float]:
    """Fractions of mu_e^2 going to each J of the N=1 manifold."""
    if molecule.ground_state_label not in _SPIN:
        raise DomainError(f"{molecule.name} is not a Sigma molecule")
    S = (_SPIN[molecule.ground_state_label] - 1) / 2
    ground = sigma_state(S, 0, S)
    out = {}
    for J2 in range(abs(2 - _twice(S)), 2 + _twice(S) + 1, 2):
        J = J2 / 2
        out[J] = line_strength(sigma_state(S, 1, J), J, ground, S)
    return out


def sigma_rotational_channels(molecule: Molecule) -> List[Transition]:
    """The N=0 -> N=1 channel; spin-rotation splitting is neglected so all
    branches share one frequency."""
    branches = sigma_branching(molecule)
    omega = 2.0 * math.pi * 2.0 * molecule.B_e
    return [Transition(omega, molecule.mu_e ** 2 * sum(branches.values()), label="rot")]


# --- 2Pi states ---------------------------------------------------------------

def pi_fine_structure(B_e: float, A_so: float, J) -> FineStructure:
    _twice(J)
    if _twice(J) % 2 == 0 or J < 0.5:
        raise DomainError("2Pi levels need half-integer J >= 1/2")
    Y = A_so / B_e
    x = (J + 0.5) ** 2
    Q = math.sqrt(4 * x + Y * (Y - 4))
    c_plus = math.sqrt(max(0.0, 0.5 + (Y - 2) / (2 * Q)))
    c_minus = math.sqrt(max(0.0, 0.5 - (Y - 2) / (2 * Q)))
    E_F2 = B_e * (x - 1 + Q / 2)
    E_F1 = None if _twice(J) == 1 else B_e * (x - 1 - Q / 2)
    return FineStructure(float(J), E_F1, E_F2, c_plus, c_minus, Q)


def _pi_states(fs: FineStructure):
    J = fs.J
    f1 = {0.5: fs.c_plus, 1.5: fs.c_minus}
    f2 = {1.5: fs.c_plus, 0.5: -fs.c_minus}
    keep = lambda d: {om: a for om, a in d.items() if om <= J and a != 0.0}
    return keep(f1), keep(f2)


PI_CHANNELS = (("a", "F1", 2.5), ("b", "F2", 0.5), ("c", "F2", 1.5), ("d", "F2", 2.5))


def pi_rotational_channels(molecule: Molecule) -> List[Transition]:
    """Channels (a)-(d) out of the F1, J=3/2 ground level of a 2Pi molecule."""
    if molecule.ground_state_label != "Pi2":
        raise DomainError(f"{molecule.name} is not a 2Pi molecule")
    if molecule.A_so is None:
        raise DomainError(f"{molecule.name}: spin-orbit constant missing")
    g = pi_fine_structure(molecule.B_e, molecule.A_so, 1.5)
    ground = _pi_states(g)[0]
    out = []
    for tag, branch, J in PI_CHANNELS:
        fs = pi_fine_structure(molecule.B_e, molecule.A_so, J)
        f1, f2 = _pi_states(fs)
        state, energy = (f1, fs.E_F1) if branch == "F1" else (f2, fs.E_F2)
        ratio = line_strength(state, J, ground, 1.5)
        omega = 2.0 * math.pi * (energy - g.E_F1)
        out.append(Transition(omega, molecule.mu_e ** 2 * ratio, label=f"rot({tag})"))
    return out


def rotational_channels(molecule: Molecule) -> List[Transition]:
    if molecule.ground_state_label == "Pi2":
        return pi_rotational_channels(molecule)
    return sigma_rotational_channels(molecule)


def f_rot(molecule: Molecule) -> float:
    """Rotational factor multiplying the vibrational line strength."""
    if molecule.ground_state_label != "Pi2":
        return 1.0
    fs = pi_fine_structure(molecule.B_e, molecule.A_so, 1.5)
    cp2, cm2 = fs.c_plus ** 2, fs.c_minus ** 2
    return 14.0 / 15.0 * cp2 + 2.0 / 5.0 * cm2 + 4.0 / 15.0 * cp2 * cm2


def vibrational_channel(molecule: Molecule) -> Transition:
    """v=0 -> v=1 channel; rotational energy is left out of the frequency."""
    omega = 2.0 * math.pi * molecule.omega_e
    if molecule.d_vib_override is not None:
        d2 = molecule.d_vib_override
    elif molecule.mu_e_prime is not None:
        d2 = (const.hbar * molecule.mu_e_prime ** 2 * f_rot(molecule)
              / (4.0 * math.pi * molecule.m_reduced * molecule.omega_e))
    else:
        raise DomainError(f"{molecule.name}: no dipole derivative or vibrational dipole")
    return Transition(omega, d2, label="vib")


def channels(molecule: Molecule, which: str = "all") -> List[Transition]:
    """Heating channels selected by ``which`` in {"rot", "vib", "all"}."""
    if which not in ("rot", "vib", "all"):
        raise DomainError(f"unknown channel selector {which!r}")
    out = []
    if which in ("rot", "all"):
        out += rotational_channels(molecule)
    if which in ("vib", "all"):
        out.append(vibrational_channel(molecule))
    return out
