"""Physical parameters and closed-form phonon/material relations.

All dynamical quantities (mode frequencies, couplings, detunings) are
dimensionless multiples of one reference rate, conventionally the
exciton-fundamental coupling g_a.  Only `gnl_from_material` touches SI
units; it documents its own conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as _const

from .errors import InvalidSpectrumError

__all__ = [
    "PhononMode",
    "PhononSpectrum",
    "ModelParams",
    "Detunings",
    "MaterialConstants",
    "polaron_shift",
    "huang_rhys",
    "dressed_coupling",
    "detunings",
    "gnl_from_material",
]


@dataclass(frozen=True)
class PhononMode:
    """One acoustic phonon mode: exciton coupling matrix element and frequency."""

    coupling: float
    frequency: float

    def __post_init__(self):
        if not math.isfinite(self.coupling):
            raise InvalidSpectrumError(f"phonon coupling must be finite, got {self.coupling!r}")
        if not (math.isfinite(self.frequency) and self.frequency > 0.0):
            raise InvalidSpectrumError(f"phonon frequency must be > 0, got {self.frequency!r}")


@dataclass(frozen=True)
class PhononSpectrum:
    """Ordered collection of phonon modes; may be empty."""

    modes: tuple[PhononMode, ...] = ()

    @classmethod
    def from_pairs(cls, pairs) -> "PhononSpectrum":
        """Build from an iterable of (coupling, frequency) pairs."""
        return cls(tuple(PhononMode(float(c), float(w)) for c, w in pairs))


def polaron_shift(spectrum: PhononSpectrum) -> float:
    """Phonon renormalization of the exciton frequency: sum of M_q^2 / w_q."""
    return sum((m.coupling * m.coupling / m.frequency for m in spectrum.modes), 0.0)


def huang_rhys(spectrum: PhononSpectrum) -> float:
    """Dimensionless exciton-phonon coupling strength: sum of (M_q / w_q)^2."""
    return sum(((m.coupling / m.frequency) ** 2 for m in spectrum.modes), 0.0)


def dressed_coupling(g: float, lam: float) -> float:
    """Coupling dressed by the zero-temperature phonon displacement mean, g * exp(-lam/2)."""
    if lam < 0.0:
        raise ValueError(f"Huang-Rhys factor must be >= 0, got {lam!r}")
    return g * math.exp(-0.5 * lam)


@dataclass(frozen=True)
class Detunings:
    """Detunings of the shifted exciton from the fundamental mode and its second harmonic."""

    delta_a: float
    delta_b: float


def detunings(omega_ex: float, omega_a: float, shift: float = 0.0) -> Detunings:
    """delta_a = omega_ex - omega_a - shift, delta_b = omega_ex - 2*omega_a - shift.

    The difference delta_a - delta_b equals omega_a to machine precision.
    """
    return Detunings(
        delta_a=omega_ex - omega_a - shift,
        delta_b=omega_ex - 2.0 * omega_a - shift,
    )


@dataclass(frozen=True)
class ModelParams:
    """All frequencies and couplings of the coupled dot-cavity system.

    omega_b is pinned to 2*omega_a (doubly resonant cavity); `shift` is the
    phonon-induced renormalization subtracted from omega_ex.  Frequencies may
    be negative: the detuning-first construction (`from_detunings`) places no
    sign constraint on the implied mode frequency.
    """

    omega_a: float
    omega_ex: float
    g_a: float
    g_b: float
    g_nl: float
    lam: float = 0.0
    shift: float = 0.0
    omega_b: float | None = None

    def __post_init__(self):
        if self.omega_b is None:
            object.__setattr__(self, "omega_b", 2.0 * self.omega_a)
        elif self.omega_b != 2.0 * self.omega_a:
            raise ValueError(
                f"doubly resonant cavity requires omega_b == 2*omega_a, "
                f"got omega_b={self.omega_b!r} with omega_a={self.omega_a!r}"
            )
        if self.lam < 0.0:
            raise ValueError(f"Huang-Rhys factor must be >= 0, got {self.lam!r}")

    @classmethod
    def from_detunings(
        cls,
        g_a: float,
        g_b: float,
        g_nl: float,
        delta_a: float,
        delta_b: float,
        lam: float = 0.0,
        shift: float = 0.0,
    ) -> "ModelParams":
        """Construct from the detunings the figure captions parameterize by.

        Inverts the detuning definitions: omega_a = delta_a - delta_b and
        omega_ex = 2*delta_a - delta_b + shift.
        """
        omega_a = delta_a - delta_b
        omega_ex = 2.0 * delta_a - delta_b + shift
        return cls(omega_a=omega_a, omega_ex=omega_ex, g_a=g_a, g_b=g_b,
                   g_nl=g_nl, lam=lam, shift=shift)

    @classmethod
    def from_spectrum(
        cls,
        omega_a: float,
        omega_ex: float,
        g_a: float,
        g_b: float,
        g_nl: float,
        spectrum: PhononSpectrum,
    ) -> "ModelParams":
        """Construct with lam and shift derived from a phonon spectrum."""
        return cls(omega_a=omega_a, omega_ex=omega_ex, g_a=g_a, g_b=g_b, g_nl=g_nl,
                   lam=huang_rhys(spectrum), shift=polaron_shift(spectrum))

    def detunings(self) -> Detunings:
        return detunings(self.omega_ex, self.omega_a, self.shift)

    def dressed_g_a(self) -> float:
        return dressed_coupling(self.g_a, self.lam)

    def dressed_g_b(self) -> float:
        return dressed_coupling(self.g_b, self.lam)


@dataclass(frozen=True)
class MaterialConstants:
    """SI-unit inputs for the second-order-susceptibility coupling.

    chi2 in m/V, eps_r dimensionless, eps0 in F/m, vol_r in m^3.  vol_r is
    the effective overlap volume defined by the normalized mode profile
    (1/sqrt(vol_r) equals the cubed-profile integral over the nonlinear
    region); it is an input here, never computed.
    """

    chi2: float
    eps_r: float
    vol_r: float
    eps0: float = _const.epsilon_0

    def __post_init__(self):
        if not self.eps_r > 0.0:
            raise ValueError(f"relative permittivity must be > 0, got {self.eps_r!r}")
        if not self.vol_r > 0.0:
            raise ValueError(f"overlap volume must be > 0, got {self.vol_r!r}")


def gnl_from_material(mat: MaterialConstants, omega_a: float) -> float:
    """Two-mode nonlinear coupling rate from material constants.

    Evaluates eps0 * (hbar*omega_a / (eps0*eps_r))^(3/2) * chi2 / sqrt(vol_r),
    divided by hbar.  With SI inputs (omega_a in rad/s) the result is in
    rad/s; the dynamics modules expect it rescaled by the caller's reference
    rate.  Linear in chi2, scales as omega_a^(3/2) and vol_r^(-1/2).
    """
    if not omega_a > 0.0:
        raise ValueError(f"mode frequency must be > 0, got {omega_a!r}")
    hbar = _const.hbar
    photon_energy_term = (hbar * omega_a / (mat.eps0 * mat.eps_r)) ** 1.5
    return mat.eps0 * photon_energy_term * mat.chi2 / math.sqrt(mat.vol_r) / hbar
