"""Non-equilibrium bosonic field sampled at the Bohr frequencies.

The field enters the kinetics only through the spectral intensity
``I(omega)`` and the Planck-type occupation ``N(omega)`` at each Bohr
frequency. ``N`` is the canonical variable; the local inverse temperature
``beta(omega) = log(1 + 1/N)`` is derived and is ``inf`` in the vacuum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import MissingFieldEntry, NonPositiveBeta, NonPositiveOccupation, ZeroOccupation

MODES = ("table-N", "table-beta", "gibbs")

# relative tolerance used to match a Bohr frequency against field entries
OMEGA_RTOL = 1e-9


def occupation(beta: float) -> float:
    """Mean quanta per mode, ``1 / (exp(beta) - 1)``."""
    if not beta > 0:
        raise NonPositiveBeta(f"beta must be > 0, got {beta!r}")
    if beta > 700.0:
        # expm1 overflows; 1 - exp(-beta) == 1 in double precision here
        return math.exp(-beta)
    return 1.0 / math.expm1(beta)


def local_beta(N: float) -> float:
    """Inverse of :func:`occupation`: ``log(1 + 1/N)``."""
    if not N > 0:
        raise NonPositiveOccupation(f"occupation must be > 0, got {N!r}")
    return math.log1p(1.0 / N)


def susceptivity_minus(I: float, N: float) -> float:
    """Real part of the emission susceptivity, ``pi * I * (N + 1)``."""
    _check_nonneg(I, N)
    return math.pi * I * (N + 1.0)


def susceptivity_plus(I: float, N: float) -> float:
    """Real part of the absorption susceptivity, ``pi * I * N``."""
    _check_nonneg(I, N)
    return math.pi * I * N


def einstein_quotient(N: float) -> float:
    """Emission/absorption quotient ``(N + 1) / N``, equal to ``exp(beta)``."""
    if N == 0:
        raise ZeroOccupation("emission/absorption quotient is infinite for N = 0")
    if not N > 0:
        raise NonPositiveOccupation(f"occupation must be > 0, got {N!r}")
    return (N + 1.0) / N


def _check_nonneg(I, N):
    if not (I >= 0 and N >= 0):
        raise ValueError(f"intensity and occupation must be >= 0, got I={I!r}, N={N!r}")


@dataclass(frozen=True)
class FieldEntry:
    omega: float
    intensity: float
    occupation: float

    @property
    def beta(self) -> float:
        return math.inf if self.occupation == 0 else local_beta(self.occupation)


@dataclass(frozen=True)
class FieldSpec:
    """Field state as a table of ``(omega, I, N)`` entries sorted by ``omega``.

    Use :meth:`from_occupations`, :meth:`from_betas` or :meth:`gibbs` rather
    than the raw constructor. ``betas`` keeps the supplied inverse
    temperatures for the beta-based modes so they are reported unrounded.
    """

    entries: tuple[FieldEntry, ...]
    mode: str = "table-N"
    beta0: float | None = None
    betas: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown field mode {self.mode!r}; expected one of {MODES}")
        omegas = [e.omega for e in self.entries]
        if any(not w > 0 for w in omegas):
            raise ValueError("field frequencies must be > 0")
        if omegas != sorted(omegas):
            raise ValueError("field entries must be sorted by omega")
        for a, b in zip(omegas, omegas[1:]):
            if _same_omega(a, b):
                raise ValueError(f"duplicate field entry near omega={a!r}")
        for e in self.entries:
            if not (e.intensity >= 0 and math.isfinite(e.intensity)):
                raise ValueError(f"intensity at omega={e.omega!r} must be finite and >= 0")
            if not (e.occupation >= 0 and math.isfinite(e.occupation)):
                raise ValueError(f"occupation at omega={e.omega!r} must be finite and >= 0")

    @classmethod
    def from_occupations(cls, table: Iterable[tuple[float, float, float]]) -> "FieldSpec":
        """Build from ``(omega, I, N)`` rows."""
        rows = sorted((float(w), float(i), float(n)) for w, i, n in table)
        return cls(tuple(FieldEntry(w, i, n) for w, i, n in rows), mode="table-N")

    @classmethod
    def from_betas(cls, table: Iterable[tuple[float, float, float]]) -> "FieldSpec":
        """Build from ``(omega, I, beta)`` rows with ``N = 1/(exp(beta) - 1)``."""
        rows = sorted((float(w), float(i), float(b)) for w, i, b in table)
        entries = tuple(FieldEntry(w, i, occupation(b)) for w, i, b in rows)
        return cls(entries, mode="table-beta", betas=tuple(b for _, _, b in rows))

    @classmethod
    def gibbs(cls, beta0: float, intensities: Mapping[float, float] | Iterable[tuple[float, float]]) -> "FieldSpec":
        """Equilibrium field, ``beta(omega) = beta0 * omega``."""
        if not beta0 > 0:
            raise NonPositiveBeta(f"beta0 must be > 0, got {beta0!r}")
        if isinstance(intensities, Mapping):
            intensities = intensities.items()
        rows = sorted((float(w), float(i)) for w, i in intensities)
        betas = tuple(beta0 * w for w, _ in rows)
        entries = tuple(FieldEntry(w, i, occupation(b)) for (w, i), b in zip(rows, betas))
        return cls(entries, mode="gibbs", beta0=float(beta0), betas=betas)

    def index(self, omega: float) -> int:
        for k, e in enumerate(self.entries):
            if _same_omega(e.omega, omega):
                return k
        raise MissingFieldEntry(omega)

    def entry(self, omega: float) -> FieldEntry:
        return self.entries[self.index(omega)]

    def covers(self, omega: float) -> bool:
        return any(_same_omega(e.omega, omega) for e in self.entries)

    def beta_at(self, omega: float) -> float:
        """Local inverse temperature, exact as supplied for beta-based modes."""
        k = self.index(omega)
        if self.betas is not None:
            return self.betas[k]
        return self.entries[k].beta

    def rescaled(self, factor: float) -> "FieldSpec":
        """Copy with every intensity multiplied by ``factor``."""
        entries = tuple(FieldEntry(e.omega, e.intensity * factor, e.occupation) for e in self.entries)
        return FieldSpec(entries, self.mode, self.beta0, self.betas)


def _same_omega(a: float, b: float) -> bool:
    return abs(a - b) <= OMEGA_RTOL * max(abs(a), abs(b))
