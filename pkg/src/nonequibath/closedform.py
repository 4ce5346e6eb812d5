"""Analytic results for the 3-level atom and the Einstein-type quotients.

Levels are labelled 1 < 2 < 3 with Bohr frequencies
``omega1 = e2 - e1``, ``omega2 = e3 - e1``, ``omega3 = e3 - e2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedSystem, NonPositiveBeta
from .field import FieldSpec, einstein_quotient, occupation
from .levels import LevelSystem


@dataclass(frozen=True)
class ThreeLevelParams:
    """Couplings, intensities and local inverse temperatures of a 3-level atom.

    ``beta`` may be ``inf`` (vacuum line). A line whose dipole element is
    zero carries no field data; use ``I = 0`` there.
    """

    omegas: tuple[float, float, float]
    d12: float
    d13: float
    d23: float
    I1: float
    I2: float
    I3: float
    beta1: float
    beta2: float
    beta3: float

    def __post_init__(self):
        w1, w2, w3 = self.omegas
        if not (w1 > 0 and w3 > 0):
            raise ValueError("Bohr frequencies must be positive")
        if abs(w2 - w1 - w3) > 1e-12 * w2:
            raise ValueError(f"omega2 must equal omega1 + omega3, got {self.omegas}")
        for name in ("d12", "d13", "d23", "I1", "I2", "I3"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("beta1", "beta2", "beta3"):
            if not getattr(self, name) > 0:
                raise NonPositiveBeta(f"{name} must be > 0")

    @classmethod
    def from_model(cls, system: LevelSystem, field: FieldSpec) -> "ThreeLevelParams":
        if system.n_levels != 3:
            raise ValueError("closed forms are available for 3-level systems only")
        e = system.energies
        d = system.dipole_strengths
        omegas = (float(e[1] - e[0]), float(e[2] - e[0]), float(e[2] - e[1]))
        couplings = (float(d[0, 1]), float(d[0, 2]), float(d[1, 2]))
        I, beta = [], []
        for w, dij in zip(omegas, couplings):
            if dij > 0 or field.covers(w):
                I.append(field.entry(w).intensity)
                beta.append(field.beta_at(w))
            else:
                I.append(0.0)
                beta.append(math.inf)
        return cls(omegas, *couplings, *I, *beta)

    @property
    def regime_gap(self) -> float:
        """``beta1 + beta3 - beta2``; positive means net emission."""
        return self.beta1 + self.beta3 - self.beta2


def _emit(I, beta):
    # I / (1 - exp(-beta)) == I (N + 1)
    return 0.0 if I == 0 else I / -math.expm1(-beta)


def _absorb(I, beta):
    # I / (exp(beta) - 1) == I N
    return 0.0 if I == 0 else I * occupation(beta)


def _check_connected(p):
    if sum(x > 0 for x in (p.d12, p.d13, p.d23)) < 2:
        raise DisconnectedSystem("at least two of d12, d13, d23 must be positive")


def stationary_3level(p: ThreeLevelParams) -> tuple[float, float, float]:
    """Unnormalised stationary populations ``(rho1, rho2, rho3)``."""
    _check_connected(p)
    e1, a1 = _emit(p.I1, p.beta1), _absorb(p.I1, p.beta1)
    e2, a2 = _emit(p.I2, p.beta2), _absorb(p.I2, p.beta2)
    e3, a3 = _emit(p.I3, p.beta3), _absorb(p.I3, p.beta3)
    c12_13 = p.d12 * p.d13
    c12_23 = p.d12 * p.d23
    c13_23 = p.d13 * p.d23
    rho1 = c12_13 * e1 * e2 + c12_23 * e1 * e3 + c13_23 * e2 * a3
    rho2 = c12_13 * a1 * e2 + c12_23 * a1 * e3 + c13_23 * a2 * e3
    rho3 = c12_13 * e1 * a2 + c12_23 * a1 * a3 + c13_23 * a2 * a3
    return rho1, rho2, rho3


def normalized_stationary_3level(p: ThreeLevelParams) -> np.ndarray:
    rho = np.array(stationary_3level(p))
    total = rho.sum()
    if not total > 0:
        raise DisconnectedSystem("closed-form populations vanish; no field drives the atom")
    return rho / total


def einstein_relation_2level(N: float) -> float:
    """Predicted ``rho_lower / rho_upper`` of a driven 2-level atom."""
    return einstein_quotient(N)


def double_einstein_quotient(beta2: float, beta3: float) -> float:
    """Predicted ``rho2 / rho1`` when the 1-2 transition is forbidden."""
    if not (beta2 > 0 and beta3 > 0):
        raise NonPositiveBeta("beta2 and beta3 must be > 0")
    return math.exp(beta3 - beta2)


def inversion_condition(beta3: float, beta2: float) -> bool:
    """True iff level 2 outpopulates level 1 (with ``d12 = 0``)."""
    if not (beta2 > 0 and beta3 > 0):
        raise NonPositiveBeta("beta2 and beta3 must be > 0")
    return beta3 > beta2


class Regime(str, enum.Enum):
    EMISSION = "emission"
    ABSORPTION = "absorption"
    EQUILIBRIUM = "equilibrium"


def regime_classifier(beta1: float, beta2: float, beta3: float, tol: float = 1e-12) -> Regime:
    """Sign of the stationary net photon production of a 3-level atom.

    ``beta2`` is the inverse temperature at ``omega1 + omega3``.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    s = beta1 + beta3 - beta2
    if s > tol:
        return Regime.EMISSION
    if s < -tol:
        return Regime.ABSORPTION
    return Regime.EQUILIBRIUM
