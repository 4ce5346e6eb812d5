"""Photon emission/absorption rates per Bohr line.

Sign convention: positive flux means net emission of quanta into the field.
"""
from __future__ import annotations

import math
from typing import Callable, Mapping

import numpy as np

from .closedform import ThreeLevelParams, _check_connected, stationary_3level
from .errors import DisconnectedSystem
from .field import FieldSpec
from .levels import LevelSystem, bohr_lines

LineFlux = dict  # omega -> net photon rate, keys ascending


def line_fluxes(system: LevelSystem, field: FieldSpec, rho) -> LineFlux:
    """Mode-integrated photon production rate on every allowed line.

    ``Phi(omega) = 2 pi I d ((N + 1) rho_upper - N rho_lower)``
    """
    rho = np.asarray(rho, dtype=float)
    out = {}
    for line in bohr_lines(system):
        e = field.entry(line.omega)
        N = e.occupation
        out[line.omega] = 2.0 * math.pi * e.intensity * line.d * (
            (N + 1.0) * rho[line.upper] - N * rho[line.lower])
    return out


def total_photon_rate(fluxes: Mapping[float, float]) -> float:
    return math.fsum(fluxes.values())


def energy_rate(fluxes: Mapping[float, float], weight: Callable[[float], float] | None = None) -> float:
    """Field energy production ``sum_omega w(omega) Phi(omega)``.

    ``weight`` defaults to ``w(omega) = omega``, for which the result
    vanishes in any stationary state.
    """
    if weight is None:
        return math.fsum(w * phi for w, phi in fluxes.items())
    return math.fsum(weight(w) * phi for w, phi in fluxes.items())


def stationary_flux_3level_closed(p: ThreeLevelParams) -> tuple[float, float, float]:
    """Closed-form stationary ``(Phi(omega1), Phi(omega2), Phi(omega3))``.

    Normalised by the same trace as the closed-form populations, so the
    result is directly comparable with :func:`line_fluxes`.
    """
    _check_connected(p)
    if min(p.d12, p.d13, p.d23, p.I1, p.I2, p.I3) <= 0:
        raise DisconnectedSystem("closed-form flux needs all couplings and intensities > 0")
    s = p.beta1 - p.beta2 + p.beta3
    denom = math.expm1(p.beta1) * -math.expm1(-p.beta2) * math.expm1(p.beta3)
    K = (2.0 * math.pi * p.d12 * p.d13 * p.d23 * p.I1 * p.I2 * p.I3
         * math.expm1(s) / denom)
    Z = sum(stationary_3level(p))
    k = K / Z
    return k, -k, k
