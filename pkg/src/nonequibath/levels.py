"""Atomic level structure: energies, squared dipole elements and Bohr lines."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBohrFrequency


@dataclass(frozen=True, eq=False)
class LevelSystem:
    """Energies and squared dipole matrix elements of an N-level atom.

    Parameters
    ----------
    energies : (n,) array_like
        Level energies (hbar = 1). Unsorted input is sorted and the dipole
        matrix is permuted consistently.
    dipole_strengths : (n, n) array_like
        Symmetric, non-negative, zero diagonal; entry ``[i, j]`` is
        ``|<i|D|j>|**2``.
    """

    energies: np.ndarray
    dipole_strengths: np.ndarray

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=float)
        dipole = np.asarray(self.dipole_strengths, dtype=float)
        if energies.ndim != 1 or energies.size < 2:
            raise ValueError("need at least two energy levels")
        n = energies.size
        if dipole.shape != (n, n):
            raise ValueError(f"dipole matrix must have shape {(n, n)}, got {dipole.shape}")
        if not (np.all(np.isfinite(energies)) and np.all(np.isfinite(dipole))):
            raise ValueError("energies and dipole strengths must be finite")
        if np.any(dipole < 0):
            raise ValueError("dipole strengths must be non-negative")
        if not np.array_equal(dipole, dipole.T):
            raise ValueError("dipole matrix must be symmetric")
        if np.any(np.diag(dipole) != 0):
            raise ValueError("dipole matrix must have a zero diagonal")

        order = np.argsort(energies, kind="stable")
        energies = energies[order]
        dipole = dipole[np.ix_(order, order)]
        if np.any(np.diff(energies) <= 0):
            raise ValueError("energies must be pairwise distinct")

        energies.setflags(write=False)
        dipole.setflags(write=False)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "dipole_strengths", dipole)

    @property
    def n_levels(self) -> int:
        return self.energies.size

    def __repr__(self):
        return (f"LevelSystem(energies={self.energies.tolist()}, "
                f"dipole_strengths={self.dipole_strengths.tolist()})")


@dataclass(frozen=True)
class BohrLine:
    """One allowed transition ``lower -> upper`` with ``omega > 0``."""

    lower: int
    upper: int
    omega: float
    d: float


def bohr_lines(system: LevelSystem) -> list[BohrLine]:
    """Allowed transitions of ``system``, sorted by Bohr frequency.

    Pairs with zero dipole strength are omitted.
    """
    e = system.energies
    d = system.dipole_strengths
    lines = [
        BohrLine(i, j, float(e[j] - e[i]), float(d[i, j]))
        for i, j in itertools.combinations(range(system.n_levels), 2)
        if d[i, j] > 0
    ]
    lines.sort(key=lambda line: (line.omega, line.lower, line.upper))
    return lines


def default_generic_tol(system: LevelSystem) -> float:
    return 1e-9 * float(system.energies[-1] - system.energies[0])


def validate_generic(system: LevelSystem, tol: float | None = None) -> None:
    """Raise :class:`DegenerateBohrFrequency` unless all coupled Bohr
    frequencies are pairwise separated by more than ``tol``.

    The default tolerance is ``1e-9`` times the largest Bohr frequency.
    """
    if tol is None:
        tol = default_generic_tol(system)
    if tol <= 0:
        raise ValueError("tol must be positive")
    lines = bohr_lines(system)
    # sorted by omega, so checking neighbours is enough
    for a, b in zip(lines, lines[1:]):
        if b.omega - a.omega <= tol:
            raise DegenerateBohrFrequency((a.lower, a.upper), (b.lower, b.upper), a.omega, b.omega)
