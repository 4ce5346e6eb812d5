"""Pauli-type master equation for the level populations.

For every allowed line ``lower -> upper`` with Bohr frequency ``omega`` and
squared dipole element ``d`` the field induces

    rate_down = 2 pi I(omega) (N(omega) + 1) d      (upper -> lower)
    rate_up   = 2 pi I(omega) N(omega) d            (lower -> upper)

and the populations obey ``d rho / dt = L rho`` with ``L`` column-conservative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ReducibleGenerator, StepTooLarge
from .field import FieldSpec
from .levels import BohrLine, LevelSystem, bohr_lines, validate_generic

# dt must not exceed this multiple of 1 / max|L_ii|
STABILITY_LIMIT = 0.1


@dataclass(frozen=True)
class LineRates:
    line: BohrLine
    rate_down: float
    rate_up: float


@dataclass(frozen=True, eq=False)
class Generator:
    """Rate matrix ``L`` together with the per-line rates it was built from."""

    matrix: np.ndarray
    lines: tuple[LineRates, ...]
    energies: np.ndarray

    @property
    def n_levels(self) -> int:
        return self.matrix.shape[0]

    @property
    def max_escape_rate(self) -> float:
        return float(np.max(-np.diag(self.matrix)))

    @property
    def rate_scale(self) -> float:
        """Largest single transition rate."""
        return max((max(r.rate_down, r.rate_up) for r in self.lines), default=0.0)

    def max_stable_dt(self) -> float:
        m = self.max_escape_rate
        return math.inf if m == 0 else STABILITY_LIMIT / m


def build_generator(system: LevelSystem, field: FieldSpec, generic_tol: float | None = None) -> Generator:
    """Assemble the rate matrix for ``system`` driven by ``field``.

    Raises
    ------
    DegenerateBohrFrequency
        If two coupled transitions share a Bohr frequency.
    MissingFieldEntry
        If ``field`` has no entry for one of the Bohr lines.
    """
    validate_generic(system, generic_tol)
    n = system.n_levels
    L = np.zeros((n, n))
    rates = []
    for line in bohr_lines(system):
        e = field.entry(line.omega)
        down = 2.0 * math.pi * e.intensity * (e.occupation + 1.0) * line.d
        up = 2.0 * math.pi * e.intensity * e.occupation * line.d
        lo, hi = line.lower, line.upper
        L[lo, hi] += down
        L[hi, hi] -= down
        L[hi, lo] += up
        L[lo, lo] -= up
        rates.append(LineRates(line, down, up))
    L.setflags(write=False)
    return Generator(L, tuple(rates), system.energies)


def as_state(rho, n: int | None = None) -> np.ndarray:
    """Validate a population vector (non-negative up to 1e-12, trace 1)."""
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 1 or (n is not None and rho.size != n):
        raise ValueError(f"state must be a vector of length {n}")
    if np.any(rho < -1e-12):
        raise ValueError("state has negative populations")
    if abs(rho.sum() - 1.0) > 1e-12:
        raise ValueError(f"state must sum to 1, sums to {rho.sum()!r}")
    return rho


def rk4_propagator(L: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step for ``y' = L y`` written as a matrix.

    For a constant linear right-hand side the four stages collapse to the
    degree-4 Taylor polynomial of ``exp(h L)``.
    """
    A = h * np.asarray(L)
    n = A.shape[0]
    P = np.eye(n)
    term = np.eye(n)
    for k in range(1, 5):
        term = term @ A / k
        P = P + term
    return P


def evolve(gen: Generator, rho0, t_final: float, dt: float, stride: int = 1):
    """Integrate the master equation with fixed-step RK4.

    The step actually used is ``t_final / ceil(t_final / dt)`` so the last
    sample lands on ``t_final``; it never exceeds ``dt``.

    Parameters
    ----------
    stride : int
        Keep every ``stride``-th step; the final state is always kept.

    Returns
    -------
    times : (m,) ndarray
    states : (m, n) ndarray
        Raw integrator output (no clamping or renormalisation).
    """
    rho = as_state(rho0, gen.n_levels).copy()
    if not t_final >= 0:
        raise ValueError("t_final must be >= 0")
    if not dt > 0:
        raise StepTooLarge(f"dt must be > 0, got {dt!r}")
    if dt > gen.max_stable_dt():
        raise StepTooLarge(f"dt={dt!r} exceeds stability limit {gen.max_stable_dt()!r}")
    if stride < 1:
        raise ValueError("stride must be >= 1")

    if t_final == 0:
        return np.array([0.0]), rho[np.newaxis, :]

    n_steps = math.ceil(t_final / dt)
    h = t_final / n_steps
    P = rk4_propagator(gen.matrix, h)
    kept = [k for k in range(0, n_steps + 1, stride)]
    if kept[-1] != n_steps:
        kept.append(n_steps)

    times = np.array([k * h for k in kept])
    times[-1] = t_final
    states = np.empty((len(kept), rho.size))
    states[0] = rho
    row = 1
    for k in range(1, n_steps + 1):
        rho = P @ rho
        if row < len(kept) and k == kept[row]:
            states[row] = rho
            row += 1
    return times, states


def connected_components(n: int, edges) -> list[set[int]]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i)
    return sorted(groups.values(), key=min)


def stationary_state(gen: Generator) -> np.ndarray:
    """Unique normalised kernel vector of the rate matrix.

    One row of ``L`` is replaced by the normalisation row and the resulting
    square system is solved directly.

    Raises
    ------
    ReducibleGenerator
        If the levels do not form a single connected component.
    """
    n = gen.n_levels
    edges = [(r.line.lower, r.line.upper) for r in gen.lines if r.rate_down > 0 or r.rate_up > 0]
    components = connected_components(n, edges)
    if len(components) > 1:
        raise ReducibleGenerator(components)

    A = np.array(gen.matrix)
    A[0, :] = 1.0
    b = np.zeros(n)
    b[0] = 1.0
    rho = np.linalg.solve(A, b)
    rho = np.clip(rho, 0.0, None)
    return rho / rho.sum()


def detailed_balance_residuals(gen: Generator, rho) -> list[tuple[BohrLine, float]]:
    """Net downward probability current ``rate_down*rho_upper - rate_up*rho_lower`` per line."""
    rho = np.asarray(rho, dtype=float)
    return [
        (r.line, r.rate_down * rho[r.line.upper] - r.rate_up * rho[r.line.lower])
        for r in gen.lines
    ]


def system_energy_rate(gen: Generator, rho) -> float:
    """``sum_sigma eps_sigma (L rho)_sigma``, the rate of change of the atomic energy."""
    return float(gen.energies @ (gen.matrix @ np.asarray(rho, dtype=float)))


def relaxation_gap(gen: Generator) -> float:
    """Smallest nonzero ``|Re lambda|`` of the rate matrix."""
    ev = np.linalg.eigvals(gen.matrix)
    mags = np.sort(np.abs(ev.real))
    scale = max(gen.max_escape_rate, 1e-300)
    nonzero = mags[mags > 1e-10 * scale]
    return float(nonzero[0]) if nonzero.size else 0.0
