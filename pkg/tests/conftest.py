import itertools
import math
from pathlib import Path

import numpy as np
import pytest

from nonequibath import FieldSpec, LevelSystem

FIXTURES = Path(__file__).parent / "fixtures"

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def three_level_omegas(energies):
    e = energies
    return (e[1] - e[0], e[2] - e[0], e[2] - e[1])


def random_three_level(rng, *, d12=None, beta_range=(0.1, 5.0), I_range=(0.1, 10.0), d_range=(0.1, 1.0)):
    """Random generic 3-level atom with an arbitrary beta table.

    Returns (system, field, betas, intensities) where betas/intensities are
    ordered (omega1, omega2, omega3).
    """
    while True:
        gaps = rng.uniform(0.5, 3.0, size=2)
        if abs(gaps[0] - gaps[1]) > 0.05:
            break
    energies = np.array([0.0, gaps[0], gaps[0] + gaps[1]])
    d = rng.uniform(*d_range, size=3)
    if d12 is not None:
        d[0] = d12
    D = np.array([[0, d[0], d[1]], [d[0], 0, d[2]], [d[1], d[2], 0]])
    omegas = three_level_omegas(energies)
    betas = rng.uniform(*beta_range, size=3)
    intensities = rng.uniform(*I_range, size=3)
    field = FieldSpec.from_betas(zip(omegas, intensities, betas))
    return LevelSystem(energies, D), field, betas, intensities


def random_system(rng, n):
    """Random generic n-level atom, all pairs coupled, random (I, N) table."""
    while True:
        energies = np.concatenate([[0.0], np.cumsum(rng.uniform(0.3, 2.0, size=n - 1))])
        omegas = sorted(energies[j] - energies[i] for i, j in itertools.combinations(range(n), 2))
        if n == 2 or min(np.diff(omegas)) > 1e-3:
            break
    d = rng.uniform(0.1, 1.0, size=(n, n))
    d = np.triu(d, 1)
    d = d + d.T
    table = [(w, rng.uniform(0.1, 10.0), rng.uniform(0.05, 3.0)) for w in omegas]
    return LevelSystem(energies, d), FieldSpec.from_occupations(table)


def tree_theorem_stationary(L):
    """Stationary distribution by the Markov chain tree theorem.

    Brute-force enumeration of spanning in-trees; independent of any linear
    solve. ``L[i, j]`` is the rate j -> i. Only for small n.
    """
    n = L.shape[0]
    weights = np.zeros(n)
    for root in range(n):
        others = [v for v in range(n) if v != root]
        # each non-root vertex picks one successor; keep acyclic choices
        for succ in itertools.product(range(n), repeat=len(others)):
            parent = dict(zip(others, succ))
            if any(v == p for v, p in parent.items()):
                continue
            ok = True
            for v in others:
                seen = set()
                while v != root:
                    if v in seen:
                        ok = False
                        break
                    seen.add(v)
                    v = parent[v]
                if not ok:
                    break
            if ok:
                weights[root] += math.prod(L[p, v] for v, p in parent.items())
    return weights / weights.sum()
