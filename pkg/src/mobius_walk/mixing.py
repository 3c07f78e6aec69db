"""Convergence of the time-averaged distribution to its limit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .limiting import Distribution, iter_running_average, limiting_distribution_general
from .spectral import Eigensystem, SpectralState, decompose_initial, eigensystem
from .walk import WalkParams, initial_state

EQUAL_EIGENVALUE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MixingReport:
    epsilon: float
    t_max: int
    m_epsilon: int | None  # None when the walk never settles within t_max
    times: np.ndarray
    distances: np.ndarray
    bounds: np.ndarray
    min_gap: float
    norm_kind: str = "total-variation"

    @property
    def reached(self) -> bool:
        return self.m_epsilon is not None


def _values(p) -> np.ndarray:
    return np.asarray(p.values if isinstance(p, Distribution) else p, dtype=float)


def distance(p, q) -> float:
    """Total variation distance, half the L1 norm of the difference."""
    a, b = _values(p), _values(q)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths differ: {a.shape} vs {b.shape}", field="distribution")
    return 0.5 * float(np.abs(a - b).sum())


def _inverse_gaps(values: np.ndarray, tol: float) -> np.ndarray:
    lam = values.reshape(-1)
    gaps = np.abs(lam[:, None] - lam[None, :])
    distinct = gaps > tol
    return np.where(distinct, 1.0 / np.where(distinct, gaps, 1.0), 0.0)


def convergence_bound(
    coeffs: SpectralState, eigsys: Eigensystem, t, tol: float = EQUAL_EIGENVALUE_TOL
):
    """``2 sum_{i,j: L_i != L_j} |a_i|^2 / (t |L_i - L_j|)``.

    ``t`` may be an array. Eigenvalue gaps are chord lengths on the unit
    circle, not phase differences.
    """
    weights = np.abs(coeffs.coefficients.reshape(-1)) ** 2
    const = 2.0 * float(weights @ _inverse_gaps(eigsys.values, tol).sum(axis=1))
    return const / np.asarray(t, dtype=float)


def min_eigenvalue_gap(eigsys: Eigensystem, tol: float = EQUAL_EIGENVALUE_TOL) -> float:
    """Smallest chord distance between two distinct eigenvalues."""
    lam = eigsys.values.reshape(-1)
    gaps = np.abs(lam[:, None] - lam[None, :])
    gaps = gaps[gaps > tol]
    return float(gaps.min()) if gaps.size else float("inf")


def log_samples(t_max: int, per_decade: int = 10) -> np.ndarray:
    decades = np.log10(max(int(t_max), 1))
    count = max(int(np.ceil(decades * per_decade)) + 1, 2)
    return np.unique(np.round(np.logspace(0, decades, count)).astype(int))


def distance_series(
    params: WalkParams,
    t_max: int,
    limit: Distribution | None = None,
    eigsys: Eigensystem | None = None,
) -> np.ndarray:
    """TV distance between ``pbar_t`` and the limit for every ``t = 1..t_max``."""
    eigsys = eigensystem(params) if eigsys is None else eigsys
    if limit is None:
        limit = limiting_distribution_general(params, eigsys=eigsys)
    pi = limit.values
    out = np.empty(int(t_max))
    for ts, pbar in iter_running_average(params, t_max, eigsys=eigsys):
        out[ts - 1] = 0.5 * np.abs(pbar - pi[None, :]).sum(axis=1)
    return out


def empirical_mixing_time(
    params: WalkParams,
    epsilon: float,
    t_max: int,
    samples: np.ndarray | None = None,
) -> MixingReport:
    """Smallest T with ``distance(pi, pbar_t) <= epsilon`` for all ``T <= t <= t_max``."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    eigsys = eigensystem(params)
    coeffs = decompose_initial(initial_state(params), eigsys)
    dist = distance_series(params, t_max, eigsys=eigsys)

    above = np.nonzero(dist > epsilon)[0]
    if above.size == 0:
        m_eps = 1
    elif above[-1] + 1 < t_max:
        m_eps = int(above[-1]) + 2
    else:
        m_eps = None

    times = log_samples(t_max) if samples is None else np.asarray(samples, dtype=int)
    return MixingReport(
        epsilon=float(epsilon),
        t_max=int(t_max),
        m_epsilon=m_eps,
        times=times,
        distances=dist[times - 1],
        bounds=convergence_bound(coeffs, eigsys, times),
        min_gap=min_eigenvalue_gap(eigsys),
    )


def decay_slope(times, distances) -> float:
    """Least-squares slope of ``log d`` against ``log t``."""
    return float(np.polyfit(np.log(times), np.log(distances), 1)[0])
