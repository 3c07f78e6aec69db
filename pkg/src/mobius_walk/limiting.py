"""
Limiting (long-run time-averaged) position distributions.

The time average of ``p_t`` converges to a distribution fixed by which
eigenvalues of the walk coincide. Three independent routes are provided:

* ``empirical_average_distribution``: brute-force running mean of ``p_t``.
* ``limiting_distribution_general``: the exact sum over pairs of equal
  eigenvalues, valid for any initial state.
* ``limiting_distribution_closed_form`` / ``qwc_limiting_distribution``:
  explicit trigonometric sums for the walker started on ``|0,0,0>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import NotDegenerateRegime, OddNNotApplicable, UnsupportedInitialState
from .spectral import (
    LABELS,
    Eigensystem,
    SpectralState,
    decompose_initial,
    eigensystem,
    spectral_distributions,
)
from .walk import Localized, WalkParams, initial_state

DEGENERACY_TOL = 1e-9
HALF_INTEGER_TOL = 1e-9
EXTREMUM_TOL = 1e-12


class AlphaClass(str, enum.Enum):
    NON_HALF_INTEGER = "NonHalfInteger"
    INTEGER = "IntegerAlpha"
    HALF_INTEGER = "HalfIntegerAlpha"


class Kind(str, enum.Enum):
    INSTANT = "Instant"
    AVERAGE = "Average"
    LIMITING = "Limiting"


class Provenance(str, enum.Enum):
    EMPIRICAL = "Empirical"
    CLOSED_FORM = "ClosedForm"
    GENERAL_SUM = "GeneralSum"


@dataclass(frozen=True, eq=False)
class Distribution:
    values: np.ndarray
    kind: Kind
    provenance: Provenance

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.min(initial=0.0) < -1e-9:
            raise ArithmeticError(f"distribution has negative entry {vals.min():.3g}")
        vals = np.clip(vals, 0.0, None)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n_nodes(self) -> int:
        return len(self.values)


Label = tuple[int, int, int]


@dataclass(frozen=True)
class DegeneracyReport:
    pairs: list[tuple[Label, Label]]
    alpha_class: AlphaClass
    excluded_k: list[int]
    relations: list[tuple[int, int]] = field(default_factory=list)
    index_formula_consistent: bool = True

    @property
    def is_uniform(self) -> bool:
        return not self.pairs

    def summary(self) -> dict:
        return {
            "is_uniform": self.is_uniform,
            "alpha_class": self.alpha_class.value,
            "n_pairs": len(self.pairs),
            "excluded_k": list(self.excluded_k),
            "index_formula_consistent": self.index_formula_consistent,
        }


def classify_alpha(alpha: float, tol: float = HALF_INTEGER_TOL) -> AlphaClass:
    twice = 2.0 * alpha
    nearest = round(twice)
    if abs(twice - nearest) >= tol:
        return AlphaClass.NON_HALF_INTEGER
    return AlphaClass.INTEGER if nearest % 2 == 0 else AlphaClass.HALF_INTEGER


def is_degenerate_regime(params: WalkParams) -> bool:
    """Even N with integer alpha, or odd N with half-integer alpha."""
    cls = classify_alpha(params.alpha)
    if params.n_nodes % 2 == 0:
        return cls is AlphaClass.INTEGER
    return cls is AlphaClass.HALF_INTEGER


def _is_multiple(x, period: float, tol: float = 1e-9):
    ratio = np.asarray(x, dtype=float) / period
    return np.abs(ratio - np.round(ratio)) < tol


def self_paired_k(n_nodes: int, shift: float) -> np.ndarray:
    """Momenta whose partner ``N/2 + 2*shift - k`` is themselves (mod N).

    These are the ``k`` with ``k - shift`` congruent to ``N/4`` modulo ``N/2``.
    """
    k = np.arange(n_nodes)
    return k[_is_multiple(k - shift - n_nodes / 4.0, n_nodes / 2.0)]


def _index_relation(n_nodes: int, alpha: float, s: int, k: int, kp: int):
    """Odd ``n`` with ``k + k' = n*N/2 + sign*alpha`` (sign + for s=0), or None."""
    sign = 1 if s == 0 else -1
    n_val = (k + kp - sign * alpha) / (n_nodes / 2.0)
    n_int = int(round(n_val))
    if abs(n_val - n_int) < 1e-6 and n_int % 2 != 0:
        return n_int, sign
    return None


def degeneracy_report(
    params: WalkParams, tol: float = DEGENERACY_TOL, eigsys: Eigensystem | None = None
) -> DegeneracyReport:
    """Find same-label eigenvalue coincidences across distinct momenta.

    Detection compares eigenvalues directly; the integer index relation
    ``k + k' = n*N/2 +/- alpha`` (n odd) is only used as a cross-check.
    """
    eigsys = eigensystem(params) if eigsys is None else eigsys
    n = params.n_nodes
    pairs, relations = [], []
    consistent = True
    for i, (s, r) in enumerate(LABELS):
        vals = eigsys.values[:, i]
        close = np.abs(vals[:, None] - vals[None, :]) < tol
        for k, kp in zip(*np.nonzero(np.triu(close, 1))):
            k, kp = int(k), int(kp)
            pairs.append(((s, r, k), (s, r, kp)))
            rel = _index_relation(n, params.alpha, s, k, kp)
            relations.append(rel)
            consistent &= rel is not None

    if params.is_hadamard:
        found = {(a[0], a[1], a[2], b[2]) for a, b in pairs}
        for s, r in LABELS:
            target = n / 2.0 + (params.alpha if s == 0 else -params.alpha)
            if not _is_multiple(target, 1.0):
                continue
            for k in range(n):
                kp = int(round(target - k)) % n
                if kp != k and (s, r, min(k, kp), max(k, kp)) not in found:
                    consistent = False

    excluded = sorted(
        set(self_paired_k(n, params.alpha / 2.0)) | set(self_paired_k(n, -params.alpha / 2.0))
    )
    return DegeneracyReport(
        pairs=pairs,
        alpha_class=classify_alpha(params.alpha),
        excluded_k=[int(k) for k in excluded],
        relations=relations,
        index_formula_consistent=bool(consistent),
    )


# -- empirical time average --------------------------------------------------


def iter_running_average(
    params: WalkParams,
    t_max: int,
    chunk: int = 2048,
    eigsys: Eigensystem | None = None,
    coeffs: SpectralState | None = None,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(ts, pbar)`` blocks of the running mean ``(1/t) sum_{u=1..t} p_u``."""
    eigsys = eigensystem(params) if eigsys is None else eigsys
    if coeffs is None:
        coeffs = decompose_initial(initial_state(params), eigsys)
    total = np.zeros(params.n_nodes)
    for start in range(1, int(t_max) + 1, chunk):
        ts = np.arange(start, min(int(t_max), start + chunk - 1) + 1)
        p = spectral_distributions(coeffs, eigsys, ts)
        csum = np.cumsum(p, axis=0) + total
        total = csum[-1]
        yield ts, csum / ts[:, None]


def empirical_average_distribution(
    params: WalkParams, T: int, eigsys: Eigensystem | None = None
) -> Distribution:
    """Mean of ``p_t`` over ``t = 1..T``, using spectral evolution."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    pbar = None
    for _, block in iter_running_average(params, T, eigsys=eigsys):
        pbar = block[-1]
    return Distribution(pbar, Kind.AVERAGE, Provenance.EMPIRICAL)


# -- exact limiting distributions --------------------------------------------


def limiting_distribution_general(
    params: WalkParams,
    report: DegeneracyReport | None = None,
    eigsys: Eigensystem | None = None,
) -> Distribution:
    """Exact limit from the equal-eigenvalue pairs, for any initial state.

    ``pi(v) = (1/N) sum |C|^2 + (2/N) Re sum_pairs C C'* <chi'|chi> e^{2i pi (k-k') v / N}``.
    Pairs with different labels drop out because their (coin, rotation)
    vectors are orthogonal.
    """
    eigsys = eigensystem(params) if eigsys is None else eigsys
    report = degeneracy_report(params, eigsys=eigsys) if report is None else report
    n = params.n_nodes
    coeffs = decompose_initial(initial_state(params), eigsys).coefficients
    v = np.arange(n)
    pi = np.full(n, np.sum(np.abs(coeffs) ** 2) / n)
    for (s, r, k), (_, _, kp) in report.pairs:
        i = 2 * s + r
        overlap = np.vdot(eigsys.vectors[kp, i], eigsys.vectors[k, i])
        amp = coeffs[k, i] * np.conj(coeffs[kp, i]) * overlap
        pi += 2.0 * np.real(amp * np.exp(2j * np.pi * (k - kp) * v / n)) / n
    return Distribution(pi, Kind.LIMITING, Provenance.GENERAL_SUM)


def _trig_sum(n_nodes: int, ks: np.ndarray, freq: np.ndarray, denom_arg: np.ndarray) -> np.ndarray:
    v = np.arange(n_nodes)[:, None]
    num = np.cos(2 * np.pi * v * freq / n_nodes) - np.cos(2 * np.pi * (v + 1) * freq / n_nodes)
    return (num / (1.0 + np.cos(denom_arg) ** 2)).sum(axis=1)


def qwc_limiting_distribution(n_nodes: int, p0: int = 0) -> Distribution:
    """Limiting distribution of the Hadamard walk on an even cycle from ``|0>|p0>``.

    Momenta ``N/4`` and ``3N/4`` have no partner and are left out of the sum;
    including them breaks normalization when 4 divides N.
    """
    if n_nodes % 2:
        raise OddNNotApplicable(
            f"closed form needs an even number of nodes, got {n_nodes}", field="nodes"
        )
    ks = np.setdiff1d(np.arange(n_nodes), self_paired_k(n_nodes, 0.0))[None, :]
    total = _trig_sum(n_nodes, ks, 2 * ks, 2 * np.pi * ks / n_nodes)
    sign = (-1.0) ** np.arange(n_nodes)
    pi = 1.0 / n_nodes + sign * total / (2.0 * n_nodes**2)
    return Distribution(np.roll(pi, p0), Kind.LIMITING, Provenance.CLOSED_FORM)


def limiting_distribution_closed_form(params: WalkParams) -> Distribution:
    """Explicit limit for the Hadamard walk started on ``|s=0, r=0, j=0>``.

    Raises
    ------
    NotDegenerateRegime
        Unless N is even with integer alpha or N is odd with half-integer
        alpha (elsewhere the limit is uniform and this formula does not hold).
    UnsupportedInitialState
        For any other initial state or coin.
    """
    if not is_degenerate_regime(params):
        raise NotDegenerateRegime(
            f"closed form needs integer alpha for even N or half-integer alpha for odd N "
            f"(N={params.n_nodes}, alpha={params.alpha})",
            field="alpha",
        )
    if params.initial != Localized(0, 0, 0) or not params.is_hadamard:
        raise UnsupportedInitialState(
            "closed form is only valid for the Hadamard walk started on |0,0,0>",
            field="init",
        )
    n, alpha = params.n_nodes, params.alpha
    total = np.zeros(n)
    for sign in (-1.0, 1.0):
        # the (2k - alpha) sum drops k - alpha/2 = N/4 mod N/2, and vice versa
        ks = np.setdiff1d(np.arange(n), self_paired_k(n, -sign * alpha / 2.0))[None, :]
        total += _trig_sum(n, ks, 2 * ks + sign * alpha, 2 * np.pi * ks / n + sign * np.pi * alpha / n)
    pi = 1.0 / n + (-1.0) ** np.arange(n) * total / (4.0 * n**2)
    return Distribution(pi, Kind.LIMITING, Provenance.CLOSED_FORM)


# -- shape of non-uniform limits ---------------------------------------------


def _is_hill(values: np.ndarray, v: int, tol: float) -> bool:
    n = len(values)
    return values[v] >= max(values[(v - 1) % n], values[(v + 1) % n]) - tol


def _is_valley(values: np.ndarray, v: int, tol: float) -> bool:
    n = len(values)
    return values[v] <= min(values[(v - 1) % n], values[(v + 1) % n]) + tol


def extremum_pattern(dist: Distribution, p0: int = 0, tol: float = EXTREMUM_TOL) -> str:
    """Classify the limit around the start node and its antipode.

    Returns ``"two_hills"``, ``"hill_valley"`` or ``"other"``. Extrema of the
    walk started on ``|0,0,p0>`` are two-node plateaus, so weak local
    extrema are used.
    """
    vals = np.asarray(dist.values)
    n = len(vals)
    if n % 2:
        return "other"
    anti = (p0 + n // 2) % n
    if not _is_hill(vals, p0, tol):
        return "other"
    if _is_hill(vals, anti, tol):
        return "two_hills"
    if _is_valley(vals, anti, tol):
        return "hill_valley"
    return "other"


def predicted_pattern(n_nodes: int, alpha: float) -> str | None:
    """Expected shape for even N and integer alpha, else None.

    Two hills when 4 | N with even alpha or 4 does not divide N with odd
    alpha; otherwise a hill at the start and a valley at the antipode.
    """
    if n_nodes % 2 or classify_alpha(alpha) is not AlphaClass.INTEGER:
        return None
    alpha_even = int(round(alpha)) % 2 == 0
    return "two_hills" if (n_nodes % 4 == 0) == alpha_even else "hill_valley"
