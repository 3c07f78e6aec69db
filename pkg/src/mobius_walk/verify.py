"""Cross-oracle verification suite behind ``mobius-walk verify``."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import oracles
from .limiting import (
    degeneracy_report,
    empirical_average_distribution,
    extremum_pattern,
    limiting_distribution_closed_form,
    limiting_distribution_general,
    predicted_pattern,
    qwc_limiting_distribution,
)
from .mixing import convergence_bound, decay_slope, distance_series
from .spectral import (
    decompose_initial,
    eigensystem,
    eigensystem_analytic,
    kblock_matrices,
    spectral_amplitudes,
)
from .walk import FullVector, initial_state, make_params, step

EIGEN_GRID_N = (4, 5, 8, 24, 26)
EIGEN_GRID_ALPHA = (0.0, 0.5, 1.0, 2.0)
DEGENERATE_CASES = ((24, 1.0), (24, 2.0), (26, 1.0), (26, 2.0), (7, 0.5))
TUNED_ALPHAS = (0.3, 0.7, 1.5 + 1e-3)
MIXING_CASES = ((5, 0.0), (7, 0.0), (8, 0.3))


@dataclass
class CheckResult:
    name: str
    passed: bool
    error: float
    tolerance: float
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.error = float(self.error)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = round(time.perf_counter() - start, 3)
        return res

    return wrapper


@_timed
def check_odd_uniform(n, T, coin=None):
    params = make_params(n, 0.0, coin)
    emp = empirical_average_distribution(params, T).values
    gen = limiting_distribution_general(params).values
    err_emp = float(np.abs(emp - 1 / n).max())
    err_gen = float(np.abs(gen - 1 / n).max())
    return CheckResult(
        f"odd_uniform[N={n}]",
        err_emp < 0.01 and err_gen < 1e-10,
        err_emp,
        0.01,
        detail={"general_sum_error": err_gen},
    )


@_timed
def check_qwc_even(n, T, coin=None):
    params = make_params(n, 0.0, coin)
    closed = qwc_limiting_distribution(n).values
    gen = limiting_distribution_general(params).values
    emp = empirical_average_distribution(params, T).values
    err = max(np.abs(closed - gen).max(), np.abs(closed - emp).max(), np.abs(gen - emp).max())
    top = closed.max()
    hills = bool(abs(closed[0] - top) < 1e-12 and abs(closed[n // 2] - top) < 1e-12)
    return CheckResult(
        f"qwc_even_closed_form[N={n}]",
        bool(err < 5e-3 and hills),
        float(err),
        5e-3,
        detail={"hills_at_0_and_half": hills},
    )


@_timed
def check_mqw_closed(n, alpha, T, coin=None):
    params = make_params(n, alpha, coin)
    closed = limiting_distribution_closed_form(params)
    gen = limiting_distribution_general(params)
    emp = empirical_average_distribution(params, T)
    err_gen = float(np.abs(closed.values - gen.values).max())
    err_emp = float(np.abs(closed.values - emp.values).max())
    pattern = extremum_pattern(closed)
    expected = predicted_pattern(n, alpha)
    return CheckResult(
        f"mqw_closed_form[N={n},alpha={alpha:g}]",
        err_gen < 1e-9 and err_emp < 5e-3 and (expected is None or pattern == expected),
        err_emp,
        5e-3,
        detail={"closed_vs_general": err_gen, "pattern": pattern, "expected": expected},
    )


@_timed
def check_tuned_uniform(alpha, T, n=24, coin=None):
    params = make_params(n, alpha, coin)
    report = degeneracy_report(params)
    emp = empirical_average_distribution(params, T).values
    err = float(np.abs(emp - 1 / n).max())
    return CheckResult(
        f"alpha_tuned_uniform[N={n},alpha={alpha:g}]",
        report.is_uniform and err < 0.01,
        err,
        0.01,
        detail={"n_pairs": len(report.pairs)},
    )


@_timed
def check_eigensystem(n, alpha, coin=None):
    params = make_params(n, alpha, coin)
    blocks = kblock_matrices(params)
    worst_res = worst_val = 0.0
    for k in range(n):
        pairs = eigensystem_analytic(params, k)
        for p in pairs:
            worst_res = max(worst_res, np.linalg.norm(blocks[k] @ p.eigenvector - p.eigenvalue * p.eigenvector))
        worst_val = max(
            worst_val,
            oracles.match_multiset([p.eigenvalue for p in pairs], oracles.dense_spectrum(blocks[k])),
        )
    return CheckResult(
        f"analytic_eigensystem[N={n},alpha={alpha:g}]",
        worst_res < 1e-9 and worst_val < 1e-10,
        float(worst_val),
        1e-10,
        detail={"max_residual": float(worst_res)},
    )


@_timed
def check_evolution(n, alpha, t_max=1000, coin=None):
    params = make_params(n, alpha, coin)
    eig = eigensystem(params)
    psi = initial_state(params)
    coeffs = decompose_initial(psi, eig)
    spec = spectral_amplitudes(coeffs, eig, np.arange(t_max + 1))
    worst = worst_norm = 0.0
    for t in range(t_max + 1):
        worst = max(worst, np.abs(spec[t] - psi.amplitudes).max())
        worst_norm = max(worst_norm, abs(psi.norm() - 1), abs(np.linalg.norm(spec[t]) - 1))
        psi = step(psi, params)
    return CheckResult(
        f"evolution_equivalence[N={n},alpha={alpha:g}]",
        worst < 1e-9 and worst_norm < 1e-10,
        float(worst),
        1e-9,
        detail={"max_norm_drift": float(worst_norm)},
    )


@_timed
def check_mixing(n, alpha, t_max, coin=None):
    params = make_params(n, alpha, coin)
    eig = eigensystem(params)
    coeffs = decompose_initial(initial_state(params), eig)
    dist = distance_series(params, t_max, eigsys=eig)
    samples = [t for t in (100, 1000, 10_000) if t <= t_max]
    bound = convergence_bound(coeffs, eig, np.array(samples))
    bound_ok = all(dist[t - 1] <= b + 1e-9 for t, b in zip(samples, bound))
    ts = np.unique(np.logspace(2, np.log10(t_max), 41).astype(int))
    slope = decay_slope(ts, dist[ts - 1])
    return CheckResult(
        f"mixing_bound[N={n},alpha={alpha:g}]",
        bool(bound_ok and -1.3 <= slope <= -0.7),
        slope,
        0.3,
        detail={"samples": samples, "distance": [float(dist[t - 1]) for t in samples],
                "bound": [float(b) for b in bound]},
    )


@_timed
def check_qwc_reduction(n, t_max=500, coin=None):
    params = make_params(n, 0.0, coin)
    ref = oracles.qwc_distributions(n, params.coin, 0, 0, t_max)
    psi = initial_state(params)
    worst = 0.0
    for t in range(t_max + 1):
        worst = max(worst, np.abs((np.abs(psi.amplitudes) ** 2).sum(axis=(0, 1)) - ref[t]).max())
        psi = step(psi, params)
    return CheckResult(f"qwc_reduction[N={n}]", worst < 1e-12, float(worst), 1e-12)


@_timed
def check_unitarity_sweep(seed, cases=50, coin=None):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(2, 65))
        alpha = float(rng.uniform(0, n / 2))
        vec = rng.normal(size=4 * n) + 1j * rng.normal(size=4 * n)
        vec /= np.linalg.norm(vec)
        params = make_params(n, alpha, coin, FullVector(vec))
        psi = initial_state(params)
        worst = max(worst, abs(step(psi, params).norm() - psi.norm()))
    return CheckResult(f"unitarity_sweep[seed={seed}]", worst < 1e-10, float(worst), 1e-10)


def build_suite(T=10_000, seed=0, coin=None):
    """List of zero-argument callables, one per check, in report order."""
    # validate every parameter set first so bad input fails before any work
    for n, alpha in [(5, 0.0), (24, 0.0), *DEGENERATE_CASES]:
        make_params(n, alpha, coin)
    jobs = []
    jobs += [lambda n=n: check_odd_uniform(n, T, coin) for n in (5, 7, 9)]
    jobs += [lambda: check_qwc_even(24, T, coin)]
    jobs += [lambda c=c: check_mqw_closed(*c, T, coin) for c in DEGENERATE_CASES]
    jobs += [lambda a=a: check_tuned_uniform(a, T, coin=coin) for a in TUNED_ALPHAS]
    grid = [(n, a) for n in EIGEN_GRID_N for a in EIGEN_GRID_ALPHA]
    jobs += [lambda c=c: check_eigensystem(*c, coin) for c in grid]
    jobs += [lambda c=c: check_evolution(*c, coin=coin) for c in grid]
    jobs += [lambda c=c: check_mixing(*c, T, coin) for c in MIXING_CASES]
    jobs += [lambda n=n: check_qwc_reduction(n, coin=coin) for n in (5, 24)]
    jobs += [lambda: check_unitarity_sweep(seed, coin=coin)]
    return jobs


def run_suite(T=10_000, seed=0, threads=1, coin=None):
    jobs = build_suite(T, seed, coin)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda job: job(), jobs))
    return [job() for job in jobs]


def report_dict(results, config):
    return {
        "config": config,
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }
