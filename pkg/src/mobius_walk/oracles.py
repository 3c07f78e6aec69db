"""
Independent reference implementations used for cross-checks.

Nothing here shares code paths with ``walk``, ``spectral`` or ``limiting``
beyond the Hadamard constant: operators are assembled densely, basis ket by
basis ket, from the action of the step on ``|s, r, j>``.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment


def _index(s, r, j, n):
    return s * 2 * n + r * n + j


def dense_step_matrix(n_nodes, alpha, coin):
    """The full 4N x 4N one-step unitary."""
    theta = 2 * np.pi * alpha / n_nodes
    rot = {}
    for s in (0, 1):
        sign = (-1) ** s
        rot[s] = np.array(
            [[np.cos(theta / 2), -1j * sign * np.sin(theta / 2)],
             [-1j * sign * np.sin(theta / 2), np.cos(theta / 2)]]
        )
    dim = 4 * n_nodes
    u = np.zeros((dim, dim), dtype=complex)
    for sp in (0, 1):
        for rp in (0, 1):
            for j in range(n_nodes):
                col = _index(sp, rp, j, n_nodes)
                for s in (0, 1):
                    target = (j + (-1) ** s) % n_nodes
                    for r in (0, 1):
                        u[_index(s, r, target, n_nodes), col] += coin[s, sp] * rot[s][r, rp]
    return u


def dense_qwc_matrix(n_nodes, coin):
    """2N x 2N coined walk on a cycle, index ``s*N + j``."""
    u = np.zeros((2 * n_nodes, 2 * n_nodes), dtype=complex)
    for sp in (0, 1):
        for j in range(n_nodes):
            for s in (0, 1):
                u[s * n_nodes + (j + (-1) ** s) % n_nodes, sp * n_nodes + j] += coin[s, sp]
    return u


def qwc_distributions(n_nodes, coin, s0, j0, t_max):
    """Position distributions of the plain cycle walk for t = 0..t_max."""
    u = dense_qwc_matrix(n_nodes, coin)
    psi = np.zeros(2 * n_nodes, dtype=complex)
    psi[s0 * n_nodes + j0] = 1.0
    out = np.empty((t_max + 1, n_nodes))
    for t in range(t_max + 1):
        out[t] = (np.abs(psi.reshape(2, n_nodes)) ** 2).sum(axis=0)
        psi = u @ psi
    return out


def dense_time_average(u, psi0, n_nodes, T):
    """Brute-force mean of ``p_t`` over t = 1..T by repeated matrix products."""
    psi = np.asarray(psi0, dtype=complex)
    acc = np.zeros(psi.size)
    for _ in range(T):
        psi = u @ psi
        acc += np.abs(psi) ** 2
    return acc.reshape(4, n_nodes).sum(axis=0) / T


def dense_spectrum(u):
    """Eigenvalues of a dense matrix via numpy's general solver."""
    return np.linalg.eigvals(u)


def match_multiset(a, b):
    """Largest pairwise distance under the optimal matching of two complex multisets."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
