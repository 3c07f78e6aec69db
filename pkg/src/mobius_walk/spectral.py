"""
Momentum-space block diagonalization of the walk step.

Translation invariance makes the step operator block diagonal in the Fourier
basis ``|kappa_k> = N**-0.5 * sum_n exp(2i*pi*k*n/N) |n>``: every momentum k
carries a 4x4 unitary ``M(k)`` acting on the (coin, rotation) pair, with
component index ``2*s + r``.

Each ``M(k)`` also commutes with ``I_coin (x) sigma_x``, so it splits further
into two 2x2 coined-walk blocks, one per sigma_x sector. In sector -1 the
block is ``diag(e^{-iq}, e^{iq}) H`` with ``q = 2*pi*k/N - theta/2``, in sector
+1 the same with ``q = 2*pi*k/N + theta/2``. Its eigenvalues are ``-e^{i a}``
and ``e^{-i a}`` where ``sin a = sin(q)/sqrt(2)`` on the principal branch.

Eigenpairs are labelled ``(s, r, k)``: ``s`` is the sigma_x sector (0 for -1,
1 for +1) and ``r`` is the half plane of the eigenvalue (0 for Re < 0, 1 for
Re > 0). Label index ``i = 2*s + r`` is used for every ``(..., 4)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateFallback,
    EigConvergenceFailure,
    IncompleteEigensystem,
    KOutOfRange,
)
from .walk import SIGMA_X, WalkerState, WalkParams, rotation_matrices

ANALYTIC_TOL = 1e-8
LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))

_SQRT2 = np.sqrt(2.0)
_SECTOR_VECS = (np.array([1.0, -1.0]) / _SQRT2, np.array([1.0, 1.0]) / _SQRT2)
# columns: |c> (x) |sector> for sector -1 (c=0,1) then sector +1 (c=0,1)
_SECTOR_BASIS = np.column_stack(
    [np.kron(np.eye(2)[c], _SECTOR_VECS[sec]) for sec in (0, 1) for c in (0, 1)]
).astype(complex)
_SIGMA_X_ROT = np.kron(np.eye(2), SIGMA_X)


def wrap_phase(phi):
    """Map angles into (-pi, pi]."""
    phi = np.angle(np.exp(1j * np.asarray(phi, dtype=float)))
    return np.where(phi <= -np.pi, phi + 2 * np.pi, phi)


@dataclass(frozen=True, eq=False)
class KBlock:
    k: int
    matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class EigenPair:
    s: int
    r: int
    k: int
    eigenvalue: complex
    eigenvector: np.ndarray

    @property
    def labels(self) -> tuple[int, int, int]:
        return (self.s, self.r, self.k)

    @property
    def eigenphase(self) -> float:
        return float(wrap_phase(np.angle(self.eigenvalue)))


@dataclass(frozen=True, eq=False)
class Eigensystem:
    """All 4N eigenpairs of one walk.

    ``values[k, i]`` and ``vectors[k, i]`` hold the eigenvalue and the
    4-component eigenvector with label index ``i = 2*s + r``. ``methods[k]`` is
    ``"analytic"`` or ``"numeric"``.
    """

    values: np.ndarray
    vectors: np.ndarray
    methods: tuple[str, ...]

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    @property
    def phases(self) -> np.ndarray:
        return wrap_phase(np.angle(self.values))

    @property
    def fallback_k(self) -> list[int]:
        return [k for k, m in enumerate(self.methods) if m != "analytic"]

    def pairs(self, k: int) -> list[EigenPair]:
        return [
            EigenPair(s, r, k, complex(self.values[k, i]), self.vectors[k, i].copy())
            for i, (s, r) in enumerate(LABELS)
        ]

    def position_vector(self, s: int, r: int, k: int) -> WalkerState:
        """The eigenvector ``|chi_{s,r,k}>|kappa_k>`` as a position-space state."""
        n = self.n_nodes
        wave = np.exp(2j * np.pi * k * np.arange(n) / n) / np.sqrt(n)
        chi = self.vectors[k, 2 * s + r].reshape(2, 2)
        return WalkerState(chi[:, :, None] * wave[None, None, :])


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Expansion coefficients ``C[k, i]`` of a state in the walk eigenbasis."""

    coefficients: np.ndarray

    def coefficient(self, s: int, r: int, k: int) -> complex:
        return complex(self.coefficients[k, 2 * s + r])

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2


# -- Fourier transform -------------------------------------------------------


def fourier_forward(state: WalkerState) -> np.ndarray:
    """``psi_k = N**-0.5 * sum_n exp(-2i*pi*k*n/N) psi_n`` along the position axis."""
    return np.fft.fft(np.asarray(state.amplitudes, dtype=complex), axis=-1, norm="ortho")


def fourier_inverse(tensor) -> WalkerState:
    amps = np.fft.ifft(np.asarray(tensor, dtype=complex), axis=-1, norm="ortho")
    return WalkerState(amps.reshape(2, 2, -1))


# -- k-space blocks ----------------------------------------------------------


def _check_k(params: WalkParams, k: int) -> int:
    if int(k) != k or not 0 <= k < params.n_nodes:
        raise KOutOfRange(f"k={k} outside 0..{params.n_nodes - 1}", field="k")
    return int(k)


def kblock_matrices(params: WalkParams, ks=None) -> np.ndarray:
    """Stack of ``M(k)`` for the given momenta, shape ``(len(ks), 4, 4)``."""
    n = params.n_nodes
    ks = np.arange(n) if ks is None else np.asarray(ks)
    rot = rotation_matrices(params)
    coin = params.coin
    out = np.zeros((len(ks), 4, 4), dtype=complex)
    for s, sign in ((0, -1.0), (1, 1.0)):
        phase = np.exp(sign * 2j * np.pi * ks / n)
        for sp in range(2):
            out[:, 2 * s : 2 * s + 2, 2 * sp : 2 * sp + 2] = (
                phase[:, None, None] * coin[s, sp] * rot[s][None]
            )
    return out


def build_kblock(params: WalkParams, k: int) -> KBlock:
    k = _check_k(params, k)
    return KBlock(k, kblock_matrices(params, [k])[0])


# -- analytic eigensystem ----------------------------------------------------


def sector_momenta(params: WalkParams, ks=None) -> np.ndarray:
    """Effective momenta ``q`` of both sigma_x sectors, shape ``(len(ks), 2)``."""
    n = params.n_nodes
    ks = np.arange(n) if ks is None else np.asarray(ks, dtype=float)
    base = 2.0 * np.pi * ks / n
    half = params.theta / 2.0
    return np.stack([base - half, base + half], axis=-1)


def _analytic_arrays(params: WalkParams, ks=None):
    q = sector_momenta(params, ks)
    ang = np.arcsin(np.sin(q) / _SQRT2)
    c = np.sqrt(1.0 + np.cos(q) ** 2) / _SQRT2
    cos_term = _SQRT2 * np.cos(q)
    sin_term = 1j * np.sin(q) / _SQRT2

    values = np.empty(q.shape[:1] + (4,), dtype=complex)
    raw = np.empty(q.shape[:1] + (4, 4), dtype=complex)
    for sec in (0, 1):
        left = np.stack([cos_term[:, sec] - c[:, sec] - sin_term[:, sec],
                         -c[:, sec] + sin_term[:, sec]], axis=-1)
        right = np.stack([cos_term[:, sec] + c[:, sec] - sin_term[:, sec],
                          c[:, sec] + sin_term[:, sec]], axis=-1)
        values[:, 2 * sec] = -np.exp(1j * ang[:, sec])
        values[:, 2 * sec + 1] = np.exp(-1j * ang[:, sec])
        rvec = _SECTOR_VECS[sec]
        raw[:, 2 * sec] = (left[:, :, None] * rvec[None, None, :]).reshape(-1, 4)
        raw[:, 2 * sec + 1] = (right[:, :, None] * rvec[None, None, :]).reshape(-1, 4)
    norms = np.linalg.norm(raw, axis=-1)
    vectors = raw / np.where(norms > 0, norms, 1.0)[..., None]
    return values, vectors, norms


def _residuals(blocks: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    mv = np.einsum("kab,kib->kia", blocks, vectors)
    return np.linalg.norm(mv - values[..., None] * vectors, axis=-1)


def eigensystem_analytic(params: WalkParams, k: int) -> list[EigenPair]:
    """Closed-form eigenpairs of ``M(k)`` for the Hadamard coin.

    Raises
    ------
    DegenerateFallback
        If the coin is not Hadamard, an unnormalized eigenvector is shorter
        than 1e-8, or a residual ``|M chi - L chi|`` exceeds 1e-8.
    """
    k = _check_k(params, k)
    if not params.is_hadamard:
        raise DegenerateFallback(k, "closed form only holds for the Hadamard coin")
    values, vectors, norms = _analytic_arrays(params, [k])
    if norms.min() < ANALYTIC_TOL:
        raise DegenerateFallback(k, f"eigenvector norm {norms.min():.3g} too small")
    res = _residuals(kblock_matrices(params, [k]), values, vectors)
    if res.max() > ANALYTIC_TOL:
        raise DegenerateFallback(k, f"residual {res.max():.3g} too large")
    return [
        EigenPair(s, r, k, complex(values[0, i]), vectors[0, i])
        for i, (s, r) in enumerate(LABELS)
    ]


# -- numeric eigensystem -----------------------------------------------------


def _schur_eig(matrix: np.ndarray):
    try:
        tri, z = scipy.linalg.schur(matrix, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigConvergenceFailure(f"Schur decomposition failed: {exc}") from exc
    if np.abs(np.triu(tri, 1)).max(initial=0.0) > 1e-10:
        raise EigConvergenceFailure("block is not normal; no unitary eigenbasis")
    return np.diag(tri).copy(), z


def eigensystem_numeric(block: KBlock) -> list[EigenPair]:
    """Numerical unitary eigendecomposition of one 4x4 block.

    Blocks commuting with ``I (x) sigma_x`` (every ``M(k)``) are diagonalized
    sector by sector, so sector labels are exact and degenerate eigenvalues in
    different sectors never mix. Within a sector the eigenvalue with the larger
    real part gets ``r = 1``.
    """
    m = np.asarray(block.matrix, dtype=complex)
    if np.abs(m @ _SIGMA_X_ROT - _SIGMA_X_ROT @ m).max() <= 1e-12:
        b = _SECTOR_BASIS.conj().T @ m @ _SECTOR_BASIS
        vals, vecs = [], []
        for sec in (0, 1):
            w, z = _schur_eig(b[2 * sec : 2 * sec + 2, 2 * sec : 2 * sec + 2])
            vals.extend(w)
            vecs.extend((_SECTOR_BASIS[:, 2 * sec : 2 * sec + 2] @ z).T)
        vals = np.array(vals)
        vecs = np.array(vecs)
    else:
        vals, z = _schur_eig(m)
        vecs = z.T
    sector = np.real(np.einsum("ia,ab,ib->i", vecs.conj(), _SIGMA_X_ROT, vecs))
    order = np.argsort(sector, kind="stable")
    out = []
    for s, idx in enumerate((order[:2], order[2:])):
        lo, hi = sorted(idx, key=lambda i: (vals[i].real, i))
        for r, i in ((0, lo), (1, hi)):
            out.append(EigenPair(s, r, block.k, complex(vals[i]), vecs[i]))
    return out


# -- full eigensystem --------------------------------------------------------


def eigensystem(params: WalkParams, method: str = "auto") -> Eigensystem:
    """Eigenpairs for every k.

    ``method="auto"`` uses the closed form and falls back to the numeric
    solver for each k where the closed form fails its checks (or always for a
    non-Hadamard coin). ``"analytic"`` raises instead of falling back;
    ``"numeric"`` never uses the closed form.
    """
    n = params.n_nodes
    blocks = kblock_matrices(params)
    values = np.empty((n, 4), dtype=complex)
    vectors = np.empty((n, 4, 4), dtype=complex)
    methods = ["numeric"] * n
    if method not in ("auto", "analytic", "numeric"):
        raise ValueError(f"unknown eigensystem method {method!r}")

    if method != "numeric" and params.is_hadamard:
        values, vectors, norms = _analytic_arrays(params)
        res = _residuals(blocks, values, vectors)
        ok = (norms.min(axis=1) >= ANALYTIC_TOL) & (res.max(axis=1) <= ANALYTIC_TOL)
        for k in np.nonzero(ok)[0]:
            methods[k] = "analytic"
        bad = [int(k) for k in np.nonzero(~ok)[0]]
    else:
        bad = list(range(n))

    if bad and method == "analytic":
        raise DegenerateFallback(bad[0], "closed form rejected")
    for k in bad:
        pairs = eigensystem_numeric(KBlock(k, blocks[k]))
        for i, p in enumerate(pairs):
            values[k, i] = p.eigenvalue
            vectors[k, i] = p.eigenvector
    return Eigensystem(values, vectors, tuple(methods))


# -- evolution ---------------------------------------------------------------


def decompose_initial(state: WalkerState, eigsys: Eigensystem) -> SpectralState:
    """``C[k, i] = <chi_{k,i}| psi_k>`` where ``psi_k`` is the Fourier transform."""
    if eigsys.values.shape != (state.n_nodes, 4):
        raise IncompleteEigensystem(
            f"eigensystem covers {eigsys.values.shape[0]} momenta x "
            f"{eigsys.values.shape[1]} labels, state needs {state.n_nodes} x 4",
            field="eigensystem",
        )
    psi_k = fourier_forward(state).reshape(4, -1)
    return SpectralState(np.einsum("kia,ak->ki", eigsys.vectors.conj(), psi_k))


def _momentum_amplitudes(coeffs: SpectralState, eigsys: Eigensystem, ts) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    phases = np.exp(1j * ts[:, None, None] * eigsys.phases[None])
    weighted = coeffs.coefficients[None] * phases
    return np.einsum("tki,kia->tak", weighted, eigsys.vectors)


def spectral_amplitudes(coeffs: SpectralState, eigsys: Eigensystem, ts: Sequence[int]) -> np.ndarray:
    """Position-space amplitudes at each time in ``ts``, shape ``(len(ts), 2, 2, N)``."""
    amp_k = _momentum_amplitudes(coeffs, eigsys, ts)
    amps = np.fft.ifft(amp_k, axis=-1, norm="ortho")
    return amps.reshape(len(amps), 2, 2, eigsys.n_nodes)


def spectral_distributions(coeffs: SpectralState, eigsys: Eigensystem, ts: Sequence[int]) -> np.ndarray:
    """Position distributions at each time in ``ts``, shape ``(len(ts), N)``."""
    return (np.abs(spectral_amplitudes(coeffs, eigsys, ts)) ** 2).sum(axis=(1, 2))


def spectral_evolve(coeffs: SpectralState, eigsys: Eigensystem, t: int) -> WalkerState:
    """State after ``t`` steps, ``sum C * L**t |chi>|kappa>``.

    ``L**t`` is evaluated as ``exp(i*phase*t)`` so the norm cannot drift.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return WalkerState(spectral_amplitudes(coeffs, eigsys, [t])[0])
