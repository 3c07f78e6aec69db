"""
Position-space Möbius quantum walk on an N-cycle.

A walker lives in coin (s) x rotation (r) x position (j) space. Amplitudes
are stored as an array of shape ``(2, 2, N)`` so that the C-order flattened
index is ``s*2N + r*N + j``. One step applies the coin to ``s``, then rotates
``r`` by ``R(s)`` while shifting the position by ``(-1)**s`` modulo N.

With ``alpha = 0`` the rotation is the identity and the walk reduces to the
ordinary coined walk on a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import (
    BadInitialState,
    DimensionMismatch,
    InvalidN,
    NonUnitaryCoin,
    ValidationError,
)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

UNITARY_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True)
class Localized:
    """Walker starting on a single basis ket ``|s, r, j>``."""

    s: int = 0
    r: int = 0
    j: int = 0


@dataclass(frozen=True, eq=False)
class FullVector:
    """Walker starting from an arbitrary normalized amplitude vector of length 4N."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


InitialState = Union[Localized, FullVector]


@dataclass(frozen=True, eq=False)
class WalkParams:
    n_nodes: int
    alpha: float
    coin: np.ndarray = field(default_factory=lambda: HADAMARD.copy())
    initial: InitialState = field(default_factory=Localized)

    @property
    def theta(self) -> float:
        """Rotation angle per step, ``2*pi*alpha/N``."""
        return 2.0 * np.pi * self.alpha / self.n_nodes

    @property
    def dim(self) -> int:
        return 4 * self.n_nodes

    @property
    def is_hadamard(self) -> bool:
        return bool(np.array_equal(self.coin, HADAMARD))


@dataclass(frozen=True, eq=False)
class WalkerState:
    amplitudes: np.ndarray  # shape (2, 2, N)

    @property
    def n_nodes(self) -> int:
        return self.amplitudes.shape[-1]

    def flat(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def from_flat(cls, amplitudes, n_nodes: int) -> "WalkerState":
        amps = np.asarray(amplitudes, dtype=complex)
        if amps.size != 4 * n_nodes:
            raise DimensionMismatch(
                f"state has {amps.size} amplitudes, expected 4N = {4 * n_nodes}",
                field="state",
            )
        return cls(amps.reshape(2, 2, n_nodes).copy())


@dataclass(frozen=True, eq=False)
class RotationMatrices:
    r0: np.ndarray
    r1: np.ndarray

    def __getitem__(self, s: int) -> np.ndarray:
        return (self.r0, self.r1)[s]


def is_unitary(matrix, tol: float = UNITARY_TOL) -> bool:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.abs(m @ m.conj().T - np.eye(m.shape[0])).max() <= tol)


def _validate_initial(initial, n_nodes: int) -> InitialState:
    if isinstance(initial, Localized):
        if initial.s not in (0, 1) or initial.r not in (0, 1):
            raise BadInitialState(
                f"coin/rotation labels must be 0 or 1, got s={initial.s}, r={initial.r}",
                field="init",
            )
        if not 0 <= initial.j < n_nodes:
            raise BadInitialState(
                f"initial node {initial.j} outside 0..{n_nodes - 1}", field="init"
            )
        return initial
    if isinstance(initial, FullVector):
        amps = initial.amplitudes
        if amps.size != 4 * n_nodes:
            raise BadInitialState(
                f"initial vector has length {amps.size}, expected {4 * n_nodes}",
                field="init",
            )
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise BadInitialState(
                f"initial vector norm {np.linalg.norm(amps):.15g} is not 1", field="init"
            )
        return initial
    raise BadInitialState(f"unsupported initial state {initial!r}", field="init")


def make_params(
    n_nodes: int,
    alpha: float = 0.0,
    coin=None,
    initial: InitialState | None = None,
) -> WalkParams:
    """Validate and bundle one walk instance.

    ``theta`` is never stored; it is always derived as ``2*pi*alpha/n_nodes``.
    """
    if int(n_nodes) != n_nodes or n_nodes < 2:
        raise InvalidN(f"n_nodes must be an integer >= 2, got {n_nodes}", field="nodes")
    n_nodes = int(n_nodes)
    coin = HADAMARD.copy() if coin is None else np.array(coin, dtype=complex)
    if coin.shape != (2, 2) or not is_unitary(coin):
        raise NonUnitaryCoin("coin must be a 2x2 unitary matrix", field="coin")
    coin.setflags(write=False)
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise ValidationError(f"alpha must be finite, got {alpha}", field="alpha")
    initial = _validate_initial(Localized() if initial is None else initial, n_nodes)
    return WalkParams(n_nodes=n_nodes, alpha=alpha, coin=coin, initial=initial)


def rotation_matrices(params: WalkParams) -> RotationMatrices:
    """``R(s) = cos(theta/2) I - i (-1)^s sin(theta/2) sigma_x``."""
    half = params.theta / 2.0
    c, s = np.cos(half), np.sin(half)
    eye = np.eye(2, dtype=complex)
    return RotationMatrices(c * eye - 1j * s * SIGMA_X, c * eye + 1j * s * SIGMA_X)


def initial_state(params: WalkParams) -> WalkerState:
    n = params.n_nodes
    init = params.initial
    if isinstance(init, Localized):
        amps = np.zeros((2, 2, n), dtype=complex)
        amps[init.s, init.r, init.j] = 1.0
        return WalkerState(amps)
    return WalkerState.from_flat(init.amplitudes, n)


def _check_state(state: WalkerState, params: WalkParams) -> np.ndarray:
    amps = np.asarray(state.amplitudes)
    if amps.size != params.dim:
        raise DimensionMismatch(
            f"state has {amps.size} amplitudes, expected 4N = {params.dim}", field="state"
        )
    return amps.reshape(2, 2, params.n_nodes)


def _step_array(amps: np.ndarray, coin: np.ndarray, rot: RotationMatrices) -> np.ndarray:
    mixed = np.einsum("ab,brj->arj", coin, amps)
    out = np.empty_like(mixed)
    out[0] = np.roll(rot.r0 @ mixed[0], 1, axis=-1)
    out[1] = np.roll(rot.r1 @ mixed[1], -1, axis=-1)
    return out


def step(state: WalkerState, params: WalkParams) -> WalkerState:
    """Apply one walk step. The input state is left untouched."""
    amps = _check_state(state, params)
    return WalkerState(_step_array(amps, params.coin, rotation_matrices(params)))


def evolve(state: WalkerState, params: WalkParams, t: int) -> WalkerState:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    amps = _check_state(state, params).copy()
    rot = rotation_matrices(params)
    for _ in range(int(t)):
        amps = _step_array(amps, params.coin, rot)
    return WalkerState(amps)


def evolve_distributions(state: WalkerState, params: WalkParams, t: int) -> np.ndarray:
    """Position distributions for steps 0..t, shape ``(t + 1, N)``."""
    amps = _check_state(state, params).copy()
    rot = rotation_matrices(params)
    out = np.empty((int(t) + 1, params.n_nodes))
    out[0] = (np.abs(amps) ** 2).sum(axis=(0, 1))
    for i in range(1, int(t) + 1):
        amps = _step_array(amps, params.coin, rot)
        out[i] = (np.abs(amps) ** 2).sum(axis=(0, 1))
    return out


def position_distribution(state: WalkerState) -> np.ndarray:
    return (np.abs(state.amplitudes) ** 2).sum(axis=(0, 1))
