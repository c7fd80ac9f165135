"""Membership tests and samplers for SEP, SES (the PSD cone) and SEP*.

SEP* is the block-positive cone: ``X`` belongs to it iff
``<a (x) b| X |a (x) b> >= 0`` for every product vector. A unit-trace
element of SEP* that is not PSD is a beyond-quantum state.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    check_dims,
    lambda_min,
    partial_transpose,
    random_pure_states,
    random_pure_vector,
    rng_from,
)


class StateClass(str, enum.Enum):
    SEPARABLE_QUANTUM = "SeparableQuantum"
    ENTANGLED_QUANTUM = "EntangledQuantum"
    BEYOND_QUANTUM = "BeyondQuantum"
    OUTSIDE_SEP_STAR = "OutsideSEPstar"

    def __str__(self) -> str:
        return self.value


class TraceError(ValueError):
    """State does not have unit trace."""


@dataclass(frozen=True)
class BlockPositivityReport:
    """Outcome of the product-vector search.

    ``min_value`` is the smallest ``<a (x) b|X|a (x) b>`` found, attained at
    ``witness_vectors = (a, b)``. The inner minimization over ``b`` is exact;
    the outer one over ``a`` is a search, so ``min_value`` is an upper bound on
    the true minimum. ``heuristic`` is set when ``dA > 2``.
    """

    is_member: bool
    min_value: float
    witness_vectors: tuple[np.ndarray, np.ndarray]
    heuristic: bool


def is_psd(x: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return lambda_min(x) >= -tol


def is_ppt(x: np.ndarray, dims: Sequence[int], tol: float = DEFAULT_TOL) -> bool:
    return is_psd(partial_transpose(x, dims), tol)


def is_separable_2x2(x: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Peres-Horodecki test, exact for two qubits."""
    if x.shape != (4, 4):
        raise DimensionError("is_separable_2x2 requires a 4x4 operator on 2 x 2")
    return is_psd(x, tol) and is_ppt(x, (2, 2), tol)


def fibonacci_sphere(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Polar and azimuthal angles of an ``n``-point Fibonacci lattice."""
    k = np.arange(n) + 0.5
    theta = np.arccos(1 - 2 * k / n)
    phi = np.pi * (1 + np.sqrt(5)) * k
    return theta, np.mod(phi, 2 * np.pi)


def _bloch_vectors(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    theta, phi = np.broadcast_arrays(theta, phi)
    return np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def _conditional_min(x4: np.ndarray, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """lambda_min and its eigenvector of ``(<a| (x) I) X (|a> (x) I)`` for a batch of ``a``."""
    xa = np.einsum("ni,ibjc,nj->nbc", a.conj(), x4, a)
    values, vectors = np.linalg.eigh(xa)
    return values[:, 0], vectors[:, :, 0]


def is_block_positive(
    x: np.ndarray,
    dims: Sequence[int],
    tol: float = DEFAULT_TOL,
    n_grid: int = 2048,
    n_refine: int = 8,
    n_steps: int = 50,
    step0: float = 0.1,
    seed=0,
) -> BlockPositivityReport:
    """Search for a product vector with negative expectation.

    For ``dA == 2`` the outer search runs over a Fibonacci lattice on the
    Bloch sphere followed by a pattern search (step halving) around the best
    ``n_refine`` points. For ``dA > 2`` random unit vectors replace the
    lattice and the pattern search perturbs real and imaginary parts.
    """
    da, db = check_dims(x, dims)
    x4 = x.reshape(da, db, da, db)

    if da == 1:
        a = np.ones((1, 1), dtype=complex)
        vals, bvecs = _conditional_min(x4, a)
        return BlockPositivityReport(bool(vals[0] >= -tol), float(vals[0]), (a[0], bvecs[0]), False)

    if da == 2:
        theta, phi = fibonacci_sphere(n_grid)
        params = np.stack([theta, phi], axis=1)

        def to_vectors(p):
            return _bloch_vectors(p[:, 0], p[:, 1])
    else:
        rng = rng_from(seed)
        params = rng.standard_normal((n_grid, 2 * da))

        def to_vectors(p):
            v = p[:, :da] + 1j * p[:, da:]
            return v / np.linalg.norm(v, axis=1, keepdims=True)

    values, _ = _conditional_min(x4, to_vectors(params))
    order = np.argsort(values, kind="stable")[:n_refine]
    best_p = params[order].copy()
    best_v = values[order].copy()
    n_par = params.shape[1]
    moves = np.concatenate([np.eye(n_par), -np.eye(n_par)])

    step = np.full(len(best_p), step0)
    for _ in range(n_steps):
        trial = best_p[:, None, :] + step[:, None, None] * moves[None, :, :]
        flat = trial.reshape(-1, n_par)
        tv, _ = _conditional_min(x4, to_vectors(flat))
        tv = tv.reshape(len(best_p), len(moves))
        j = np.argmin(tv, axis=1)
        improved = tv[np.arange(len(best_p)), j] < best_v
        best_p[improved] = trial[improved, j[improved]]
        best_v[improved] = tv[improved, j[improved]]
        step[~improved] /= 2

    k = int(np.argmin(best_v))
    a = to_vectors(best_p[k : k + 1])
    val, b = _conditional_min(x4, a)
    min_value = float(val[0])
    return BlockPositivityReport(min_value >= -tol, min_value, (a[0], b[0]), da > 2)


def classify_state(x: np.ndarray, dims: Sequence[int], tol: float = DEFAULT_TOL) -> StateClass:
    """Place a unit-trace Hermitian operator in the cone chain.

    PSD states are split into separable/entangled with the PPT test, which is
    only decisive for two qubits; other dimensions raise ``DimensionError``
    for PSD input. Non-PSD states are tested for block positivity.
    """
    da, db = check_dims(x, dims)
    tr = np.trace(x).real
    if abs(tr - 1) > max(tol, 1e-9):
        raise TraceError(f"state must have unit trace, got {tr:.12g}")
    if is_psd(x, tol):
        if (da, db) != (2, 2):
            raise DimensionError("separability is only decided for 2 x 2 systems")
        return StateClass.SEPARABLE_QUANTUM if is_ppt(x, dims, tol) else StateClass.ENTANGLED_QUANTUM
    if is_block_positive(x, dims, tol).is_member:
        return StateClass.BEYOND_QUANTUM
    return StateClass.OUTSIDE_SEP_STAR


def rho_max() -> np.ndarray:
    """Half the two-qubit swap operator."""
    return np.array(
        [
            [0.5, 0, 0, 0],
            [0, 0, 0.5, 0],
            [0, 0.5, 0, 0],
            [0, 0, 0, 0.5],
        ],
        dtype=complex,
    )


def phi_plus(d: int = 2) -> np.ndarray:
    """Maximally entangled projector ``(1/d) sum_ij e_ij (x) e_ij``."""
    v = np.eye(d, dtype=complex).reshape(d * d)
    return np.outer(v, v) / d


def depolarize(x: np.ndarray, visibility: float) -> np.ndarray:
    if not 0 <= visibility <= 1:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility}")
    n = x.shape[0]
    return visibility * x + (1 - visibility) * np.eye(n) / n


ENTANGLEMENT_MARGIN = 1e-6


def random_beyond_quantum_pure(seed=None, margin: float = ENTANGLEMENT_MARGIN) -> np.ndarray:
    """Extremal beyond-quantum two-qubit state ``Gamma(|psi><psi|)``.

    ``psi`` is Haar random, redrawn until its partial transpose has an
    eigenvalue below ``-margin``.
    """
    rng = rng_from(seed)
    while True:
        v = random_pure_vector(4, rng)
        g = partial_transpose(np.outer(v, v.conj()), (2, 2))
        if lambda_min(g) < -margin:
            return (g + g.conj().T) / 2


def random_sep_star_states(count: int, seed=None, n_components: int = 3) -> np.ndarray:
    """Batch of random two-qubit states of S(SEP*), shape ``(count, 4, 4)``.

    Each is a Dirichlet mixture of ``n_components`` extremal points: a Haar
    pure state, partially transposed with probability 1/2 (partial transposes
    of product states are pure product states, so every draw is extremal).
    """
    rng = rng_from(seed)
    pures = random_pure_states(count * n_components, 4, rng)
    flip = rng.random(count * n_components) < 0.5
    pures[flip] = pures[flip].reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)
    weights = rng.dirichlet(np.ones(n_components), size=count)
    return np.einsum("nk,nkij->nij", weights, pures.reshape(count, n_components, 4, 4))
