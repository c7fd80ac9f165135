"""Simulating a block-positive state by a quantum state and modified POVMs.

Given a unit-trace block-positive ``rho`` on ``A (x) B`` and local POVMs,
:func:`build_simulation` constructs a PSD state ``sigma`` and Bob effects
``F^dagger(N_j)`` reproducing every joint probability
``Tr rho (M_i (x) N_j)``. The map ``F`` comes from reading the normalized
state ``rho'`` (Alice marginal maximally mixed on the range of ``rho^A``) as
a Choi matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cones import is_block_positive
from .linalg import (
    DEFAULT_TOL,
    DimensionError,
    PAULIS,
    as_hermitian,
    check_dims,
    eig_herm,
    partial_trace,
    psd_sqrt,
    rng_from,
)


class SimulationError(ValueError):
    """Input cannot be simulated (not block positive, bad POVM, ...)."""


@dataclass(frozen=True)
class Povm:
    effects: tuple[np.ndarray, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(len(self.effects))))

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        if not self.effects:
            raise SimulationError("POVM has no effects")
        total = np.zeros_like(self.effects[0])
        for k, e in enumerate(self.effects):
            if e.shape != (self.dim, self.dim):
                raise DimensionError(f"effect {k} has shape {e.shape}, expected {(self.dim, self.dim)}")
            if np.linalg.norm(e - e.conj().T) > tol:
                raise SimulationError(f"effect {k} is not Hermitian")
            if np.linalg.eigvalsh(e)[0] < -tol:
                raise SimulationError(f"effect {k} is not PSD")
            total = total + e
        if np.linalg.norm(total - np.eye(self.dim)) > tol:
            raise SimulationError("effects do not sum to the identity")


def make_povm(effects: Sequence[np.ndarray]) -> Povm:
    return Povm(tuple(as_hermitian(e) for e in effects))


def pauli_povms() -> list[Povm]:
    """Projective measurements of sigma_x, sigma_y, sigma_z."""
    return [Povm(((np.eye(2) + s) / 2, (np.eye(2) - s) / 2)) for s in PAULIS]


def random_povm(dim: int, n_outcomes: int, seed=None) -> Povm:
    """Random POVM ``M_i = S^{-1/2} G_i S^{-1/2}`` from Wishart matrices ``G_i``."""
    rng = rng_from(seed)
    grams = []
    for _ in range(n_outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        grams.append(g @ g.conj().T)
    s_inv = psd_sqrt(sum(grams), inverse=True)
    return Povm(tuple(as_hermitian(s_inv @ g @ s_inv) for g in grams))


@dataclass(frozen=True)
class PositiveMap:
    """Linear map ``F: Herm(C^r) -> Herm(C^dB)`` with ``F(e_ij) = r * B_ij``.

    ``choi_blocks[i, j]`` is the ``(i, j)`` block ``B_ij`` of the normalized
    state, so ``(id (x) F)(Phi)`` reproduces it.
    """

    choi_blocks: np.ndarray

    @property
    def d_in(self) -> int:
        return self.choi_blocks.shape[0]

    @property
    def d_out(self) -> int:
        return self.choi_blocks.shape[2]

    def choi_state(self) -> np.ndarray:
        r, db = self.d_in, self.d_out
        return self.choi_blocks.transpose(0, 2, 1, 3).reshape(r * db, r * db)

    def apply(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.d_in, self.d_in):
            raise DimensionError(f"F acts on {self.d_in}x{self.d_in} matrices, got {x.shape}")
        return self.d_in * np.einsum("ij,ijab->ab", x, self.choi_blocks)

    def apply_adjoint(self, y: np.ndarray) -> np.ndarray:
        return apply_adjoint(self, y)


def apply_adjoint(f: PositiveMap, y: np.ndarray) -> np.ndarray:
    """Adjoint with respect to the trace pairing: ``Tr F(X) Y = Tr X F^dagger(Y)``."""
    if y.shape != (f.d_out, f.d_out):
        raise DimensionError(f"F^dagger acts on {f.d_out}x{f.d_out} matrices, got {y.shape}")
    # F^dagger(Y)[j, i] = r * Tr(B_ij Y)
    return f.d_in * np.einsum("ijab,ba->ji", f.choi_blocks, y)


def range_projector(x: np.ndarray, rank_tol: float = DEFAULT_TOL) -> tuple[np.ndarray, int]:
    values, vectors = eig_herm(x)
    if values[-1] < -rank_tol * max(abs(values[0]), 1.0):
        raise SimulationError("range_projector expects a PSD matrix")
    keep = values > rank_tol * max(values[0], 0.0)
    v = vectors[:, keep]
    return v @ v.conj().T, int(keep.sum())


def _range_basis(rho_a: np.ndarray, rank_tol: float) -> np.ndarray:
    """Orthonormal basis (columns) of the range of ``rho_a``.

    Full-rank marginals keep the computational basis; otherwise the
    eigenvectors of the nonzero eigenvalues, in descending order.
    """
    values, vectors = eig_herm(rho_a)
    if values[-1] < -rank_tol * max(abs(values[0]), 1.0):
        raise SimulationError("Alice marginal is not PSD; state is not block positive")
    keep = values > rank_tol * max(values[0], 0.0)
    if keep.all():
        return np.eye(len(values), dtype=complex)
    return vectors[:, keep]


def normalize_state(
    rho: np.ndarray, dims: Sequence[int], rank_tol: float = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rescale Alice's side so her marginal is maximally mixed on its range.

    Returns ``(rho_prime, rho_a, P)`` where ``rho_prime`` lives on
    ``range(rho_a) (x) C^dB`` expressed in the range basis (computational
    basis when ``rho_a`` has full rank) and ``P`` is the range projector.
    """
    da, db = check_dims(rho, dims)
    rho_a = partial_trace(rho, dims, keep="A")
    w = _range_basis(rho_a, rank_tol)
    r = w.shape[1]
    scale = w.conj().T @ psd_sqrt(rho_a, rank_tol, inverse=True) / np.sqrt(r)
    k = np.kron(scale, np.eye(db))
    rho_prime = k @ rho @ k.conj().T
    return (rho_prime + rho_prime.conj().T) / 2, rho_a, w @ w.conj().T


def choi_map_from_state(rho_prime: np.ndarray, dims: Sequence[int], tol: float = 1e-9) -> PositiveMap:
    r, db = check_dims(rho_prime, dims)
    marginal = partial_trace(rho_prime, dims, keep="A")
    if np.linalg.norm(marginal - np.eye(r) / r) > tol:
        raise SimulationError("Alice marginal of the normalized state is not maximally mixed")
    blocks = rho_prime.reshape(r, db, r, db).transpose(0, 2, 1, 3).copy()
    return PositiveMap(blocks)


@dataclass(frozen=True)
class SimulationResult:
    """Quantum simulation of a block-positive state.

    ``sigma`` acts on ``C^dA (x) C^r`` with ``r`` the rank of Alice's
    marginal; ``bob_povms`` act on ``C^r``.
    """

    sigma: np.ndarray
    sigma_dims: tuple[int, int]
    bob_povms: list[Povm]
    channel: PositiveMap
    max_deviation: float
    alice_projector: np.ndarray = field(repr=False)


def _probabilities(state: np.ndarray, povm_a: Povm, povm_b: Povm) -> np.ndarray:
    return np.array(
        [[np.einsum("ij,ji->", state, np.kron(m, n)).real for n in povm_b.effects] for m in povm_a.effects]
    )


def build_simulation(
    rho: np.ndarray,
    dims: Sequence[int],
    povms_a: Sequence[Povm],
    povms_b: Sequence[Povm],
    rank_tol: float = DEFAULT_TOL,
    tol: float = DEFAULT_TOL,
    check_membership: bool = True,
) -> SimulationResult:
    """Reproduce the joint statistics of ``rho`` with a PSD state.

    ``sigma = (sqrt(r rho^A) (x) I) Phi (sqrt(r rho^A) (x) I)`` and Bob's
    effects are mapped through ``F^dagger``. Raises ``SimulationError`` when
    ``rho`` is not block positive (it would yield negative probabilities) or
    a POVM is invalid.
    """
    da, db = check_dims(rho, dims)
    if abs(np.trace(rho).real - 1) > 1e-9:
        raise SimulationError("state must have unit trace")
    for p in povms_a:
        p.validate(tol)
        if p.dim != da:
            raise DimensionError(f"Alice POVM acts on dimension {p.dim}, expected {da}")
    for p in povms_b:
        p.validate(tol)
        if p.dim != db:
            raise DimensionError(f"Bob POVM acts on dimension {p.dim}, expected {db}")
    if check_membership and not is_block_positive(rho, dims, tol).is_member:
        raise SimulationError("state is not block positive (outside SEP*)")

    rho_prime, rho_a, proj = normalize_state(rho, dims, rank_tol)
    r = rho_prime.shape[0] // db
    f = choi_map_from_state(rho_prime, (r, db))

    w = _range_basis(rho_a, rank_tol)
    root = w.conj().T @ psd_sqrt(r * rho_a, rank_tol) @ w
    phi = np.eye(r, dtype=complex).reshape(r * r)
    phi = np.outer(phi, phi) / r
    k = np.kron(w @ root, np.eye(r))
    sigma = k @ phi @ k.conj().T
    sigma = (sigma + sigma.conj().T) / 2

    bob = [Povm(tuple(as_hermitian(f.apply_adjoint(n)) for n in p.effects)) for p in povms_b]

    deviation = 0.0
    for pa in povms_a:
        for pb, pb_new in zip(povms_b, bob):
            diff = _probabilities(rho, pa, pb) - _probabilities(sigma, pa, pb_new)
            deviation = max(deviation, float(np.abs(diff).max()))
    return SimulationResult(sigma, (da, r), bob, f, deviation, proj)
