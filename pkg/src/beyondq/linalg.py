"""Dense complex-Hermitian linear algebra for bipartite operators.

Operators are plain ``numpy`` arrays of shape ``(d, d)``. Bipartite operators
carry their local dimensions separately as a ``(dA, dB)`` tuple, with the
row/column index ordered as ``iA * dB + iB`` (``np.kron`` convention).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class DimensionError(ValueError):
    """Operator shape does not match the declared dimensions."""


class HermiticityError(ValueError):
    """Input matrix is too far from Hermitian to be round-off."""


def as_hermitian(x, reject_tol: float = 1e-8) -> np.ndarray:
    """Validate and symmetrize a square matrix.

    Matrices whose anti-Hermitian part exceeds ``reject_tol`` relative to
    their Frobenius norm are rejected; otherwise ``(X + X^dagger) / 2`` is
    returned.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {x.shape}")
    skew = np.linalg.norm(x - x.conj().T)
    if skew > reject_tol * max(np.linalg.norm(x), 1e-300):
        raise HermiticityError(f"matrix is not Hermitian (||X - X^dagger||_2 = {skew:.3g})")
    return (x + x.conj().T) / 2


def check_dims(x: np.ndarray, dims: Sequence[int]) -> tuple[int, int]:
    da, db = (int(d) for d in dims)
    if da < 1 or db < 1:
        raise DimensionError(f"local dimensions must be positive, got {dims}")
    if x.shape != (da * db, da * db):
        raise DimensionError(f"operator of shape {x.shape} does not match dims ({da}, {db})")
    return da, db


def tensor(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.kron(x, y)


def hs_inner(x: np.ndarray, y: np.ndarray) -> float:
    """Hilbert-Schmidt pairing Tr(XY), real for Hermitian inputs."""
    return float(np.real(np.einsum("ij,ji->", x, y)))


def hs_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x))


def partial_trace(x: np.ndarray, dims: Sequence[int], keep: str = "A") -> np.ndarray:
    """Trace out one party of a bipartite operator.

    Args:
        x: Operator on the ``dA * dB`` dimensional joint space.
        dims: Local dimensions ``(dA, dB)``.
        keep: ``"A"`` to return ``Tr_B x``, ``"B"`` to return ``Tr_A x``.
    """
    da, db = check_dims(x, dims)
    x4 = x.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ibjb->ij", x4)
    if keep == "B":
        return np.einsum("aiaj->ij", x4)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(x: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Apply ``id (x) transpose`` (transpose on the B factor)."""
    da, db = check_dims(x, dims)
    return x.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)


def eig_herm(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with descending eigenvalues.

    Each eigenvector is rephased so that its first non-negligible component
    is real and positive, which makes the output deterministic up to
    rotations inside degenerate eigenspaces.
    """
    values, vectors = np.linalg.eigh(x)
    values = values[::-1]
    vectors = vectors[:, ::-1].copy()
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        pivot = np.flatnonzero(np.abs(col) > 1e-12)
        if pivot.size:
            phase = col[pivot[0]] / abs(col[pivot[0]])
            vectors[:, k] = col / phase
    return values, vectors


def lambda_min(x: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(x)[0])


def lambda_max(x: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(x)[-1])


def psd_sqrt(x: np.ndarray, rank_tol: float = DEFAULT_TOL, inverse: bool = False) -> np.ndarray:
    """Square root (or pseudo-inverse square root) of a PSD matrix.

    Eigenvalues at or below ``rank_tol * lambda_max`` are treated as zero.
    """
    values, vectors = np.linalg.eigh(x)
    cutoff = rank_tol * max(values[-1], 0.0)
    keep = values > cutoff
    roots = np.zeros_like(values)
    roots[keep] = np.sqrt(values[keep])
    if inverse:
        roots[keep] = 1.0 / roots[keep]
    return (vectors * roots) @ vectors.conj().T


def gell_mann_basis(d: int) -> np.ndarray:
    """Orthonormal Hermitian basis of d x d matrices under Tr(XY).

    The first element is ``I / sqrt(d)``; the rest are the generalized
    Gell-Mann matrices scaled to unit Hilbert-Schmidt norm. For ``d = 2``
    this is ``(I, sigma_x, sigma_y, sigma_z) / sqrt(2)``.
    """
    basis = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k], anti[k, j] = -1j, 1j
            basis.append(sym / np.sqrt(2))
            basis.append(anti / np.sqrt(2))
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        basis.append(np.diag(diag).astype(complex) / np.sqrt(l * (l + 1)))
    return np.array(basis)


@dataclass(frozen=True)
class SchmidtTerm:
    coeff: float
    op_a: np.ndarray
    op_b: np.ndarray

    def operator(self) -> np.ndarray:
        return self.coeff * np.kron(self.op_a, self.op_b)


def operator_schmidt(x: np.ndarray, dims: Sequence[int], cutoff: float = 1e-12) -> list[SchmidtTerm]:
    """Operator-Schmidt decomposition ``x = sum_k c_k A_k (x) B_k``.

    ``x`` is expanded in products of orthonormal Hermitian bases; the real
    ``dA^2 x dB^2`` coefficient matrix is split by a real SVD, so every
    factor is Hermitian with unit Hilbert-Schmidt norm. Terms with
    coefficient at or below ``cutoff`` are dropped.
    """
    da, db = check_dims(x, dims)
    ga, gb = gell_mann_basis(da), gell_mann_basis(db)
    x4 = x.reshape(da, db, da, db)
    # C[a, b] = Tr(x (G_a (x) G_b))
    coeffs = np.einsum("ibjc,aji,ecb->ae", x4, ga, gb).real
    u, s, vt = np.linalg.svd(coeffs)
    terms = []
    for k, sk in enumerate(s):
        if sk <= cutoff:
            continue
        op_a = np.einsum("a,aij->ij", u[:, k], ga)
        op_b = np.einsum("b,bij->ij", vt[k], gb)
        terms.append(SchmidtTerm(float(sk), op_a, op_b))
    return terms


def reconstruct(terms: Sequence[SchmidtTerm]) -> np.ndarray:
    return sum(t.operator() for t in terms)


def rng_from(seed) -> np.random.Generator:
    """Accept an int seed, ``None`` or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    rng = rng_from(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def su2_from_angles(theta: float, phi: float, lam: float) -> np.ndarray:
    """Generic single-qubit unitary ``U3(theta, phi, lam)``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def random_pure_vector(dim: int, seed=None) -> np.ndarray:
    rng = rng_from(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_pure_state(dim: int, seed=None) -> np.ndarray:
    """Projector onto a Haar-random unit vector."""
    if dim < 1:
        raise DimensionError("dim must be positive")
    v = random_pure_vector(dim, seed)
    return np.outer(v, v.conj())


def random_pure_states(count: int, dim: int, seed=None) -> np.ndarray:
    """Batch of ``count`` Haar-random rank-1 projectors, shape ``(count, dim, dim)``."""
    rng = rng_from(seed)
    v = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return np.einsum("ni,nj->nij", v, v.conj())


def random_density_matrix(dim: int, seed=None, n_components: int | None = None) -> np.ndarray:
    """Random mixed state: Dirichlet-weighted mixture of Haar pure states."""
    rng = rng_from(seed)
    if n_components is None:
        n_components = int(rng.integers(1, dim + 1))
    pures = random_pure_states(n_components, dim, rng)
    weights = rng.dirichlet(np.ones(n_components))
    return np.einsum("k,kij->ij", weights, pures)


def random_density_matrices(count: int, dim: int, seed=None) -> np.ndarray:
    """Batch version of :func:`random_density_matrix`, shape ``(count, dim, dim)``.

    Each sample mixes a uniformly chosen number (1..dim) of Haar pure states,
    so rank-deficient and pure states are well represented.
    """
    rng = rng_from(seed)
    pures = random_pure_states(count * dim, dim, rng).reshape(count, dim, dim, dim)
    ranks = rng.integers(1, dim + 1, size=count)
    weights = rng.dirichlet(np.ones(dim), size=count)
    weights[np.arange(dim)[None, :] >= ranks[:, None]] = 0
    weights /= weights.sum(axis=1, keepdims=True)
    return np.einsum("nk,nkij->nij", weights, pures)
