"""Device-dependent witnesses built from local observables.

A witness is a Hermitian ``x`` with threshold ``alpha`` such that every
quantum state gives ``Tr(rho x) <= alpha`` while the target gives more.
``x`` is split into product terms ``sum_k c_k A_k (x) B_k`` so each term can
be estimated with one local observable per party.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    SchmidtTerm,
    check_dims,
    eig_herm,
    hs_inner,
    lambda_max,
    operator_schmidt,
    random_density_matrices,
    reconstruct,
    rng_from,
)

log = logging.getLogger(__name__)

MARGIN_WARN = 1e-9


class WitnessError(ValueError):
    """No witness exists for the given input."""


@dataclass(frozen=True)
class Witness:
    x: np.ndarray
    alpha: float
    terms: list[SchmidtTerm]
    target_value: float
    dims: tuple[int, int]
    kind: str = "state"

    @property
    def margin(self) -> float:
        return self.target_value - self.alpha

    def observables(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Local observable pairs ``(c_k A_k, B_k)``; the coefficient rides on Alice."""
        return [(t.coeff * t.op_a, t.op_b) for t in self.terms]


def sup_quantum(x: np.ndarray) -> float:
    """Supremum of ``Tr(x rho)`` over density matrices, i.e. ``lambda_max(x)``."""
    return lambda_max(x)


def build_witness(rho0: np.ndarray, dims: Sequence[int], tol: float = DEFAULT_TOL) -> Witness:
    """Separate a non-PSD state from all quantum states.

    The first choice is ``x = rho0`` with ``alpha = lambda_max(rho0)``, so the
    target value is ``Tr(rho0^2)``. If that fails to exceed ``alpha`` (possible
    for mixed states of small Hilbert-Schmidt norm) the negative spectral part
    is used instead: ``x = rho0 - pi(rho0)`` with ``pi`` the projection onto
    the PSD cone, i.e. the negative-eigenvalue part of ``rho0`` (a negative
    semidefinite matrix), and ``alpha = 0``.
    """
    dims = check_dims(rho0, dims)
    values, vectors = eig_herm(rho0)
    if values[-1] >= -tol:
        raise WitnessError("state is PSD; no witness separates it from quantum states")

    x = rho0
    alpha = float(values[0])
    target = float(np.sum(values**2))
    kind = "state"
    if target - alpha <= MARGIN_WARN:
        neg = values < 0
        x = (vectors[:, neg] * values[neg]) @ vectors[:, neg].conj().T
        x = (x + x.conj().T) / 2
        alpha = 0.0
        target = float(np.sum(values[neg] ** 2))
        kind = "negative-part"
    if target - alpha <= MARGIN_WARN:
        log.warning("witness margin %.3g is below %.0e", target - alpha, MARGIN_WARN)
    return Witness(x, alpha, operator_schmidt(x, dims), target, dims, kind)


def witness_value(w: Witness, rho: np.ndarray) -> float:
    """Sum of the product-term expectations ``sum_k c_k Tr rho (A_k (x) B_k)``."""
    check_dims(rho, w.dims)
    return float(sum(t.coeff * hs_inner(rho, np.kron(t.op_a, t.op_b)) for t in w.terms))


@dataclass(frozen=True)
class WitnessCheck:
    passed: bool
    max_value: float
    argmax_value: float
    alpha: float
    n_samples: int
    seed: int | None


def verify_witness(w: Witness, n_samples: int = 10_000, seed: int | None = 0, tol: float = 1e-9) -> WitnessCheck:
    """Check the threshold against random quantum states and the analytic argmax.

    Samples are Dirichlet mixtures of Haar pure states on the joint space.
    The projector onto the top eigenvector of ``x`` attains ``alpha``.
    """
    rng = rng_from(seed)
    d = w.x.shape[0]
    x_full = reconstruct(w.terms) if w.terms else np.zeros_like(w.x)
    best = -np.inf
    for start in range(0, n_samples, 2048):
        batch = random_density_matrices(min(2048, n_samples - start), d, rng)
        best = max(best, float(np.einsum("nij,ji->n", batch, x_full).real.max()))
    _, vectors = eig_herm(w.x)
    top = np.outer(vectors[:, 0], vectors[:, 0].conj())
    argmax_value = witness_value(w, top)
    passed = best <= w.alpha + tol and abs(argmax_value - w.alpha) <= 1e-10 * max(1.0, abs(w.alpha))
    return WitnessCheck(bool(passed), float(best), argmax_value, w.alpha, n_samples, seed if isinstance(seed, int) else None)
