"""Monte-Carlo simulation of the bipartite detection protocol.

Alice and Bob share ``n * m`` copies of a fixed state. Round ``l`` (0-based)
uses observable pair ``k = l mod m``; each party records the eigenvalue of
the outcome. The statistic ``(1/n) sum_l o^A_l o^B_l`` estimates
``sum_k Tr rho (O^A_k (x) O^B_k)`` and is compared with ``alpha``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cones import depolarize
from .linalg import PAULIS, as_hermitian, eig_herm

log = logging.getLogger(__name__)

CLAMP_TOL = 1e-10
ABORT_TOL = 1e-8


class NegativeProbabilityError(ValueError):
    """A joint probability is clearly negative: the state is outside SEP*."""


@dataclass(frozen=True)
class Observable:
    op: np.ndarray
    projectors: tuple[np.ndarray, ...]
    values: tuple[float, ...]


def spectral_observable(op: np.ndarray, group_tol: float = 1e-9) -> Observable:
    """Group the eigendecomposition of ``op`` into a projective measurement."""
    op = as_hermitian(op)
    evals, evecs = eig_herm(op)
    projectors, values = [], []
    start = 0
    for k in range(1, len(evals) + 1):
        if k == len(evals) or evals[start] - evals[k] > group_tol:
            v = evecs[:, start:k]
            projectors.append(v @ v.conj().T)
            values.append(float(np.mean(evals[start:k])))
            start = k
    return Observable(op, tuple(projectors), tuple(values))


def joint_distribution(rho: np.ndarray, obs_a: Observable, obs_b: Observable) -> np.ndarray:
    """``p[i, j] = Tr rho (P_i (x) Q_j)`` with round-off negatives clamped to zero."""
    p = np.array(
        [[np.einsum("ij,ji->", rho, np.kron(pa, qb)).real for qb in obs_b.projectors] for pa in obs_a.projectors]
    )
    worst = p.min()
    if worst < -ABORT_TOL:
        raise NegativeProbabilityError(f"joint probability {worst:.3g} < 0; state is not block positive")
    if worst < -CLAMP_TOL:
        log.warning("clamping joint probability %.3g to zero", worst)
    p[p < 1e-15] = 0.0
    if abs(p.sum() - 1) > 1e-9:
        raise ValueError(f"joint distribution sums to {p.sum():.12g}")
    return p


@dataclass(frozen=True)
class ProtocolReport:
    """Result of one protocol run.

    ``std_error`` is the CLT estimate ``sqrt(sum_k var_k / n)`` from the
    per-pair sample variances; it is not a finite-sample guarantee.
    """

    n: int
    m: int
    empirical_mean: float
    std_error: float
    alpha: float
    decision: bool
    seed: int | None
    pair_means: tuple[float, ...]
    outcomes_a: np.ndarray = field(repr=False)
    outcomes_b: np.ndarray = field(repr=False)

    @property
    def margin(self) -> float:
        return self.empirical_mean - self.alpha


@dataclass(frozen=True)
class _PairTable:
    cdf: np.ndarray
    values_a: np.ndarray
    values_b: np.ndarray


def _prepare(rho: np.ndarray, terms: Sequence[tuple[np.ndarray, np.ndarray]]) -> list[_PairTable]:
    tables = []
    for op_a, op_b in terms:
        oa, ob = spectral_observable(op_a), spectral_observable(op_b)
        p = joint_distribution(rho, oa, ob)
        va = np.repeat(np.array(oa.values), len(ob.values))
        vb = np.tile(np.array(ob.values), len(oa.values))
        tables.append(_PairTable(np.cumsum(p.ravel()), va, vb))
    return tables


def _run(tables: list[_PairTable], n: int, alpha: float, rng: np.random.Generator, seed) -> ProtocolReport:
    m = len(tables)
    u = rng.random(n * m)
    out_a = np.empty(n * m)
    out_b = np.empty(n * m)
    pair_means, var_sum = [], 0.0
    for k, tab in enumerate(tables):
        idx = np.searchsorted(tab.cdf, u[k::m] * tab.cdf[-1], side="right")
        idx = np.minimum(idx, len(tab.cdf) - 1)
        out_a[k::m] = tab.values_a[idx]
        out_b[k::m] = tab.values_b[idx]
        prod = out_a[k::m] * out_b[k::m]
        pair_means.append(float(prod.mean()))
        if n > 1:
            var_sum += float(prod.var(ddof=1))
    mean = float(np.sum(out_a * out_b) / n)
    return ProtocolReport(
        n=n,
        m=m,
        empirical_mean=mean,
        std_error=float(np.sqrt(var_sum / n)),
        alpha=float(alpha),
        decision=bool(mean > alpha),
        seed=seed,
        pair_means=tuple(pair_means),
        outcomes_a=out_a,
        outcomes_b=out_b,
    )


def _target(rho: np.ndarray, visibility: float | None) -> np.ndarray:
    return rho if visibility is None else depolarize(rho, visibility)


def run_protocol(
    rho: np.ndarray,
    terms: Sequence[tuple[np.ndarray, np.ndarray]],
    alpha: float,
    n: int,
    seed: int | None = 0,
    visibility: float | None = None,
) -> ProtocolReport:
    """Simulate ``n * m`` rounds on ``rho`` (optionally depolarized).

    Args:
        rho: Target state; must be block positive.
        terms: Observable pairs ``(O^A_k, O^B_k)``.
        alpha: Detection threshold.
        n: Rounds per observable pair.
        seed: Seed for the sampler; identical seeds give identical reports.
        visibility: If given, the target is ``v rho + (1 - v) I / d``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not terms:
        raise ValueError("at least one observable pair is required")
    tables = _prepare(_target(rho, visibility), terms)
    return _run(tables, n, alpha, np.random.default_rng(seed), seed)


def detection_power(
    rho: np.ndarray,
    terms: Sequence[tuple[np.ndarray, np.ndarray]],
    alpha: float,
    n: int,
    trials: int,
    seed: int = 0,
    visibility: float | None = None,
) -> float:
    """Fraction of independent protocol runs that declare detection.

    Trial ``t`` uses the generator seeded with ``[seed, t]``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 1:
        raise ValueError("n must be at least 1")
    tables = _prepare(_target(rho, visibility), terms)
    hits = 0
    for t in range(trials):
        hits += _run(tables, n, alpha, np.random.default_rng([seed, t]), seed).decision
    return hits / trials


def pauli_terms() -> list[tuple[np.ndarray, np.ndarray]]:
    """``(sigma_c, sigma_c)`` for c = x, y, z; pair with ``alpha = 1``."""
    return [(s, s) for s in PAULIS]
