"""Two-qubit detection with same-axis Pauli correlations.

``a_pauli_prime(rho) = sum_c Tr rho (sigma_c (x) sigma_c)`` is at most 1 on
quantum states and reaches 3 on ``rho_max``. After local unitaries
``U_A, U_B`` it becomes ``Tr(R_A T R_B^T)`` where ``T`` is the Pauli
correlation matrix and ``R_U`` the SO(3) image of ``U``, so its maximum over
unitaries is a rotation-constrained Procrustes problem.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import PAULIS, check_dims

PAULI_SUM = sum(np.kron(s, s) for s in PAULIS)
"""``sigma_x (x) sigma_x + sigma_y (x) sigma_y + sigma_z (x) sigma_z``."""

_PAULI_STACK = np.array(PAULIS)


def _check_two_qubit(rho: np.ndarray) -> None:
    check_dims(rho, (2, 2))


def _check_unitary(u: np.ndarray, tol: float = 1e-10) -> None:
    if u.shape != (2, 2) or np.linalg.norm(u.conj().T @ u - np.eye(2)) > tol:
        raise ValueError("expected a 2x2 unitary")


def a_pauli_prime(rho: np.ndarray) -> float:
    _check_two_qubit(rho)
    return float(np.einsum("ij,ji->", PAULI_SUM, rho).real)


def a_pauli(rho: np.ndarray, u_a: np.ndarray, u_b: np.ndarray) -> float:
    """``sum_c Tr (U_A (x) U_B) rho (U_A (x) U_B)^dagger (sigma_c (x) sigma_c)``."""
    _check_two_qubit(rho)
    _check_unitary(u_a)
    _check_unitary(u_b)
    u = np.kron(u_a, u_b)
    return float(np.einsum("ij,jk,lk,li->", u, rho, u.conj(), PAULI_SUM).real)


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """``T[c, d] = Tr rho (sigma_c (x) sigma_d)``."""
    _check_two_qubit(rho)
    r4 = rho.reshape(2, 2, 2, 2)
    return np.einsum("ibjd,cji,edb->ce", r4, _PAULI_STACK, _PAULI_STACK).real


def so3_from_su2(u: np.ndarray) -> np.ndarray:
    """``R`` with ``U^dagger sigma_c U = sum_d R[c, d] sigma_d``."""
    conj = np.einsum("ji,cjk,kl->cil", u.conj(), _PAULI_STACK, u)
    return np.einsum("cil,dli->cd", conj, _PAULI_STACK).real / 2


def su2_from_so3(r: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Lift a rotation to a 2x2 unitary ``U`` (up to global phase).

    With ``W = U^dagger`` and any 2x2 ``X``,
    ``X + sum_cd R[c, d] sigma_d X sigma_c = 2 Tr(W^dagger X) W``; one of
    ``X in {I, sigma_x, sigma_y, sigma_z}`` gives a nonzero multiple of ``W``.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or np.linalg.norm(r.T @ r - np.eye(3)) > tol or abs(np.linalg.det(r) - 1) > tol:
        raise ValueError("input is not a rotation matrix")
    best = None
    for x in (np.eye(2, dtype=complex), *PAULIS):
        k = x + np.einsum("cd,dij,jk,ckl->il", r, _PAULI_STACK, x, _PAULI_STACK)
        if best is None or np.linalg.norm(k) > np.linalg.norm(best):
            best = k
    w = best * np.sqrt(2) / np.linalg.norm(best)
    return w.conj().T


def euler_zyz(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``Rz(alpha) Ry(beta) Rz(gamma)`` as a 2x2 special unitary."""
    ea, eg = np.exp(-0.5j * alpha), np.exp(-0.5j * gamma)
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    return np.array(
        [
            [ea * eg * c, -ea * eg.conj() * s],
            [ea.conj() * eg * s, ea.conj() * eg.conj() * c],
        ]
    )


def _euler_zyz_batch(angles: np.ndarray) -> np.ndarray:
    ea = np.exp(-0.5j * angles[:, 0])
    eg = np.exp(-0.5j * angles[:, 2])
    c, s = np.cos(angles[:, 1] / 2), np.sin(angles[:, 1] / 2)
    out = np.empty((len(angles), 2, 2), dtype=complex)
    out[:, 0, 0] = ea * eg * c
    out[:, 0, 1] = -ea * eg.conj() * s
    out[:, 1, 0] = ea.conj() * eg * s
    out[:, 1, 1] = ea.conj() * eg.conj() * c
    return out


def _batch_values(rho: np.ndarray, angles_a: np.ndarray, angles_b: np.ndarray) -> np.ndarray:
    """``a_pauli`` for a batch of Euler-angle pairs, evaluated from the unitaries."""
    ua, ub = _euler_zyz_batch(angles_a), _euler_zyz_batch(angles_b)
    u = np.einsum("nij,nkl->nikjl", ua, ub).reshape(-1, 4, 4)
    rotated = u @ rho @ u.conj().transpose(0, 2, 1)
    return np.einsum("nij,ji->n", rotated, PAULI_SUM).real


@dataclass(frozen=True)
class PauliScanResult:
    max_value: float
    u_a: np.ndarray
    u_b: np.ndarray
    correlation: np.ndarray
    method: str

    @property
    def detects(self) -> bool:
        return self.max_value > 1


def _closed_form(rho: np.ndarray) -> PauliScanResult:
    t = correlation_matrix(rho)
    u, s, vt = np.linalg.svd(t)
    d = np.sign(np.linalg.det(u) * np.linalg.det(vt))
    # Tr(R_A T) is maximal at R_A = V diag(1, 1, d) U^T
    r_a = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    value = float(s[0] + s[1] + d * s[2])
    return PauliScanResult(value, su2_from_so3(r_a), np.eye(2, dtype=complex), t, "closed_form")


def _direct_search(rho: np.ndarray, n_grid: int = 20, n_starts: int = 3, step_min: float = 1e-9) -> PauliScanResult:
    """Grid over Alice's Euler angles, then pattern search over all six angles.

    Only the relative rotation matters, so the coarse grid keeps Bob fixed at
    the identity; the refinement moves both parties.
    """
    a = np.linspace(0, 2 * np.pi, n_grid, endpoint=False)
    b = np.linspace(0, np.pi, n_grid)
    grid = np.stack(np.meshgrid(a, b, a, indexing="ij"), axis=-1).reshape(-1, 3)
    values = _batch_values(rho, grid, np.zeros_like(grid))
    moves = np.concatenate([np.eye(6), -np.eye(6)])
    best_overall = None
    for idx in np.argsort(-values, kind="stable")[:n_starts]:
        p = np.concatenate([grid[idx], np.zeros(3)])
        f = _batch_values(rho, p[None, :3], p[None, 3:])[0]
        step = 0.5 * (2 * np.pi / n_grid)
        while step > step_min:
            trial = p + step * moves
            tv = _batch_values(rho, trial[:, :3], trial[:, 3:])
            k = int(np.argmax(tv))
            if tv[k] > f:
                p, f = trial[k], float(tv[k])
            else:
                step /= 2
        if best_overall is None or f > best_overall[0]:
            best_overall = (f, p)
    f, p = best_overall
    return PauliScanResult(f, euler_zyz(*p[:3]), euler_zyz(*p[3:]), correlation_matrix(rho), "direct_search")


def max_a_pauli(rho: np.ndarray, method: str = "closed_form") -> PauliScanResult:
    """Maximize ``a_pauli`` over local unitaries.

    ``closed_form`` gives ``s1 + s2 + sign(det T) s3`` from the singular values
    of the correlation matrix; ``direct_search`` is an independent numerical
    optimizer over Euler angles. Detection is only guaranteed for pure
    beyond-quantum inputs; mixed inputs are scanned but not decided.
    """
    _check_two_qubit(rho)
    method = method.replace("-", "_")
    if method == "closed_form":
        return _closed_form(rho)
    if method in ("direct_search", "search"):
        return _direct_search(rho)
    raise ValueError(f"unknown method {method!r}")
