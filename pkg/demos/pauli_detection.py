"""Same-axis Pauli correlations after the best local rotations.

Quantum states never exceed 1; every pure beyond-quantum state does.
The threshold for depolarized rho_max sits at visibility 1/3.
"""
import numpy as np

from beyondq import cones
from beyondq.linalg import random_density_matrices
from beyondq.pauli import a_pauli, a_pauli_prime, correlation_matrix, max_a_pauli
from beyondq.protocol import detection_power, pauli_terms

np.set_printoptions(precision=4, suppress=True)

print("a'(rho_max) =", a_pauli_prime(cones.rho_max()))
print("T(rho_max) =\n", correlation_matrix(cones.rho_max()))

g = cones.random_beyond_quantum_pure(seed=5)
closed, search = max_a_pauli(g), max_a_pauli(g, "direct_search")
print(f"random Gamma(psi): closed form {closed.max_value:.10f}, search {search.max_value:.10f}")
print("value at the returned unitaries:", a_pauli(g, closed.u_a, closed.u_b))

quantum = max(max_a_pauli(r).max_value for r in random_density_matrices(500, 4, 0))
print(f"max over 500 random quantum states: {quantum:.6f}")

for v in (0.30, 1 / 3, 0.35, 0.40):
    p = detection_power(cones.rho_max(), pauli_terms(), 1.0, n=10_000, trials=300, seed=0, visibility=v)
    print(f"v = {v:.4f} (mean {3 * v:.3f}): power {p:.3f}")
