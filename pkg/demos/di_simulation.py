"""A block-positive state reproduces its statistics with a quantum state.

Transporting Bob's measurements through a positive map turns any
beyond-quantum model into an ordinary quantum one with identical joint
distributions, so no device-independent test can tell them apart.
"""
import numpy as np

from beyondq import cones
from beyondq.di_simulation import build_simulation, pauli_povms, random_povm

np.set_printoptions(precision=3, suppress=True)

sim = build_simulation(cones.rho_max(), (2, 2), pauli_povms(), pauli_povms())
print("rho_max is simulated by sigma =\n", sim.sigma.real)
print("equal to Phi_2:", np.allclose(sim.sigma, cones.phi_plus()))
# Bob's transported effects are transposes of the originals: sigma_y flips sign
e_y = pauli_povms()[1].effects[0]
print("E_y+ =\n", e_y, "\nE_y+ transported =\n", sim.bob_povms[1].effects[0])
print("max deviation of joint distributions:", sim.max_deviation)

rng = np.random.default_rng(0)
worst = 0.0
for _ in range(50):
    rho = cones.random_beyond_quantum_pure(rng)
    povms_a = [random_povm(2, 3, rng), random_povm(2, 2, rng)]
    povms_b = [random_povm(2, 4, rng)]
    worst = max(worst, build_simulation(rho, (2, 2), povms_a, povms_b).max_deviation)
print(f"50 random beyond-quantum models, worst deviation {worst:.2e}")
