"""Where do familiar two-qubit states sit in SEP, SES and SEP*?"""
import numpy as np

from beyondq import cones
from beyondq.linalg import partial_transpose, random_pure_state, tensor

np.set_printoptions(precision=3, suppress=True)

# Half the swap operator: unit trace, eigenvalues (1/2, 1/2, 1/2, -1/2)
rho = cones.rho_max()
print("rho_max =\n", rho.real)
print("spectrum:", np.linalg.eigvalsh(rho))
print("class:", cones.classify_state(rho, (2, 2)))

# It is the partial transpose of the maximally entangled state
print("Gamma(Phi_2) == rho_max:", np.array_equal(partial_transpose(cones.phi_plus(), (2, 2)), rho))

report = cones.is_block_positive(rho, (2, 2))
a, b = report.witness_vectors
print(f"min <a x b|rho_max|a x b> = {report.min_value:.2e} at |<a|b>| = {abs(np.vdot(a, b)):.2e}")

samples = {
    "product": tensor(random_pure_state(2, 1), random_pure_state(2, 2)),
    "Phi_2": cones.phi_plus(),
    "I/4": np.eye(4) / 4,
    "Gamma(random pure)": cones.random_beyond_quantum_pure(seed=3),
    "diag(2,-1,0,0)": np.diag([2.0, -1.0, 0.0, 0.0]),
}
for name, x in samples.items():
    print(f"{name:>20s}: {cones.classify_state(x, (2, 2))}")

# Depolarizing rho_max keeps it block positive; it turns PSD at v = 1/3
for v in (1.0, 0.5, 0.34, 1 / 3, 0.2):
    x = cones.depolarize(rho, v)
    print(f"v = {v:.3f}: lambda_min = {np.linalg.eigvalsh(x)[0]: .4f}, {cones.classify_state(x, (2, 2))}")
