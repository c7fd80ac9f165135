"""Build a witness from the target itself and run the detection protocol."""
import numpy as np

from beyondq import cones
from beyondq.protocol import detection_power, run_protocol
from beyondq.witness import build_witness, verify_witness, witness_value

target = cones.random_beyond_quantum_pure(seed=27)
w = build_witness(target, (2, 2))
print(f"alpha = {w.alpha:.4f}, target value = {w.target_value:.4f}, margin = {w.margin:.4f}")
print(f"{len(w.terms)} product terms, coefficients", np.round([t.coeff for t in w.terms], 4))

check = verify_witness(w, n_samples=10_000, seed=1)
print(f"largest value over 10^4 quantum states: {check.max_value:.4f} (alpha {check.alpha:.4f})")
print("value on I/4:", witness_value(w, np.eye(4) / 4))

# Each Schmidt term becomes one pair of local observables
rep = run_protocol(target, w.observables(), w.alpha, n=20_000, seed=0)
print(f"protocol: mean {rep.empirical_mean:.4f} +- {rep.std_error:.4f}, detected = {rep.decision}")

# The mean is v + (1 - v)/4, crossing alpha near v = 0.43
for v in (0.6, 0.45, 0.43, 0.4):
    p = detection_power(target, w.observables(), w.alpha, n=2_000, trials=200, seed=0, visibility=v)
    print(f"visibility {v}: detection power {p:.2f}")
