"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` (the lines are printed
with capture disabled, so ``-s`` is optional).
"""
import time

import numpy as np
import pytest

from beyondq.cones import phi_plus, random_beyond_quantum_pure, random_sep_star_states, rho_max
from beyondq.di_simulation import build_simulation, pauli_povms, random_povm
from beyondq.linalg import lambda_max, random_density_matrices, random_pure_states, reconstruct
from beyondq.pauli import PAULI_SUM, a_pauli_prime, max_a_pauli
from beyondq.protocol import detection_power, pauli_terms, run_protocol
from beyondq.witness import build_witness, verify_witness, witness_value


@pytest.fixture
def report(capsys):
    def emit(n, passed, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if passed else 'FAIL'} {detail}")
        assert passed, detail

    return emit


def best_time(fn, repeat=50):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return value, best


def test_criterion_1_golden_values(report):
    a_prime, t_a = best_time(lambda: a_pauli_prime(rho_max()))
    lam, t_l = best_time(lambda: lambda_max(PAULI_SUM))
    ok = abs(a_prime - 3) <= 1e-12 and abs(lam - 1) <= 1e-12 and t_a < 1e-3 and t_l < 1e-3
    report(1, ok, f"a_prime(rho_max)={a_prime!r} ({t_a * 1e3:.3f} ms), lambda_max(A)={lam!r} ({t_l * 1e3:.3f} ms)")


def test_criterion_2_dichotomy(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    bq_values = np.array([max_a_pauli(random_beyond_quantum_pure(rng)).max_value for _ in range(1000)])
    ses = np.concatenate([random_density_matrices(500, 4, 1), random_pure_states(500, 4, 2)])
    ses_values = np.array([max_a_pauli(rho).max_value for rho in ses])
    elapsed = time.perf_counter() - t0
    min_margin = float(bq_values.min() - 1)
    ok = min_margin > 0 and ses_values.max() <= 1 + 1e-9 and elapsed < 60
    report(
        2,
        ok,
        f"min beyond-quantum margin={min_margin:.3e}, max SES value={ses_values.max():.12f}, {elapsed:.2f} s",
    )


def test_criterion_3_sep_star_maximum(report):
    values = np.concatenate(
        [np.einsum("nij,ji->n", random_sep_star_states(10_000, [3, k]), PAULI_SUM).real for k in range(10)]
    )
    at_max = a_pauli_prime(rho_max())
    ok = values.size == 100_000 and values.max() <= 3 + 1e-9 and at_max == 3
    report(3, ok, f"max over 1e5 SEP* states={values.max():.6f}, a_prime(rho_max)={at_max!r}")


def test_criterion_4_di_simulation(report):
    rng = np.random.default_rng(4)
    worst_dev = worst_psd = worst_povm = 0.0
    for _ in range(200):
        rho = random_beyond_quantum_pure(rng)
        povms_a = [random_povm(2, int(rng.integers(2, 5)), rng) for _ in range(2)]
        povms_b = [random_povm(2, int(rng.integers(2, 5)), rng) for _ in range(2)]
        sim = build_simulation(rho, (2, 2), povms_a, povms_b)
        worst_dev = max(worst_dev, sim.max_deviation)
        worst_psd = max(worst_psd, -np.linalg.eigvalsh(sim.sigma)[0])
        for p in sim.bob_povms:
            neg = max(-np.linalg.eigvalsh(e)[0] for e in p.effects)
            completeness = np.linalg.norm(sum(p.effects) - np.eye(p.dim))
            worst_povm = max(worst_povm, neg, completeness)
    ex = build_simulation(rho_max(), (2, 2), pauli_povms(), pauli_povms())
    sigma_err = np.abs(ex.sigma - phi_plus()).max()
    eff_err = max(
        np.abs(e_new - e.T).max()
        for p, q in zip(pauli_povms(), ex.bob_povms)
        for e, e_new in zip(p.effects, q.effects)
    )
    ok = worst_dev <= 1e-9 and worst_psd <= 1e-10 and worst_povm <= 1e-9 and sigma_err <= 1e-12 and eff_err <= 1e-12
    report(
        4,
        ok,
        f"max deviation={worst_dev:.2e}, sigma PSD violation={worst_psd:.2e}, POVM violation={worst_povm:.2e}, "
        f"rho_max: |sigma-Phi2|={sigma_err:.1e}, |E'-E^T|={eff_err:.1e}",
    )


def test_criterion_5_witness(report):
    w = build_witness(rho_max(), (2, 2))
    ok = abs(w.alpha - 0.5) <= 1e-12 and abs(w.target_value - 1) <= 1e-12 and abs(w.margin - 0.5) <= 1e-12
    worst_recon = np.linalg.norm(reconstruct(w.terms) - w.x)
    min_margin, worst_excess = np.inf, -np.inf
    rng = np.random.default_rng(5)
    for k in range(200):
        rho0 = random_beyond_quantum_pure(rng)
        wk = build_witness(rho0, (2, 2))
        check = verify_witness(wk, 10_000, seed=k)
        ok &= check.passed and wk.target_value > wk.alpha
        ok &= abs(witness_value(wk, rho0) - wk.target_value) <= 1e-10
        min_margin = min(min_margin, wk.margin)
        worst_excess = max(worst_excess, check.max_value - wk.alpha)
        worst_recon = max(worst_recon, np.linalg.norm(reconstruct(wk.terms) - wk.x))
    ok &= worst_recon <= 1e-10
    report(
        5,
        bool(ok),
        f"rho_max: alpha={w.alpha}, target={w.target_value}; min margin={min_margin:.3e}, "
        f"max sweep value - alpha={worst_excess:.3e}, reconstruction error={worst_recon:.1e}",
    )


def test_criterion_6_protocol(report):
    terms = pauli_terms()
    exact = [run_protocol(rho_max(), terms, 1.0, n, seed=n) for n in (1, 10, 10_000)]
    ok = all(r.empirical_mean == 3 and r.std_error == 0 and r.decision for r in exact)
    t0 = time.perf_counter()
    p_half = detection_power(rho_max(), terms, 1.0, 10_000, 1000, seed=6, visibility=1 / 3)
    t_half = time.perf_counter() - t0
    t0 = time.perf_counter()
    p_high = detection_power(rho_max(), terms, 1.0, 10_000, 1000, seed=7, visibility=1.05 / 3)
    t_high = time.perf_counter() - t0
    a = run_protocol(rho_max(), terms, 1.0, 10_000, seed=8, visibility=0.4)
    b = run_protocol(rho_max(), terms, 1.0, 10_000, seed=8, visibility=0.4)
    same = a.empirical_mean == b.empirical_mean and np.array_equal(a.outcomes_a, b.outcomes_a)
    same &= p_half == detection_power(rho_max(), terms, 1.0, 10_000, 1000, seed=6, visibility=1 / 3)
    # 0.05 is about three binomial standard deviations of a 1000-trial power estimate
    ok &= abs(p_half - 0.5) <= 0.05 and p_high > 0.99 and same and t_half < 10 and t_high < 10
    report(
        6,
        bool(ok),
        f"rho_max mean=3 exactly, power(v=1/3)={p_half:.3f} ({t_half:.2f} s), "
        f"power(margin 0.05)={p_high:.3f} ({t_high:.2f} s), deterministic={same}",
    )


def test_criterion_7_oracle_equivalence(report):
    states = random_sep_star_states(200, 7)
    diffs = np.array([abs(max_a_pauli(s).max_value - max_a_pauli(s, "direct_search").max_value) for s in states])
    report(7, diffs.max() <= 1e-6, f"max |closed_form - direct_search| over 200 SEP* states={diffs.max():.2e}")
