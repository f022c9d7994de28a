"""Self-verification: every closed-form claim about the W-state witness
checked against an independent numerical route, for a range of n."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import families
from .bipartition import (
    Bipartition,
    largest_schmidt_coefficient,
    max_biseparable_overlap_sq,
    product_across,
    w_state_claim,
)
from .product import OptimizerConfig, brute_force_alpha_grid, closest_product_alpha
from .states import (
    Ensemble,
    make_symmetric_product,
    make_w_state,
    product_state,
    random_pure_state,
    random_qubit,
)
from .witness import (
    build_custom_witness,
    build_witness,
    expectation,
    single_excitation_trace,
    witness_coefficient,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    n_qubits: int | None
    passed: bool
    error: float
    tolerance: float

    def to_dict(self):
        return {
            "check": self.name,
            "n": self.n_qubits,
            "passed": self.passed,
            "error": self.error,
            "tolerance": self.tolerance,
        }


def _result(name, n, error, tol):
    error = float(error)
    return CheckResult(name, n, bool(error <= tol), error, tol)


def check_coefficient(n):
    exact = Fraction(n - 1, n) ** (n - 1)
    return _result("coefficient", n, abs(witness_coefficient(n) - float(exact)), 1e-15)


def check_eigenstructure(n):
    w = build_witness(n)
    eig = np.linalg.eigvalsh(w.to_dense())
    c = w.alpha
    expected = np.array([c - 1.0] + [c] * ((1 << n) - 1))
    return _result("eigenstructure", n, np.max(np.abs(eig - expected)), 1e-12)


def check_schmidt(n):
    psi = make_w_state(n)
    worst = 0.0
    for k in range(1, n // 2 + 1):
        for subset in combinations(range(1, n + 1), k):
            sigma = largest_schmidt_coefficient(psi, Bipartition(n, subset))
            worst = max(worst, abs(sigma - w_state_claim(n, k)))
    return _result("schmidt", n, worst, 1e-10)


def check_biseparable_alpha(n):
    psi = make_w_state(n)
    worst = max(
        abs(max_biseparable_overlap_sq(psi, k) - (n - k) / n) for k in range(1, n // 2 + 1)
    )
    return _result("biseparable_alpha", n, worst, 1e-10)


def check_optimizer(n, seed):
    res = closest_product_alpha(make_w_state(n), OptimizerConfig(seed=seed))
    error = abs(res.alpha - witness_coefficient(n)) if res.converged else np.inf
    return _result("optimizer_alpha", n, error, 1e-9)


def check_symmetric_oracle(n):
    # Grid lower bound must not exceed the closed form and must approach it.
    value = brute_force_alpha_grid(make_w_state(n), 200, mode="symmetric")
    c = witness_coefficient(n)
    error = c - value if value <= c + 1e-12 else np.inf
    return _result("symmetric_grid_oracle", n, error, 5e-3)


def check_thresholds(n):
    worst = 0.0
    for name in families.FAMILIES:
        rep = families.thresholds(name, n)
        worst = max(worst, rep.entangled_error, rep.genuine_error)
    return _result("thresholds", n, worst, 1e-12)


def check_family_curves(n):
    w = build_witness(n)
    worst = 0.0
    for name in families.FAMILIES:
        curve = families.trace_curve(name, n)
        for p in np.linspace(0.0, 1.0, 21):
            worst = max(worst, abs(curve(p) - expectation(w, families.realize(name, n, p))))
    return _result("family_curves", n, worst, 1e-13)


def check_tangency():
    a, b = np.sqrt(2 / 3), np.sqrt(1 / 3)
    point = expectation(build_witness(3), make_symmetric_product(a, b, 3))
    s = 1 / np.sqrt(2)
    terms = [
        (1 / 3, _ket({"001": s, "010": s})),
        (1 / 3, _ket({"001": s, "100": s})),
        (1 / 3, _ket({"010": s, "100": s})),
    ]
    plane = Ensemble.from_terms(terms)
    bar = build_custom_witness(make_w_state(3), 2 / 3)
    return _result("tangency", 3, max(abs(point), abs(expectation(bar, plane))), 1e-12)


def _ket(amplitudes):
    n = len(next(iter(amplitudes)))
    psi = np.zeros(1 << n, dtype=complex)
    for bits, amp in amplitudes.items():
        psi[int(bits, 2)] = amp
    return psi


def check_properties(n, trials, seed):
    """Randomized bound checks: fully separable, D_k, global range, and
    closed-form single-excitation trace."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n,)))
    w = build_witness(n)
    c = w.alpha
    worst_sep = worst_dk = worst_global = worst_closed = 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 5))
        weights = rng.dirichlet(np.ones(m))
        prods = np.stack([product_state(random_qubit(rng, size=n)) for _ in range(m)])
        worst_sep = max(worst_sep, -expectation(w, Ensemble(weights, prods)))

        k = int(rng.integers(1, n // 2 + 1))
        subset = rng.choice(np.arange(1, n + 1), size=k, replace=False)
        cut = Bipartition(n, subset)
        psi = product_across(random_pure_state(k, rng), random_pure_state(n - k, rng), cut)
        worst_dk = max(worst_dk, (c - (n - k) / n) - expectation(w, psi))

        mixed = Ensemble(weights, np.stack([random_pure_state(n, rng) for _ in range(m)]))
        t = expectation(w, mixed)
        worst_global = max(worst_global, (c - 1) - t, t - (1 - c))

        pure = random_pure_state(n, rng)
        worst_closed = max(worst_closed, abs(single_excitation_trace(pure) - expectation(w, pure)))
    return [
        _result("fully_separable_bound", n, max(worst_sep, 0.0), 1e-10),
        _result("dk_bound", n, max(worst_dk, 0.0), 1e-10),
        _result("global_bound", n, max(worst_global, 0.0), 1e-10),
        _result("single_excitation_formula", n, worst_closed, 1e-12),
    ]


def run_all(n_values, seed=0, trials=1000):
    results = [check_tangency()]
    for n in n_values:
        results.append(check_coefficient(n))
        if n <= 6:
            results.append(check_eigenstructure(n))
        if n <= 10:
            results.append(check_schmidt(n))
            results.append(check_biseparable_alpha(n))
            results.append(check_optimizer(n, seed))
        results.append(check_symmetric_oracle(n))
        results.append(check_thresholds(n))
        if n <= 10:
            results.append(check_family_curves(n))
        results.extend(check_properties(n, trials, seed))
    return results
