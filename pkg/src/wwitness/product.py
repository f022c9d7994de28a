"""Closest fully-product state to a target pure state.

The squared overlap ``max |<phi_1 ... phi_n|psi>|^2`` is the coefficient of
the optimal witness for ``psi``. It is computed by alternating
single-site maximization (the higher-order power method): with all other
factors fixed, the best factor at a site is the normalized contraction of
the target against them, so each step can only raise the overlap.
"""

from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .states import check_pure_state, popcounts, product_state, random_qubit

MAX_OPTIMIZER_QUBITS = 16
MAX_GRID_POINTS = 10**8


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    tol: float = 1e-12
    max_sweeps: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")


@dataclass
class AlphaResult:
    alpha: float
    factors: np.ndarray
    sweeps_used: int
    converged: bool
    per_restart_values: list = field(default_factory=list)

    @property
    def product_state(self):
        return product_state(self.factors)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "argmax": [[[f.real, f.imag] for f in factor] for factor in self.factors.tolist()],
            "sweeps_used": self.sweeps_used,
            "converged": self.converged,
            "per_restart_values": list(self.per_restart_values),
        }


def _contract_except(tensor, factors, site):
    v = tensor
    for j in range(len(factors) - 1, -1, -1):
        if j != site:
            v = np.tensordot(v, factors[j].conj(), axes=([j], [0]))
    return v


def local_update(target, factors, site):
    """Replace factor ``site`` (0-based) by its optimal value.

    Returns ``(new_factors, overlap, degenerate)`` where ``overlap`` is
    ``|<product|target>|`` after the update. A zero contraction leaves the
    factor unchanged and sets ``degenerate``.
    """
    target, n = check_pure_state(target)
    factors = np.array(factors, dtype=complex)
    if not 0 <= site < n:
        raise ValueError(f"site must be in [0, {n - 1}], got {site}")
    v = _contract_except(target.reshape((2,) * n), factors, site)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return factors, 0.0, True
    factors[site] = v / norm
    return factors, norm, False


def _product_overlap(tensor, factors):
    v = _contract_except(tensor, factors, 0)
    return float(abs(np.vdot(factors[0], v)))


def _run_restart(tensor, n, cfg, restart, history=None):
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(restart,)))
    factors = random_qubit(rng, size=n)
    value = _product_overlap(tensor, factors)
    for sweep in range(1, cfg.max_sweeps + 1):
        previous = value
        for site in range(n):
            v = _contract_except(tensor, factors, site)
            norm = float(np.linalg.norm(v))
            if norm > 0.0:
                factors[site] = v / norm
                value = norm
            if history is not None:
                history.append(value)
        if value - previous < cfg.tol:
            return value**2, factors, sweep, True
    return value**2, factors, cfg.max_sweeps, False


def closest_product_alpha(target, cfg=None, n_jobs=None):
    """Max squared overlap of ``target`` with fully product pure states.

    Restart ``r`` draws its start from a stream seeded by ``(cfg.seed, r)``,
    so results do not depend on ``n_jobs`` or execution order. Ties go to
    the lowest restart index.
    """
    cfg = cfg or OptimizerConfig()
    target, n = check_pure_state(target)
    if n > MAX_OPTIMIZER_QUBITS:
        raise ValueError(f"optimizer is capped at {MAX_OPTIMIZER_QUBITS} qubits")
    tensor = target.reshape((2,) * n)
    runs = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_run_restart)(tensor, n, cfg, r) for r in range(cfg.restarts)
    )
    values = [run[0] for run in runs]
    best = int(np.argmax(values))
    return AlphaResult(
        alpha=values[best],
        factors=runs[best][1],
        sweeps_used=max(run[2] for run in runs),
        converged=all(run[3] for run in runs),
        per_restart_values=values,
    )


def _qubit_grid(steps):
    theta = np.linspace(0.0, np.pi / 2, steps)
    phi = np.linspace(0.0, 2 * np.pi, steps, endpoint=False)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    th, ph = th.ravel(), ph.ravel()
    return np.stack([np.cos(th), np.exp(1j * ph) * np.sin(th)], axis=1)


def brute_force_alpha_grid(target, grid_steps, mode="full"):
    """Exhaustive grid lower bound on the product-state overlap.

    Each factor is ``cos(theta)|0> + e^{i phi} sin(theta)|1>`` with
    ``theta`` and ``phi`` on ``grid_steps`` points each.

    ``mode="full"`` scans every factor independently except the last,
    which is set to its exact optimum for the scanned others; this costs
    ``grid_steps**(2(n-1))`` points. ``mode="symmetric"`` scans one shared
    factor (``grid_steps**2`` points) and works for any n.
    """
    target, n = check_pure_state(target)
    if grid_steps < 2:
        raise ValueError("grid_steps must be >= 2")
    grid = _qubit_grid(grid_steps)
    m = grid.shape[0]
    if mode == "symmetric":
        if m > MAX_GRID_POINTS:
            raise ValueError(f"grid of {m} points exceeds {MAX_GRID_POINTS}")
        ones = popcounts(n)
        sums = np.bincount(ones, weights=target.real, minlength=n + 1) + 1j * np.bincount(
            ones, weights=target.imag, minlength=n + 1
        )
        k = np.arange(n + 1)
        a = grid[:, :1].conj()
        b = grid[:, 1:].conj()
        amps = (a ** (n - k)) * (b**k) @ sums
        return float(np.max(np.abs(amps) ** 2))
    if mode != "full":
        raise ValueError(f"unknown grid mode {mode!r}")
    points = float(m) ** (n - 1)
    if points > MAX_GRID_POINTS:
        raise ValueError(f"grid of {points:.3g} points exceeds {MAX_GRID_POINTS}")
    gconj = grid.conj()

    def scan(tensor):
        if tensor.ndim == 2:
            return float(np.max(np.sum(np.abs(gconj @ tensor) ** 2, axis=1)))
        return max(scan(np.tensordot(g, tensor, axes=(0, 0))) for g in gconj)

    return scan(target.reshape((2,) * n))


class ClosestProductState(BaseEstimator):
    """Rank-1 (fully product) approximation of a pure state.

    Parameters
    ----------
    restarts : int, default 32
    tol : float, default 1e-12
        Stop a restart once a full sweep raises the overlap by less.
    max_sweeps : int, default 500
    random_state : int, default 0
    n_jobs : int, optional
        Threads used across restarts; does not change the result.

    Attributes
    ----------
    alpha_ : float
        Best squared overlap found.
    factors_ : ndarray of shape (n_qubits, 2)
    per_restart_values_ : list of float
    converged_ : bool
    sweeps_used_ : int
    """

    def __init__(self, restarts=32, tol=1e-12, max_sweeps=500, random_state=0, n_jobs=None):
        self.restarts = restarts
        self.tol = tol
        self.max_sweeps = max_sweeps
        self.random_state = random_state
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        cfg = OptimizerConfig(self.restarts, self.tol, self.max_sweeps, self.random_state)
        result = closest_product_alpha(X, cfg, n_jobs=self.n_jobs)
        self.result_ = result
        self.alpha_ = result.alpha
        self.factors_ = result.factors
        self.per_restart_values_ = result.per_restart_values
        self.converged_ = result.converged
        self.sweeps_used_ = result.sweeps_used
        return self

    def transform(self, X=None):
        """The fitted product state as a full amplitude vector."""
        check_is_fitted(self, "factors_")
        return product_state(self.factors_)

    def score(self, X, y=None):
        """Squared overlap of the fitted product state with ``X``."""
        psi, _ = check_pure_state(X)
        return float(abs(np.vdot(self.transform(), psi)) ** 2)
