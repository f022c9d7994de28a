"""Witness operators ``W = alpha I - |ref><ref|`` and their separability bounds.

The operator itself is never materialized for evaluation: the expectation
only needs ``<ref|rho|ref>``, and for the W state that touches the ``n``
single-excitation amplitudes alone.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .states import (
    Ensemble,
    as_state,
    check_n_qubits,
    check_pure_state,
    make_w_state,
)

CLASSIFY_SLACK = 1e-9
MAX_DENSE_WITNESS_QUBITS = 6


def witness_coefficient(n, exact=False):
    """``((n-1)/n)**(n-1)``, the max squared overlap of ``|W_n>`` with
    product states. ``exact=True`` returns a :class:`~fractions.Fraction`.

    Unlike state constructors this is a scalar formula, so ``n`` has no
    upper cap.
    """
    n = check_n_qubits(n, high=float("inf"))
    value = Fraction(n - 1, n) ** (n - 1)
    return value if exact else float(value)


@dataclass(eq=False)
class Witness:
    n_qubits: int
    reference: np.ndarray
    alpha: float
    support: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.reference, n = check_pure_state(self.reference)
        if n != self.n_qubits:
            raise ValueError(f"reference has {n} qubits, witness declares {self.n_qubits}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        self.alpha = float(self.alpha)
        self.support = np.flatnonzero(self.reference)

    @property
    def is_w_witness(self):
        """True when the reference is ``|W_n>`` (up to global phase)."""
        return abs(abs(np.vdot(make_w_state(self.n_qubits), self.reference)) - 1.0) < 1e-12

    def to_dense(self):
        if self.n_qubits > MAX_DENSE_WITNESS_QUBITS:
            raise ValueError(
                f"dense witness is a test oracle capped at {MAX_DENSE_WITNESS_QUBITS} qubits"
            )
        dim = 1 << self.n_qubits
        return self.alpha * np.eye(dim) - np.outer(self.reference, self.reference.conj())


def build_witness(n):
    n = check_n_qubits(n)
    return Witness(n, make_w_state(n), witness_coefficient(n))


def build_custom_witness(reference, alpha):
    reference, n = check_pure_state(reference)
    return Witness(n, reference, alpha)


def reference_population(witness, rho):
    """``<ref|rho|ref>`` for a pure vector, :class:`Ensemble` or dense matrix."""
    rho, n = as_state(rho)
    if n != witness.n_qubits:
        raise ValueError(f"state has {n} qubits, witness expects {witness.n_qubits}")
    s = witness.support
    ref = witness.reference[s]
    if isinstance(rho, Ensemble):
        amps = rho.states[:, s] @ ref.conj()
        value = float(np.dot(rho.weights, np.abs(amps) ** 2))
        if rho.diagonal is not None:
            value += float(np.dot(rho.diagonal[s], np.abs(ref) ** 2))
        return value
    if rho.ndim == 1:
        return float(abs(np.vdot(ref, rho[s])) ** 2)
    return float(np.real(ref.conj() @ rho[np.ix_(s, s)] @ ref))


def expectation(witness, rho):
    """``Tr(W rho) = alpha - <ref|rho|ref>``."""
    return witness.alpha - reference_population(witness, rho)


def single_excitation_trace(psi):
    """Closed-form ``Tr(W_n |psi><psi|) = c_n - |sum of single-excitation
    amplitudes|^2 / n``."""
    psi, n = check_pure_state(psi)
    total = psi[1 << np.arange(n)].sum()
    return witness_coefficient(n) - abs(total) ** 2 / n


@dataclass(frozen=True)
class BoundsTable:
    """Lower/upper limits of ``Tr(W rho)`` per separability class.

    ``dk_min[k-1]`` is the smallest value reachable by states in ``D_k``.
    """

    n_qubits: int
    c: float
    alpha: float
    global_min: float
    global_max: float
    full_sep_min: float
    dk_min: tuple

    @property
    def eigenvalues(self):
        return (self.alpha, self.alpha - 1.0)

    def to_dict(self):
        return {
            "n_qubits": self.n_qubits,
            "c": self.c,
            "alpha": self.alpha,
            "eigenvalues": list(self.eigenvalues),
            "global": [self.global_min, self.global_max],
            "full_sep_min": self.full_sep_min,
            "d_k_min": list(self.dk_min),
        }


def bounds_table(n, alpha=None):
    """Bounds for the W-state witness with coefficient ``alpha``
    (default the optimal ``c_n``)."""
    n = check_n_qubits(n)
    c = witness_coefficient(n)
    a = c if alpha is None else float(alpha)
    dk = tuple(a - (n - k) / n for k in range(1, n // 2 + 1))
    return BoundsTable(
        n_qubits=n,
        c=c,
        alpha=a,
        global_min=a - 1.0,
        global_max=max(a, 1.0 - a),
        full_sep_min=a - c,
        dk_min=dk,
    )


@dataclass(frozen=True)
class Verdict:
    trace: float
    n_qubits: int
    c: float
    full_sep_threshold: float
    dk_thresholds: tuple
    not_fully_separable: bool
    excluded_from_dk: tuple
    genuine_entangled: bool

    @property
    def margin(self):
        """Signed distance from the trace to the nearest threshold."""
        thresholds = (self.full_sep_threshold,) + self.dk_thresholds
        return min((self.trace - t for t in thresholds), key=abs)

    @property
    def label(self):
        if self.genuine_entangled:
            return "genuine_entangled"
        for k, excluded in enumerate(self.excluded_from_dk, start=1):
            if excluded:
                return f"not_in_D{k}"
        if self.not_fully_separable:
            return "entangled"
        return "inconclusive"

    def to_dict(self):
        return {
            "trace": self.trace,
            "c": self.c,
            "thresholds": {"full_sep": self.full_sep_threshold, "d_k": list(self.dk_thresholds)},
            "flags": {
                "not_fully_separable": self.not_fully_separable,
                "excluded_from_d_k": list(self.excluded_from_dk),
                "genuine_entangled": self.genuine_entangled,
            },
            "label": self.label,
            "margin": self.margin,
        }


def classify(t, n, alpha=None):
    """Separability verdict for a measured value ``t = Tr(W_n rho)``.

    Thresholds are strict with no slack; callers handle uncertainty.
    Values outside the global range by more than 1e-9 are rejected as
    coming from an invalid state.
    """
    table = bounds_table(n, alpha)
    t = float(t)
    if not table.global_min - CLASSIFY_SLACK <= t <= table.global_max + CLASSIFY_SLACK:
        raise ValueError(
            f"trace {t!r} lies outside the attainable range "
            f"[{table.global_min!r}, {table.global_max!r}]; input state is inconsistent"
        )
    excluded = tuple(t < bound for bound in table.dk_min)
    return Verdict(
        trace=t,
        n_qubits=table.n_qubits,
        c=table.c,
        full_sep_threshold=table.full_sep_min,
        dk_thresholds=table.dk_min,
        not_fully_separable=t < table.full_sep_min,
        excluded_from_dk=excluded,
        genuine_entangled=excluded[0],
    )


class WitnessClassifier(BaseEstimator):
    """Estimator wrapper around the W-state witness.

    ``fit`` only fixes the qubit count (inferred from the first sample if
    ``n_qubits`` is None) and builds the witness; ``decision_function``
    returns ``Tr(W rho)`` per sample and ``predict`` the verdict label.
    Samples are pure vectors, :class:`Ensemble` objects or dense density
    matrices.

    Parameters
    ----------
    n_qubits : int, optional
    alpha : float, optional
        Witness coefficient; defaults to the optimal ``c_n``.
    """

    def __init__(self, n_qubits=None, alpha=None):
        self.n_qubits = n_qubits
        self.alpha = alpha

    def fit(self, X=None, y=None):
        n = self.n_qubits
        if n is None:
            if X is None or len(X) == 0:
                raise ValueError("n_qubits is unset and there are no samples to infer it from")
            _, n = as_state(X[0])
        n = check_n_qubits(n)
        alpha = witness_coefficient(n) if self.alpha is None else self.alpha
        self.witness_ = Witness(n, make_w_state(n), alpha)
        self.bounds_ = bounds_table(n, alpha)
        self.n_qubits_ = n
        return self

    def decision_function(self, X):
        check_is_fitted(self, "witness_")
        return np.array([expectation(self.witness_, x) for x in X])

    def verdicts(self, X):
        check_is_fitted(self, "witness_")
        return [classify(t, self.n_qubits_, self.witness_.alpha) for t in self.decision_function(X)]

    def predict(self, X):
        return np.array([v.label for v in self.verdicts(X)])
