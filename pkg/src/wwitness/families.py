"""Parametric mixtures of the W state and their detection thresholds."""

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy.optimize import bisect

from .states import Ensemble, check_n_qubits, make_ghz_state, make_w_state
from .witness import classify, witness_coefficient

FAMILIES = ("w_ghz_mix", "w_white_noise")
MAX_NOISE_QUBITS = 16

THREE_TANGLE_NOTE = (
    "For n=3 the W/GHZ mixture is also genuinely entangled for p <= 0.373 according "
    "to its three-tangle, a region this witness cannot detect; the three-tangle is "
    "not computed here."
)


def _check_family(name, n):
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    n = check_n_qubits(n)
    if name == "w_white_noise" and n > MAX_NOISE_QUBITS:
        raise ValueError(f"w_white_noise is capped at {MAX_NOISE_QUBITS} qubits")
    return n


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return float(p)


def realize(name, n, p):
    """Ensemble for ``p|W><W| + (1-p) GHZ`` or ``p|W><W| + (1-p) I/2^n``."""
    n = _check_family(name, n)
    p = _check_p(p)
    w = make_w_state(n)
    if name == "w_ghz_mix":
        terms = [(wt, s) for wt, s in ((p, w), (1.0 - p, make_ghz_state(n))) if wt > 0]
        return Ensemble.from_terms(terms)
    diagonal = np.full(1 << n, (1.0 - p) / (1 << n))
    if p > 0:
        return Ensemble([p], w[None, :], diagonal)
    return Ensemble(np.empty(0), np.empty((0, 1 << n)), diagonal)


@dataclass(frozen=True)
class AffineCurve:
    """``t(p) = intercept + slope * p``."""

    intercept: float
    slope: float

    def __call__(self, p):
        return self.intercept + self.slope * p


def trace_curve(name, n):
    """``Tr(W_n rho(p))`` as an affine function of ``p``."""
    n = _check_family(name, n)
    c = witness_coefficient(n)
    if name == "w_ghz_mix":
        return AffineCurve(c, -1.0)
    noise = 1.0 / (1 << n)
    # <W|rho|W> = p + (1 - p) / 2^n
    return AffineCurve(c - noise, -(1.0 - noise))


@dataclass(frozen=True)
class ThresholdReport:
    family: str
    n_qubits: int
    p_entangled: float
    p_genuine: float
    p_entangled_numeric: float
    p_genuine_numeric: float

    @property
    def entangled_error(self):
        return abs(self.p_entangled - self.p_entangled_numeric)

    @property
    def genuine_error(self):
        return abs(self.p_genuine - self.p_genuine_numeric)

    def to_dict(self):
        return {
            "family": self.family,
            "n_qubits": self.n_qubits,
            "p_entangled": self.p_entangled,
            "p_genuine": self.p_genuine,
            "p_entangled_numeric": self.p_entangled_numeric,
            "p_genuine_numeric": self.p_genuine_numeric,
            "entangled_error": self.entangled_error,
            "genuine_error": self.genuine_error,
        }


def closed_form_thresholds(name, n):
    """``(p_entangled, p_genuine)``: detection holds for ``p`` strictly above."""
    n = _check_family(name, n)
    c = witness_coefficient(n)
    if name == "w_ghz_mix":
        return c, (n - 1) / n
    dim = float(1 << n)
    return (dim * c - 1) / (dim - 1), (dim * (n - 1) / n - 1) / (dim - 1)


def thresholds(name, n):
    """Closed-form thresholds alongside bisection crossings of the trace
    curve with the fully-separable and ``D_1`` bounds."""
    n = _check_family(name, n)
    curve = trace_curve(name, n)
    c = witness_coefficient(n)
    p_ent, p_gen = closed_form_thresholds(name, n)

    def crossing(level):
        return bisect(lambda p: curve(p) - level, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)

    return ThresholdReport(
        family=name,
        n_qubits=n,
        p_entangled=p_ent,
        p_genuine=p_gen,
        p_entangled_numeric=crossing(0.0),
        p_genuine_numeric=crossing(c - (n - 1) / n),
    )


def sweep_grid(p_from, p_to, step):
    if not 0.0 <= p_from <= p_to <= 1.0:
        raise ValueError(f"need 0 <= p_from <= p_to <= 1, got [{p_from}, {p_to}]")
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(np.floor((p_to - p_from) / step + 1e-9)) + 1
    return [round(p_from + i * step, 12) for i in range(count)]


def _sweep_point(curve, n, p):
    t = curve(p)
    return p, t, classify(t, n)


def sweep(name, n, p_from=0.0, p_to=1.0, step=0.01, n_jobs=None):
    """``[(p, trace, Verdict), ...]`` over an ascending grid of ``p``."""
    n = _check_family(name, n)
    curve = trace_curve(name, n)
    grid = sweep_grid(p_from, p_to, step)
    return Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_sweep_point)(curve, n, p) for p in grid
    )
