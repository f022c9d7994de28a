"""N-qubit pure states, ensembles and dense density matrices.

A pure state is a 1-D complex array of length ``2**n``. Basis index ``b``
reads as an n-bit string with qubit 1 as the most significant bit, so
``|100>`` at n=3 is index 4.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import MAX_DENSE_DIM, check_hermitian

NORM_TOL = 1e-10
MAX_QUBITS = 24
MAX_DENSE_QUBITS = 10


def check_n_qubits(n, low=2, high=MAX_QUBITS):
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"n_qubits must be an integer, got {n!r}")
    n = int(n)
    if not low <= n <= high:
        raise ValueError(f"n_qubits must be in [{low}, {high}], got {n}")
    return n


def _qubits_for_length(length):
    n = int(length).bit_length() - 1
    if length < 4 or 1 << n != length:
        raise ValueError(f"state length must be 2**n with n >= 2, got {length}")
    return n


def check_pure_state(psi, tol=NORM_TOL):
    """Validate a state vector; returns ``(array, n_qubits)``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"pure state must be 1-D, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise ValueError("pure state has non-finite amplitudes")
    n = _qubits_for_length(psi.shape[0])
    norm_sq = float(np.vdot(psi, psi).real)
    if abs(norm_sq - 1.0) > tol:
        raise ValueError(f"pure state is not normalized: sum |a|^2 = {norm_sq!r}")
    return psi, n


def check_density(rho, tol=NORM_TOL, psd_tol=1e-8):
    """Validate a dense density matrix (n <= 10); returns ``(array, n_qubits)``."""
    rho = check_hermitian(rho, tol)
    dim = rho.shape[0]
    if dim > MAX_DENSE_DIM:
        raise ValueError(f"dense density matrices are capped at {MAX_DENSE_QUBITS} qubits")
    n = _qubits_for_length(dim)
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > tol:
        raise ValueError(f"density matrix trace is {trace.real:.12g}, expected 1")
    lowest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lowest < -psd_tol:
        raise ValueError(f"density matrix is not positive: min eigenvalue {lowest:.3e}")
    return rho, n


@dataclass(eq=False)
class Ensemble:
    """Convex mixture ``sum_j w_j |psi_j><psi_j| + sum_b d_b |b><b|``.

    ``states`` holds one pure state per row. ``diagonal`` is an optional
    mixture over computational basis states, stored as a length ``2**n``
    weight vector so that noise terms never need ``4**n`` memory.
    """

    weights: np.ndarray
    states: np.ndarray
    diagonal: np.ndarray | None = None
    n_qubits: int = field(init=False)

    def __post_init__(self):
        self.weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        self.states = np.atleast_2d(np.asarray(self.states, dtype=complex))
        if self.states.shape[0] == 0 and self.diagonal is None:
            raise ValueError("ensemble needs at least one term")
        if self.weights.shape[0] != self.states.shape[0]:
            raise ValueError(
                f"{self.weights.shape[0]} weights for {self.states.shape[0]} states"
            )
        self.n_qubits = _qubits_for_length(self.states.shape[1])
        if np.any(self.weights <= 0) or np.any(self.weights > 1):
            raise ValueError("ensemble weights must lie in (0, 1]")
        norms = np.einsum("ij,ij->i", self.states.conj(), self.states).real
        bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
        if bad.size:
            raise ValueError(f"ensemble term {int(bad[0])} is not normalized: {norms[bad[0]]!r}")
        total = self.weights.sum()
        if self.diagonal is not None:
            self.diagonal = np.asarray(self.diagonal, dtype=float)
            if self.diagonal.shape != (self.states.shape[1],):
                raise ValueError("diagonal weights must have length 2**n")
            if np.any(self.diagonal < 0):
                raise ValueError("diagonal weights must be nonnegative")
            total += self.diagonal.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"ensemble weights sum to {total!r}, expected 1")

    @classmethod
    def pure(cls, psi):
        psi, _ = check_pure_state(psi)
        return cls([1.0], psi[None, :])

    @classmethod
    def from_terms(cls, terms):
        """Build from an iterable of ``(weight, state)`` pairs."""
        terms = list(terms)
        if not terms:
            raise ValueError("ensemble needs at least one term")
        weights = [w for w, _ in terms]
        states = np.stack([np.asarray(s, dtype=complex) for _, s in terms])
        return cls(weights, states)

    def to_dense(self):
        if self.n_qubits > MAX_DENSE_QUBITS:
            raise ValueError(f"dense form is capped at {MAX_DENSE_QUBITS} qubits")
        rho = (self.states.T * self.weights) @ self.states.conj()
        if self.diagonal is not None:
            rho = rho + np.diag(self.diagonal)
        return rho


def as_state(rho):
    """Coerce input to a pure vector, an :class:`Ensemble` or a dense
    density matrix, validating it. Returns ``(obj, n_qubits)``."""
    if isinstance(rho, Ensemble):
        return rho, rho.n_qubits
    arr = np.asarray(rho)
    if arr.ndim == 1:
        return check_pure_state(arr)
    if arr.ndim == 2:
        return check_density(arr)
    raise ValueError(f"cannot interpret array of shape {arr.shape} as a state")


def basis_state(bits):
    """Computational basis state from a bit string such as ``"100"``."""
    n = check_n_qubits(len(bits))
    psi = np.zeros(1 << n, dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def make_w_state(n):
    n = check_n_qubits(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[1 << np.arange(n)] = 1.0 / np.sqrt(n)
    return psi


def make_ghz_state(n):
    n = check_n_qubits(n)
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = psi[-1] = 1.0 / np.sqrt(2.0)
    return psi


def make_acin_state(lambdas, theta):
    """Three-qubit state in the five-parameter canonical form
    ``l0|000> + l1 e^{i theta}|100> + l2|101> + l3|110> + l4|111>``."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (5,):
        raise ValueError("acin form needs exactly five lambdas")
    if np.any(lam < 0):
        raise ValueError("acin lambdas must be nonnegative")
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"acin theta must lie in [0, pi], got {theta!r}")
    total = float(np.sum(lam**2))
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"acin lambdas are not normalized: sum lambda^2 = {total!r}")
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = lam[0]
    psi[0b100] = lam[1] * np.exp(1j * theta)
    psi[0b101] = lam[2]
    psi[0b110] = lam[3]
    psi[0b111] = lam[4]
    return psi


def make_symmetric_product(a, b, n):
    """The n-fold tensor power of ``a|0> + b|1>``."""
    n = check_n_qubits(n)
    total = abs(a) ** 2 + abs(b) ** 2
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"single-qubit factor is not normalized: |a|^2+|b|^2 = {total!r}")
    ones = popcounts(n)
    return np.power(complex(a), n - ones) * np.power(complex(b), ones)


def product_state(factors):
    """Tensor product of single-qubit vectors, qubit 1 first."""
    out = np.ones(1, dtype=complex)
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def popcounts(n):
    """Number of ones in each basis index of an n-qubit register."""
    idx = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for q in range(n):
        counts += (idx >> q) & 1
    return counts


def _check_permutation(perm, n):
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n}")
    return perm


def permute_qubits(psi, perm):
    """Move the content of qubit ``i`` to position ``perm[i-1]`` (1-based)."""
    psi, n = check_pure_state(psi)
    perm = _check_permutation(perm, n)
    tensor = psi.reshape((2,) * n)
    moved = np.moveaxis(tensor, list(range(n)), [p - 1 for p in perm])
    return np.ascontiguousarray(moved).reshape(-1)


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm, start=1):
        inv[p - 1] = i
    return inv


def overlap(s1, s2):
    """<s1|s2>, conjugate-linear in the first argument."""
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    if s1.shape != s2.shape:
        raise ValueError(f"dimension mismatch: {s1.shape} vs {s2.shape}")
    return complex(np.vdot(s1, s2))


def random_pure_state(n, rng):
    """Haar-random state on ``n >= 1`` qubits."""
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return v / np.linalg.norm(v)


def random_qubit(rng, size=None):
    """Haar-random single-qubit vectors, shape ``(2,)`` or ``(size, 2)``."""
    shape = (2,) if size is None else (size, 2)
    v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)
