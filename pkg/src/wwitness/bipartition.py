"""Coefficient matrices across qubit bipartitions and largest Schmidt
coefficients."""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import sigma_max
from .states import check_pure_state


@dataclass(frozen=True)
class Bipartition:
    """Cut of ``n_qubits`` into ``subset`` and its complement (1-based)."""

    n_qubits: int
    subset: tuple

    def __post_init__(self):
        subset = tuple(sorted(int(q) for q in self.subset))
        if len(set(subset)) != len(subset):
            raise ValueError(f"subset {subset} has repeated qubits")
        if not subset or len(subset) >= self.n_qubits:
            raise ValueError(
                f"subset size must be in [1, {self.n_qubits - 1}], got {len(subset)}"
            )
        if subset[0] < 1 or subset[-1] > self.n_qubits:
            raise ValueError(f"subset {subset} is not within 1..{self.n_qubits}")
        object.__setattr__(self, "subset", subset)

    @property
    def complement(self):
        return tuple(q for q in range(1, self.n_qubits + 1) if q not in self.subset)

    @property
    def k(self):
        """Size of the smaller side."""
        return min(len(self.subset), self.n_qubits - len(self.subset))

    def canonical(self):
        """The same cut written as the side containing qubit 1."""
        if 1 in self.subset:
            return self
        return Bipartition(self.n_qubits, self.complement)


def bipartitions(n, k):
    """Every distinct cut separating ``k`` qubits from ``n - k`` (``k <= n/2``),
    each listed once in canonical form."""
    if not 1 <= k <= n // 2:
        raise ValueError(f"k must be in [1, {n // 2}], got {k}")
    seen = set()
    out = []
    for subset in combinations(range(1, n + 1), k):
        cut = Bipartition(n, subset).canonical()
        if cut.subset not in seen:
            seen.add(cut.subset)
            out.append(cut)
    return out


def coefficient_matrix(psi, cut):
    """Reshape amplitudes into a ``2**|subset| x 2**(n-|subset|)`` matrix.

    Row index bits are the subset qubits and column bits the complement,
    each in increasing qubit order, most significant first.
    """
    psi, n = check_pure_state(psi)
    if not isinstance(cut, Bipartition):
        cut = Bipartition(n, cut)
    if cut.n_qubits != n:
        raise ValueError(f"cut is for {cut.n_qubits} qubits, state has {n}")
    order = [q - 1 for q in cut.subset + cut.complement]
    tensor = psi.reshape((2,) * n).transpose(order)
    return tensor.reshape(1 << len(cut.subset), -1)


def largest_schmidt_coefficient(psi, cut, tol=1e-12):
    return sigma_max(coefficient_matrix(psi, cut), tol=tol)


def max_biseparable_overlap_sq(psi, k):
    """Max of ``|<phi|psi>|^2`` over pure states product across some cut
    separating ``k`` qubits, by exhaustive enumeration of the cuts."""
    psi, n = check_pure_state(psi)
    return max(largest_schmidt_coefficient(psi, cut) ** 2 for cut in bipartitions(n, k))


def biseparable_alpha(psi):
    """Max overlap squared over all biseparable pure states (every k)."""
    psi, n = check_pure_state(psi)
    return max(max_biseparable_overlap_sq(psi, k) for k in range(1, n // 2 + 1))


def w_state_claim(n, k):
    """Largest Schmidt coefficient of ``|W_n>`` across any k-vs-rest cut."""
    return float(np.sqrt((n - k) / n))


def from_coefficient_matrix(matrix, cut):
    """Inverse of :func:`coefficient_matrix`: amplitudes in original qubit order."""
    n = cut.n_qubits
    order = [q - 1 for q in cut.subset + cut.complement]
    tensor = np.asarray(matrix, dtype=complex).reshape((2,) * n)
    return np.ascontiguousarray(tensor.transpose(np.argsort(order))).reshape(-1)


def product_across(left, right, cut):
    """``|left>`` on ``cut.subset`` tensored with ``|right>`` on the complement."""
    return from_coefficient_matrix(np.outer(left, right), cut)
