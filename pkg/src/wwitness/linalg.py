"""Small dense complex linear algebra: largest singular value by power
iteration and Hermitian validation.

Matrices handled here are tiny (coefficient matrices of at most
2^(N/2) rows, density matrices of at most 1024 rows), so everything is
plain numpy on dense arrays.
"""

import numpy as np

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10000
MAX_DENSE_DIM = 1024


class ConvergenceError(RuntimeError):
    """Power iteration did not reach the requested tolerance."""

    def __init__(self, message, iterate=None, residual=None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual


def as_complex_matrix(m, name="matrix"):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"{name} must be a nonempty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def _power_iterate(gram, x, tol, max_iter, history=None):
    # Rayleigh quotients of a PSD matrix along power iterates never decrease.
    x = x / np.linalg.norm(x)
    lam = 0.0
    residual = np.inf
    for _ in range(max_iter):
        y = gram @ x
        lam = float(np.real(np.vdot(x, y)))
        residual = float(np.linalg.norm(y - lam * x))
        if history is not None:
            history.append(lam)
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0:
            return 0.0, x, 0.0
        if residual <= tol * max(1.0, lam):
            return lam, x, residual
        x = y / norm_y
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(residual {residual:.3e})",
        iterate=x,
        residual=residual,
    )


def sigma_max(m, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, history=None):
    """Largest singular value of ``m``.

    Power iteration runs on the smaller of ``m m^H`` and ``m^H m``, first
    from the all-ones vector and then once more from a fixed perturbed
    start, so a start orthogonal to the dominant subspace cannot hide it.

    Parameters
    ----------
    m : array_like, shape (r, c)
        Nonzero complex matrix.
    tol : float
        Residual tolerance ``||G x - lam x|| <= tol * max(1, lam)``.
    max_iter : int
        Iteration cap per start.
    history : list, optional
        If given, Rayleigh quotient estimates of the first start are
        appended to it.

    Returns
    -------
    float

    Raises
    ------
    ConvergenceError
        If either start fails to converge within ``max_iter``.
    """
    m = as_complex_matrix(m)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not np.any(m):
        raise ValueError("sigma_max needs a nonzero matrix")
    rows, cols = m.shape
    gram = m @ m.conj().T if rows <= cols else m.conj().T @ m
    dim = gram.shape[0]

    start = np.ones(dim, dtype=complex)
    lam0, _, _ = _power_iterate(gram, start, tol, max_iter, history)

    rng = np.random.default_rng(0x5EED)
    perturbed = start + 0.5 * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    lam1, _, _ = _power_iterate(gram, perturbed, tol, max_iter)
    return float(np.sqrt(max(lam0, lam1, 0.0)))


def check_hermitian(m, tol=1e-10):
    """Raise ``ValueError`` naming the worst offending entry pair if ``m``
    is not Hermitian within ``tol``."""
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    diff = np.abs(m - m.conj().T)
    worst = np.unravel_index(np.argmax(diff), diff.shape)
    if diff[worst] > tol:
        i, j = (int(v) for v in worst)
        raise ValueError(
            f"matrix is not Hermitian: entries ({i},{j}) and ({j},{i}) "
            f"differ from conjugate symmetry by {diff[worst]:.3e}"
        )
    return m


def min_eigenvalue_hermitian(m, tol=1e-10):
    """Smallest eigenvalue of a Hermitian matrix of dimension <= 1024."""
    m = check_hermitian(m, tol)
    if m.shape[0] > MAX_DENSE_DIM:
        raise ValueError(f"dense matrices are capped at dimension {MAX_DENSE_DIM}")
    herm = 0.5 * (m + m.conj().T)
    return float(np.linalg.eigvalsh(herm)[0])
