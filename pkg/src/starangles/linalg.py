"""Dense complex linear algebra kernel.

Norms, Hermitian functional calculus, least-squares solves, Kronecker
products, and the central tolerance policy used everywhere else.

Conventions
-----------
- Matrices are square ``numpy.ndarray`` of ``complex128`` unless stated.
- Matrix equality is decided in operator norm against ``eq_tol``.
- The Hilbert-Schmidt inner product is normalized,
  ``<x, y> = tr(x* y) / n`` for ``n x n`` matrices, and is used only for
  coordinates and least squares; reported norms of algebra elements are
  operator norms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import ArgumentError, DimensionError, ShapeError, SingularityError

PSDFunction = Literal["sqrt", "pinv_sqrt", "inv"]


@dataclass(frozen=True)
class Tolerances:
    """Central numerical policy.

    Parameters
    ----------
    eq_tol : float
        Operator-norm threshold for matrix equality.
    rank_tol : float
        Eigenvalue cutoff for pseudo-inverses and rank decisions; fixes the
        support projections used by the partial-isometry normalization.
    angle_tol : float
        Agreement threshold between independent angle computation paths.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-10
    angle_tol: float = 1e-8

    def __post_init__(self):
        if min(self.eq_tol, self.rank_tol, self.angle_tol) <= 0.0:
            raise ArgumentError("tolerances must be strictly positive")
        if self.rank_tol > self.eq_tol:
            raise ArgumentError("rank_tol must not exceed eq_tol")


DEFAULT_TOLERANCES = Tolerances()


def as_square_matrix(m) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting empty or ragged input."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise DimensionError("matrix is empty")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(m).T


def op_norm(m) -> float:
    """Largest singular value of ``m``.

    Raises
    ------
    DimensionError
        If the matrix is empty or not two-dimensional.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError("op_norm requires a nonempty matrix")
    return float(np.linalg.norm(a, 2))


def op_norms(stack: np.ndarray) -> np.ndarray:
    """Largest singular value of each matrix in a stack."""
    a = np.asarray(stack, dtype=complex)
    if a.ndim != 3 or a.shape[0] == 0:
        raise DimensionError("op_norms requires a nonempty stack of matrices")
    return np.linalg.svd(a, compute_uv=False)[:, 0]


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Normalized Hilbert-Schmidt inner product ``tr(a* b) / n``."""
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b) / a.shape[0])


def hs_norm(m: np.ndarray) -> float:
    """Normalized Hilbert-Schmidt norm ``sqrt(tr(m* m) / n)``."""
    return float(np.linalg.norm(m) / np.sqrt(m.shape[0]))


def psd_calculus(
    h, func: PSDFunction, tol: Tolerances = DEFAULT_TOLERANCES
) -> np.ndarray:
    """Apply ``func`` to the eigenvalues of a positive semidefinite matrix.

    Parameters
    ----------
    h : array_like
        Hermitian matrix with eigenvalues >= ``-rank_tol``.
    func : {"sqrt", "pinv_sqrt", "inv"}
        ``sqrt`` maps eigenvalues to their square roots (negatives within
        tolerance are clamped to zero); ``pinv_sqrt`` maps eigenvalues
        <= ``rank_tol`` to 0 and the rest to ``lam**-0.5``; ``inv``
        requires every eigenvalue > ``rank_tol``.

    Raises
    ------
    ShapeError
        If ``h`` is not Hermitian within ``eq_tol``.
    SingularityError
        If ``inv`` is requested and ``h`` is singular.
    ArgumentError
        If ``h`` has an eigenvalue below ``-rank_tol`` or ``func`` is unknown.
    """
    a = as_square_matrix(h)
    if op_norm(a - adjoint(a)) > tol.eq_tol:
        raise ShapeError("psd_calculus requires a Hermitian matrix")
    a = (a + adjoint(a)) / 2.0
    w, v = np.linalg.eigh(a)
    if w[0] < -tol.rank_tol:
        raise ArgumentError(f"matrix is not positive semidefinite (min eig {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    if func == "sqrt":
        fw = np.sqrt(w)
    elif func == "pinv_sqrt":
        fw = np.where(w > tol.rank_tol, 1.0 / np.sqrt(np.where(w > tol.rank_tol, w, 1.0)), 0.0)
    elif func == "inv":
        if w[0] <= tol.rank_tol:
            raise SingularityError(f"inverse of singular matrix (min eig {w[0]:.3e})")
        fw = 1.0 / w
    else:
        raise ArgumentError(f"unknown spectral function {func!r}")
    return (v * fw) @ adjoint(v)


def lstsq_solve(
    coeff_columns: Sequence[np.ndarray],
    target: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares combination of matrices.

    Finds coefficients ``c`` minimizing ``|sum_i c_i M_i - target|`` in
    Hilbert-Schmidt norm and returns ``(c, residual)`` with the residual
    in the normalized Hilbert-Schmidt norm.

    Raises
    ------
    ArgumentError
        If the column list is empty.
    DimensionError
        If the matrices do not all share the target's shape.
    """
    if len(coeff_columns) == 0:
        raise ArgumentError("lstsq_solve requires at least one column")
    t = np.asarray(target, dtype=complex)
    cols = []
    for m in coeff_columns:
        a = np.asarray(m, dtype=complex)
        if a.shape != t.shape:
            raise DimensionError(f"column shape {a.shape} does not match target {t.shape}")
        cols.append(a.ravel())
    system = np.stack(cols, axis=1)
    c, _, _, _ = np.linalg.lstsq(system, t.ravel(), rcond=tol.rank_tol)
    resid = system @ c - t.ravel()
    return c, float(np.linalg.norm(resid) / np.sqrt(t.shape[0]))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def orthonormal_span(
    mats: Iterable[np.ndarray] | np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Orthonormal basis of the span of the given matrices.

    Returns a stack of matrices orthonormal for the normalized
    Hilbert-Schmidt inner product, spanning the same subspace. Rank is
    decided by singular values relative to the largest, at ``rank_tol``.
    """
    stack = np.asarray(list(mats) if not isinstance(mats, np.ndarray) else mats, dtype=complex)
    if stack.ndim != 3:
        raise DimensionError("expected a stack of matrices")
    k, n, n2 = stack.shape
    if n != n2:
        raise DimensionError("matrices must be square")
    rows = stack.reshape(k, n * n) / np.sqrt(n)
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] <= tol.rank_tol:
        return np.zeros((0, n, n), dtype=complex)
    rank = int(np.sum(s > tol.rank_tol * s[0]))
    return (vh[:rank] * np.sqrt(n)).reshape(rank, n, n)


def random_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Standard complex Gaussian ``n x n`` matrix."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish random unitary from the QR of a complex Gaussian."""
    q, r = np.linalg.qr(random_matrix(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))
