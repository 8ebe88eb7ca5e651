"""Orthonormal module bases of partial isometries and the Watatani index.

The big algebra of an inclusion is a right module over the small one with
inner product ``<x, y> = E(x* y)``. In finite dimensions that module has
a finite orthonormal basis of partial isometries, every such basis is an
exact quasi-basis (``x = sum_j m_j E(m_j* x)``), and the index
``sum_j m_j m_j*`` is a positive invertible central element independent
of the basis chosen.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import ArgumentError, ConstructionError, InvariantError
from .expectation import CondExpectation
from .linalg import DEFAULT_TOLERANCES, Tolerances, adjoint, op_norm


@dataclass(frozen=True)
class ModuleBasis:
    """Orthonormal basis of partial isometries for the module over B."""

    expectation: CondExpectation
    elements: np.ndarray = field(repr=False)
    support_projections: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.elements.shape[0]


@dataclass(frozen=True)
class WatataniIndex:
    """Index value; ``scalar`` is set when the value is a multiple of 1."""

    value: np.ndarray = field(repr=False)
    scalar: float | None

    @property
    def norm(self) -> float:
        return op_norm(self.value)

    def inverse(self, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
        return linalg.psd_calculus(self.value, "inv", tol)


def orthonormal_basis(
    exp: CondExpectation,
    tol: Tolerances = DEFAULT_TOLERANCES,
    order: Sequence[int] | None = None,
) -> ModuleBasis:
    """Greedy construction of an orthonormal module basis.

    Iterates over a linear basis of the big algebra (in the given order):
    the residual of each vector against the module span built so far is
    normalized into a partial isometry via the pseudo-inverse square root
    of its self-inner-product and appended when nonzero. Sweeps repeat
    until every residual falls below ``eq_tol``; each accepted element
    strictly enlarges the module span, so termination is guaranteed for a
    faithful expectation.
    """
    a = exp.big
    if order is None:
        order = list(range(a.dim))
    else:
        order = list(order)
        if sorted(order) != list(range(a.dim)):
            raise ArgumentError("order must be a permutation of the basis indices")
    ms: list[np.ndarray] = []

    def residual_of(x: np.ndarray) -> np.ndarray:
        r = x
        for m in ms:
            r = r - m @ exp.apply(adjoint(m) @ r)
        return r

    for _ in range(a.dim + 2):
        for s in order:
            r = residual_of(a.basis[s])
            h = exp.apply(adjoint(r) @ r)
            if op_norm(h) > tol.eq_tol:
                ms.append(r @ linalg.psd_calculus(h, "pinv_sqrt", tol))
        worst = max(op_norm(residual_of(a.basis[s])) for s in order)
        if worst < tol.eq_tol:
            break
    else:
        raise ConstructionError(
            "module basis sweeps", worst, "residuals did not decay; is E faithful?"
        )

    elements = np.stack(ms)
    supports = np.stack([exp.apply(adjoint(m) @ m) for m in ms])
    for j, p in enumerate(supports):
        err = max(op_norm(p @ p - p), op_norm(adjoint(p) - p))
        if err > tol.eq_tol:
            raise ConstructionError("support projection", err, f"element {j}")
    for j in range(len(ms)):
        for k in range(j + 1, len(ms)):
            err = op_norm(exp.apply(adjoint(ms[j]) @ ms[k]))
            if err > tol.eq_tol:
                raise ConstructionError("mutual orthogonality", err, f"pair ({j}, {k})")
    return ModuleBasis(expectation=exp, elements=elements, support_projections=supports)


def watatani_index(basis: ModuleBasis, tol: Tolerances = DEFAULT_TOLERANCES) -> WatataniIndex:
    """Index ``sum_j m_j m_j*`` with centrality and positivity verified."""
    exp = basis.expectation
    a = exp.big
    value = np.einsum("jik,jlk->il", basis.elements, np.conj(basis.elements))
    herm = op_norm(value - adjoint(value))
    if herm > tol.eq_tol:
        raise InvariantError(f"index is not self-adjoint (residual {herm:.3e})")
    value = (value + adjoint(value)) / 2.0
    centrality = max(op_norm(value @ b - b @ value) for b in a.basis)
    if centrality > tol.eq_tol:
        raise InvariantError(
            f"index is not central (residual {centrality:.3e}); defective module basis"
        )
    eigs = np.linalg.eigvalsh(value)
    if eigs[0] <= tol.rank_tol:
        raise InvariantError(f"index is not invertible (min eig {eigs[0]:.3e})")
    mean = float(np.trace(value).real / a.ambient_dim)
    scalar = mean if op_norm(value - mean * a.unit) < tol.eq_tol else None
    return WatataniIndex(value=value, scalar=scalar)


def verify_quasi_basis(
    exp: CondExpectation,
    candidate: Sequence[np.ndarray] | np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
    samples: int = 100,
    seed: int = 11,
) -> float:
    """Maximal reconstruction residual ``|x - sum_i u_i E(u_i* x)|``.

    Checked over the big algebra's basis plus seeded random elements.
    """
    a = exp.big
    mats = [np.asarray(u, dtype=complex) for u in candidate]
    for u in mats:
        member, resid = a.contains(u, tol)
        if not member:
            raise ArgumentError(
                f"candidate element leaves the algebra (residual {resid:.3e})"
            )
    rng = np.random.default_rng(seed)
    targets = list(a.basis) + [a.random_element(rng) for _ in range(samples)]
    worst = 0.0
    for x in targets:
        recon = sum(u @ exp.apply(adjoint(u) @ x) for u in mats)
        worst = max(worst, op_norm(x - recon))
    return worst
