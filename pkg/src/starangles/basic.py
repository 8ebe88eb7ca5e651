"""Concrete reduced basic construction for an inclusion B in A.

The big algebra, viewed as a ``d``-dimensional complex coordinate space
(``d = dim A``) under the inner product ``<x, y> = tr(E(x* y)) / n``,
carries left multiplication ``lambda(a)`` and the Jones projection ``e``
implementing the expectation. The algebra generated by both is the basic
construction; the dual expectation sends ``lambda(x) e lambda(y)`` to
``lambda(index^{-1} x y)``.
"""

from __future__ import annotations

import numpy as np

from . import algebra as alg
from . import linalg
from .algebra import Inclusion, StarAlgebra, commutant_within
from .errors import ArgumentError, ConstructionError, InvariantError
from .expectation import (
    CompatibleIntermediate,
    CondExpectation,
    _verify_expectation_axioms,
)
from .linalg import DEFAULT_TOLERANCES, Tolerances, adjoint, op_norm
from .pimsner import ModuleBasis, WatataniIndex, orthonormal_basis, watatani_index


class BasicConstruction:
    """Matrix realization of lambda(A), e, M1 and the index data."""

    def __init__(
        self,
        source: CondExpectation,
        module_basis: ModuleBasis,
        index: WatataniIndex,
        gram_sqrt: np.ndarray,
        gram_inv_sqrt: np.ndarray,
    ):
        self.source = source
        self.module_basis = module_basis
        self.index = index
        self.rep_dim = source.big.dim
        self._gram_sqrt = gram_sqrt
        self._gram_inv_sqrt = gram_inv_sqrt
        self.lambda_stack = np.stack([self.lambda_of(x) for x in source.big.basis])
        self._lambda_pinv = np.linalg.pinv(
            self.lambda_stack.reshape(self.rep_dim, -1).T
        )
        self.e_proj = gram_sqrt @ source.coefficient_matrix() @ gram_inv_sqrt
        self.lambda_algebra: StarAlgebra | None = None
        self.m1: StarAlgebra | None = None

    @property
    def dim_m1(self) -> int | None:
        return None if self.m1 is None else self.m1.dim

    def phi(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of an algebra element in the module picture."""
        return self._gram_sqrt @ self.source.big.coords(x)

    def unphi(self, vec: np.ndarray) -> np.ndarray:
        return self.source.big.reconstruct(self._gram_inv_sqrt @ vec)

    def lambda_of(self, m: np.ndarray) -> np.ndarray:
        """Matrix of left multiplication by ``m`` on the coordinates."""
        a = self.source.big
        products = np.asarray(m, dtype=complex) @ a.basis
        mult = a.coords_many(products).T
        return self._gram_sqrt @ mult @ self._gram_inv_sqrt

    def lambda_inverse(
        self, t: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
    ) -> np.ndarray:
        """Algebra element whose left-multiplication matrix is ``t``."""
        coeffs = self._lambda_pinv @ np.asarray(t, dtype=complex).ravel()
        recon = np.tensordot(coeffs, self.lambda_stack, axes=(0, 0))
        resid = linalg.hs_norm(recon - t)
        if resid > tol.eq_tol:
            raise ArgumentError(f"matrix is not in lambda(A) (residual {resid:.3e})")
        return self.source.big.reconstruct(coeffs)


def build(
    exp: CondExpectation,
    tol: Tolerances = DEFAULT_TOLERANCES,
    m1_method: str | None = "closure",
) -> BasicConstruction:
    """Build the reduced basic construction and verify its identities.

    ``m1_method`` selects how the algebra M1 is realized: ``"closure"``
    generates it from lambda(A) and e, ``"span"`` takes the linear span of
    ``lambda(m_j b) e lambda(m_k)*`` over the module basis (the same
    algebra, cheaper at larger coordinate dimensions), ``None`` skips it.
    """
    a, b = exp.big, exp.small
    d = a.dim

    module = orthonormal_basis(exp, tol)
    index = watatani_index(module, tol)

    gram = exp.state_gram()
    gram = (gram + adjoint(gram)) / 2.0
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] <= tol.rank_tol:
        raise ConstructionError("state faithfulness", float(eigs[0]))
    gram_sqrt = linalg.psd_calculus(gram, "sqrt", tol)
    gram_inv_sqrt = linalg.psd_calculus(gram, "pinv_sqrt", tol)

    bc = BasicConstruction(exp, module, index, gram_sqrt, gram_inv_sqrt)
    e_proj = bc.e_proj

    err = max(op_norm(e_proj @ e_proj - e_proj), op_norm(adjoint(e_proj) - e_proj))
    if err > tol.eq_tol:
        raise ConstructionError("jones projection idempotency", err)

    bc.lambda_algebra = alg.from_span(d, list(bc.lambda_stack), tol)

    fix = max(
        float(np.linalg.norm(e_proj @ bc.phi(x) - bc.phi(x))) for x in b.basis
    )
    if fix > tol.eq_tol:
        raise ConstructionError("e fixes the small algebra's coordinates", fix)

    compress = max(
        op_norm(
            e_proj @ bc.lambda_stack[s] @ e_proj - bc.lambda_of(exp.values[s]) @ e_proj
        )
        for s in range(d)
    )
    if compress > tol.eq_tol:
        raise ConstructionError("e lambda(a) e = lambda(E(a)) e", compress)

    commutant = commutant_within(bc.lambda_algebra, [e_proj], tol)
    lambda_b = np.stack([bc.lambda_of(x) for x in b.basis])
    containment = commutant._max_span_residual(lambda_b)
    if commutant.dim != b.dim or containment > tol.eq_tol:
        raise ConstructionError(
            "relative commutant of e inside lambda(A) equals lambda(B)",
            max(containment, float(abs(commutant.dim - b.dim))),
        )

    cover = sum(
        bc.lambda_of(m) @ e_proj @ adjoint(bc.lambda_of(m)) for m in module.elements
    )
    cover_err = op_norm(cover - np.eye(d))
    if cover_err > tol.eq_tol:
        raise ConstructionError("sum of lambda(m_j) e lambda(m_j)* = 1", cover_err)

    if m1_method == "closure":
        bc.m1 = alg.from_generators(d, list(bc.lambda_stack) + [e_proj], tol)
    elif m1_method == "span":
        bc.m1 = alg.from_span(d, _spanning_family(bc)[0], tol)
    elif m1_method is not None:
        raise ArgumentError(f"unknown m1 construction method {m1_method!r}")
    return bc


def _spanning_family(bc: BasicConstruction) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Spanning matrices ``lambda(m_j b_t) e lambda(m_k)*`` of M1 and the
    prescribed dual-expectation values ``index^{-1} m_j b_t m_k*``."""
    exp = bc.source
    b = exp.small
    module = bc.module_basis.elements
    inv = bc.index.inverse()
    lam_m = [bc.lambda_of(m) for m in module]
    right = [bc.e_proj @ adjoint(lam) for lam in lam_m]
    lam_b = [bc.lambda_of(x) for x in b.basis]
    columns = []
    values = []
    for j in range(len(module)):
        for t in range(b.dim):
            left = lam_m[j] @ lam_b[t]
            pre = inv @ module[j] @ b.basis[t]
            for k in range(len(module)):
                columns.append(left @ right[k])
                values.append(pre @ adjoint(module[k]))
    return columns, values


class DualExpectation:
    """Expectation from M1 onto lambda(A), evaluated by least squares.

    Values are prescribed on a spanning family of M1 and extended by a
    minimum-norm solve; the residual of every solve is checked, so an
    argument outside M1's span, or an inconsistent prescription, raises.
    """

    def __init__(self, bc: BasicConstruction, tol: Tolerances = DEFAULT_TOLERANCES):
        if bc.m1 is None:
            raise ArgumentError("dual expectation needs the M1 algebra; rebuild with m1")
        self.bc = bc
        self._tol = tol
        columns, values = _spanning_family(bc)
        system = np.stack([c.ravel() for c in columns], axis=1)
        u, s, vh = np.linalg.svd(system, full_matrices=False)
        rank = int(np.sum(s > tol.rank_tol * s[0]))
        self._u_conj = np.ascontiguousarray(np.conj(u[:, :rank]))
        self._sinv = 1.0 / s[:rank]
        self._vh_conj = np.ascontiguousarray(np.conj(vh[:rank]))
        self._system_t = np.ascontiguousarray(system.T)
        self._values = np.stack(values)
        self._sqrt_d = np.sqrt(bc.rep_dim)

        m1_values = self.apply_many(bc.m1.basis)
        lam_values = np.stack([bc.lambda_of(v) for v in m1_values])
        self.expectation = CondExpectation(
            inclusion=Inclusion(big=bc.m1, small=bc.lambda_algebra),
            values=lam_values,
            kind="custom",
        )
        _verify_expectation_axioms(self.expectation, tol)

    def apply(self, t: np.ndarray) -> np.ndarray:
        """Value on an element of M1, returned inside the original big algebra."""
        return self.apply_many(np.asarray(t, dtype=complex)[None])[0]

    def apply_many(self, stack: np.ndarray) -> np.ndarray:
        vecs = np.asarray(stack, dtype=complex).reshape(stack.shape[0], -1)
        coeffs = ((vecs @ self._u_conj) * self._sinv) @ self._vh_conj
        resid = np.linalg.norm(coeffs @ self._system_t - vecs, axis=1) / self._sqrt_d
        worst = float(resid.max()) if resid.size else 0.0
        if worst > self._tol.eq_tol:
            raise ArgumentError(
                f"element is not in the basic construction's span (residual {worst:.3e})"
            )
        return np.tensordot(coeffs, self._values, axes=(1, 0))

    def apply_lambda(self, t: np.ndarray) -> np.ndarray:
        return self.bc.lambda_of(self.apply(t))


def dual_expectation(
    bc: BasicConstruction, tol: Tolerances = DEFAULT_TOLERANCES
) -> DualExpectation:
    """Dual expectation of the construction, with its axioms verified."""
    return DualExpectation(bc, tol)


def theta(
    bc: BasicConstruction,
    x: np.ndarray,
    y: np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Rank-one module operator ``lambda(x) e lambda(y)*``."""
    a = bc.source.big
    for name, m in (("x", x), ("y", y)):
        member, resid = a.contains(m, tol)
        if not member:
            raise ArgumentError(f"{name} is not in the big algebra (residual {resid:.3e})")
    return bc.lambda_of(x) @ bc.e_proj @ adjoint(bc.lambda_of(y))


def intermediate_jones_projection(
    bc: BasicConstruction,
    ci: CompatibleIntermediate,
    tol: Tolerances = DEFAULT_TOLERANCES,
    module_basis: ModuleBasis | None = None,
) -> np.ndarray:
    """Jones projection of a compatible intermediate inside M1.

    Computed as ``sum_j lambda(mu_j) e lambda(mu_j)*`` over a quasi-basis
    of the restricted expectation; the result depends only on the
    compatible expectation, not on the quasi-basis chosen.
    """
    exp = bc.source
    if not (
        alg.same_span(ci.F.inclusion.big, exp.big, tol)
        and alg.same_span(ci.E_restricted.inclusion.small, exp.small, tol)
    ):
        raise ArgumentError("intermediate was built for a different inclusion")
    mb = module_basis if module_basis is not None else orthonormal_basis(ci.E_restricted, tol)
    e_p = sum(
        bc.lambda_of(mu) @ bc.e_proj @ adjoint(bc.lambda_of(mu)) for mu in mb.elements
    )
    proj_err = max(op_norm(e_p @ e_p - e_p), op_norm(adjoint(e_p) - e_p))
    if proj_err > tol.eq_tol:
        raise InvariantError(
            f"intermediate projection fails to be a projection ({proj_err:.3e})"
        )
    absorb = max(
        op_norm(e_p @ bc.e_proj - bc.e_proj), op_norm(bc.e_proj @ e_p - bc.e_proj)
    )
    if absorb > tol.eq_tol:
        raise InvariantError(f"e_P e = e = e e_P fails ({absorb:.3e})")
    action = max(
        float(np.linalg.norm(e_p @ bc.phi(x) - bc.phi(ci.F.apply(x))))
        for x in exp.big.basis
    )
    if action > tol.eq_tol:
        raise InvariantError(
            f"e_P does not act as the compatible expectation ({action:.3e})"
        )
    return e_p
