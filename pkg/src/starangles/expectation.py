"""Conditional expectations on inclusions of matrix *-algebras.

The default expectation is trace preserving: the orthogonal projection of
the big algebra onto the small one for the normalized Hilbert-Schmidt
inner product, which is a faithful conditional expectation because the
reference state is the normalized matrix trace. Custom expectations are
accepted as explicit basis-value tables and validated on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import Inclusion, StarAlgebra, spans_subset
from .errors import (
    ArgumentError,
    ConstructionError,
    ContainmentError,
    IncompatibilityError,
)
from .linalg import DEFAULT_TOLERANCES, Tolerances, adjoint, op_norm


@dataclass(frozen=True)
class CondExpectation:
    """Linear idempotent bimodule map ``E: A -> B`` packaged with its inclusion.

    ``values[s]`` is the image of the s-th basis element of the big
    algebra; applying ``E`` decomposes the argument in that basis.
    """

    inclusion: Inclusion
    values: np.ndarray = field(repr=False)
    kind: str = "trace_preserving"

    @property
    def big(self) -> StarAlgebra:
        return self.inclusion.big

    @property
    def small(self) -> StarAlgebra:
        return self.inclusion.small

    def apply(self, x: np.ndarray) -> np.ndarray:
        coeffs = self.big.coords(x)
        return np.tensordot(coeffs, self.values, axes=(0, 0))

    def apply_many(self, stack: np.ndarray) -> np.ndarray:
        coeffs = self.big.coords_many(stack)
        return np.tensordot(coeffs, self.values, axes=(1, 0))

    def coefficient_matrix(self) -> np.ndarray:
        """Matrix of ``E`` on the big algebra's coordinates, column-major."""
        return self.big.coords_many(self.values).T

    def state_gram(self) -> np.ndarray:
        """Gram matrix ``G[s, t] = tr(E(a_s* a_t)) / n`` of the induced state."""
        a = self.big
        if self.kind == "trace_preserving":
            return np.eye(a.dim)
        gram = np.zeros((a.dim, a.dim), dtype=complex)
        star = np.conj(np.transpose(a.basis, (0, 2, 1)))
        for s in range(a.dim):
            products = star[s] @ a.basis
            images = self.apply_many(products)
            gram[s] = np.trace(images, axis1=1, axis2=2) / a.ambient_dim
        return gram


def _verify_expectation_axioms(exp: CondExpectation, tol: Tolerances = DEFAULT_TOLERANCES):
    """Raise ConstructionError naming the first violated axiom."""
    a, b = exp.big, exp.small
    if exp.values.shape != (a.dim, a.ambient_dim, a.ambient_dim):
        raise ArgumentError("value table shape does not match the big algebra")
    range_resid = b._max_span_residual(exp.values)
    if range_resid > tol.eq_tol:
        raise ConstructionError("range containment", range_resid)
    fix_resid = float(linalg.op_norms(exp.apply_many(b.basis) - b.basis).max())
    if fix_resid > tol.eq_tol:
        raise ConstructionError("fixes the small algebra", fix_resid)
    unit_resid = op_norm(exp.apply(a.unit) - a.unit)
    if unit_resid > tol.eq_tol:
        raise ConstructionError("unitality", unit_resid)
    idem = float(linalg.op_norms(exp.apply_many(exp.values) - exp.values).max())
    if idem > tol.eq_tol:
        raise ConstructionError("idempotency", idem)
    star_basis = np.conj(np.transpose(a.basis, (0, 2, 1)))
    star_values = np.conj(np.transpose(exp.values, (0, 2, 1)))
    star = float(linalg.op_norms(exp.apply_many(star_basis) - star_values).max())
    if star > tol.eq_tol:
        raise ConstructionError("adjoint preservation", star)
    bimod = _bimodule_violation(exp, tol)
    if bimod > tol.eq_tol:
        raise ConstructionError("bimodule property", bimod)


def _bimodule_triples(exp: CondExpectation):
    a, b = exp.big, exp.small
    # the triple check scales with dim(B)^2 dim(A); sample harder on big algebras
    cap = 512 if a.dim > 256 else 4096
    total = b.dim * a.dim * b.dim
    if total <= cap:
        idx = [
            (i, s, j) for i in range(b.dim) for s in range(a.dim) for j in range(b.dim)
        ]
        return (
            np.array([i for i, _, _ in idx]),
            np.array([s for _, s, _ in idx]),
            np.array([j for _, _, j in idx]),
        )
    rng = np.random.default_rng(20_260_402)
    return (
        rng.integers(0, b.dim, cap),
        rng.integers(0, a.dim, cap),
        rng.integers(0, b.dim, cap),
    )


def _bimodule_violation(exp: CondExpectation, tol: Tolerances) -> float:
    a, b = exp.big, exp.small
    lefts, mids, rights = _bimodule_triples(exp)
    worst = 0.0
    chunk = 1024
    for start in range(0, len(lefts), chunk):
        i = lefts[start : start + chunk]
        s = mids[start : start + chunk]
        j = rights[start : start + chunk]
        sandwiched = b.basis[i] @ a.basis[s] @ b.basis[j]
        expected = b.basis[i] @ exp.values[s] @ b.basis[j]
        diff = exp.apply_many(sandwiched) - expected
        worst = max(worst, float(linalg.op_norms(diff).max()))
    return worst


def trace_preserving(inc: Inclusion, tol: Tolerances = DEFAULT_TOLERANCES) -> CondExpectation:
    """Trace-preserving expectation: HS-orthogonal projection onto the span."""
    overlaps = inc.small.coords_many(inc.big.basis)  # (dimA, dimB)
    values = np.tensordot(overlaps, inc.small.basis, axes=(1, 0))
    exp = CondExpectation(inclusion=inc, values=values, kind="trace_preserving")
    _verify_expectation_axioms(exp, tol)
    return exp


def expectation_from_values(
    inc: Inclusion,
    values: Sequence[np.ndarray] | np.ndarray,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CondExpectation:
    """Custom expectation from its values on the big algebra's basis."""
    stack = np.asarray(values, dtype=complex)
    exp = CondExpectation(inclusion=inc, values=stack, kind="custom")
    _verify_expectation_axioms(exp, tol)
    report = verify(exp, samples=16, seed=5, tol=tol)
    if report.positivity_violation > tol.eq_tol:
        raise ConstructionError("positivity", report.positivity_violation)
    return exp


@dataclass(frozen=True)
class ExpectationReport:
    """Maximal violations found while checking an expectation's axioms."""

    idempotency: float
    unitality: float
    bimodule: float
    range_residual: float
    fixes_small: float
    adjoint_preservation: float
    positivity_violation: float
    faithfulness_floor: float
    hs_self_adjointness: float
    samples: int
    passed: bool


def verify(
    exp: CondExpectation,
    samples: int = 32,
    seed: int = 7,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ExpectationReport:
    """Diagnostic report on an expectation; never raises."""
    a, b = exp.big, exp.small
    idem = float(linalg.op_norms(exp.apply_many(exp.values) - exp.values).max())
    unital = op_norm(exp.apply(a.unit) - a.unit)
    bimod = _bimodule_violation(exp, tol)
    range_resid = b._max_span_residual(exp.values)
    fixes = float(linalg.op_norms(exp.apply_many(b.basis) - b.basis).max())
    star_basis = np.conj(np.transpose(a.basis, (0, 2, 1)))
    star_values = np.conj(np.transpose(exp.values, (0, 2, 1)))
    star = float(linalg.op_norms(exp.apply_many(star_basis) - star_values).max())
    rng = np.random.default_rng(seed)
    positivity = 0.0
    faithful_floor = np.inf
    for _ in range(max(1, samples)):
        x = a.random_element(rng)
        scale = max(op_norm(x), 1e-30)
        image = exp.apply(adjoint(x) @ x) / scale**2
        image = (image + adjoint(image)) / 2.0
        eigs = np.linalg.eigvalsh(image)
        positivity = max(positivity, float(-eigs[0]))
        faithful_floor = min(faithful_floor, float(eigs[-1]))
    values_flat = exp.values.reshape(a.dim, -1)
    lhs = np.conj(values_flat) @ a._flat.T / a.ambient_dim
    rhs = np.conj(a._flat) @ values_flat.T / a.ambient_dim
    hs_sym = float(np.abs(lhs - rhs).max())
    passed = (
        max(idem, unital, bimod, range_resid, fixes, star) < tol.eq_tol
        and positivity < tol.eq_tol
        and faithful_floor > tol.rank_tol
    )
    return ExpectationReport(
        idempotency=idem,
        unitality=unital,
        bimodule=bimod,
        range_residual=range_resid,
        fixes_small=fixes,
        adjoint_preservation=star,
        positivity_violation=positivity,
        faithfulness_floor=float(faithful_floor),
        hs_self_adjointness=hs_sym,
        samples=samples,
        passed=passed,
    )


@dataclass(frozen=True)
class CompatibleIntermediate:
    """Intermediate ``P`` with ``E_restricted o F = E`` (compatibility)."""

    P: StarAlgebra
    F: CondExpectation
    E_restricted: CondExpectation


def make_compatible(
    exp: CondExpectation,
    intermediate: StarAlgebra,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CompatibleIntermediate:
    """Equip an intermediate subalgebra with its compatible expectation.

    The candidate ``F`` is the orthogonal projection of the big algebra
    onto the intermediate for the state induced by the expectation (for a
    trace-preserving expectation this is again the trace-preserving one);
    any compatible expectation must agree with it, so failure of the
    verification means the intermediate is not compatible.
    """
    a, b = exp.big, exp.small
    p = intermediate
    if not (spans_subset(b, p, tol) and spans_subset(p, a, tol)):
        raise ContainmentError("intermediate does not sit between the inclusion's algebras")

    restricted_values = np.stack([exp.apply(x) for x in p.basis])
    restricted = CondExpectation(
        inclusion=Inclusion(big=p, small=b), values=restricted_values, kind=exp.kind
    )
    _verify_expectation_axioms(restricted, tol)

    if exp.kind == "trace_preserving":
        overlaps = p.coords_many(a.basis)
        f_values = np.tensordot(overlaps, p.basis, axes=(1, 0))
    else:
        p_star = np.conj(np.transpose(p.basis, (0, 2, 1)))
        gram = np.zeros((p.dim, p.dim), dtype=complex)
        rhs = np.zeros((p.dim, a.dim), dtype=complex)
        for t in range(p.dim):
            prods_p = p_star[t] @ p.basis
            gram[t] = np.trace(exp.apply_many(prods_p), axis1=1, axis2=2) / a.ambient_dim
            prods_a = p_star[t] @ a.basis
            rhs[t] = np.trace(exp.apply_many(prods_a), axis1=1, axis2=2) / a.ambient_dim
        eigs = np.linalg.eigvalsh((gram + adjoint(gram)) / 2.0)
        if eigs[0] <= tol.rank_tol:
            raise IncompatibilityError(
                "state degenerates on the intermediate", float(eigs[0])
            )
        coeffs = np.linalg.solve(gram, rhs)  # (dimP, dimA)
        f_values = np.tensordot(coeffs.T, p.basis, axes=(1, 0))
    f = CondExpectation(inclusion=Inclusion(big=a, small=p), values=f_values, kind=exp.kind)
    try:
        _verify_expectation_axioms(f, tol)
    except ConstructionError as err:
        raise IncompatibilityError(
            f"projection onto the intermediate is not an expectation ({err.prop})",
            err.residual,
        ) from err

    compat = max(
        op_norm(restricted.apply(f.values[s]) - exp.values[s]) for s in range(a.dim)
    )
    if compat >= tol.eq_tol:
        raise IncompatibilityError("tower composition does not reproduce E", compat)
    return CompatibleIntermediate(P=p, F=f, E_restricted=restricted)


def ind_p_estimate(
    exp: CondExpectation,
    trials: int = 8,
    seed: int = 0,
    steps: int = 300,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """Lower-bound estimate of the probabilistic index by stochastic ascent.

    For positive ``x`` the best constant ``gamma`` with
    ``gamma E(x) >= x`` is the top eigenvalue of
    ``E(x)^{-1/2} x E(x)^{-1/2}`` (pseudo-inverse square root), so the
    probabilistic index is the supremum of that quantity over the positive
    cone. Each trial starts from a random positive element and hill-climbs
    with multiplicative perturbations ``x -> w x w*``; the running best
    over trials is returned. The result is a lower bound up to ascent
    quality; it is exact only if the ascent finds the optimizer. The
    algorithm is this artifact's own device, not a published procedure.
    """
    if trials < 1:
        raise ArgumentError("at least one trial is required")
    a = exp.big

    def rate(x: np.ndarray) -> float:
        # best gamma with gamma E(x) >= x, on the support of E(x); the
        # relative cutoff caps the conditioning so rounding stays below
        # the estimator's useful resolution
        x = (x + adjoint(x)) / 2.0
        h = exp.apply(x)
        w, v = np.linalg.eigh((h + adjoint(h)) / 2.0)
        cut = max(tol.rank_tol, 1e-7 * float(w[-1])) if w.size else tol.rank_tol
        inv_root = np.where(w > cut, 1.0 / np.sqrt(np.where(w > cut, w, 1.0)), 0.0)
        root = (v * inv_root) @ adjoint(v)
        m = root @ x @ root
        return float(np.linalg.eigvalsh((m + adjoint(m)) / 2.0)[-1])

    best = 1.0  # the unit always achieves gamma = 1
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        y = a.random_element(rng)
        x = y @ adjoint(y)
        x /= max(np.trace(x).real, 1e-30)
        gamma = rate(x)
        epsilon = 0.4
        for _ in range(steps):
            w = a.unit + epsilon * a.random_element(rng)
            cand = w @ x @ adjoint(w)
            cand /= max(np.trace(cand).real, 1e-30)
            cand_rate = rate(cand)
            if cand_rate > gamma:
                x, gamma = cand, cand_rate
            else:
                epsilon = max(epsilon * 0.985, 0.02)
        best = max(best, gamma)
    return best
