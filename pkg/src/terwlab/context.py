"""The dual Bose-Mesner algebra and the raising/flat/lowering operators.

Fixing a base vertex x splits the coordinate space by distance from x.
The dual idempotents E*_i are the diagonal 0/1 projectors onto those
distance shells, and the dual class matrices A*_i are diagonal with
entries n * (E_i)_{x, y}.  The class-1 adjacency A splits as R + F + L by
whether an edge increases, keeps, or decreases distance from x, and the
dual adjacency A* = A*_1 splits as R* + F* + L* through the idempotents.
These eight matrices generate everything downstream; the algebra they
generate is never materialized.

All operator matrices here are real and dense; A* and the E*_i are kept as
diagonal vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalCheckFailure, OrderingMissing
from .scheme import AssociationScheme, intersection_tensor
from .spectral import KREIN_ZERO_TOL, SpectralData, is_almost_bipartite

#: identity residual tolerance, scaled by the number of vertices
IDENTITY_TOL_PER_VERTEX = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": self.residual,
            "tol": self.tol,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class IdentityReport:
    checks: tuple

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def as_dict(self) -> dict:
        return {"checks": [c.as_dict() for c in self.checks], "all_passed": self.all_passed}


@dataclass(frozen=True)
class TerwContext:
    """Base-vertex data for one scheme: dual idempotents and split operators."""

    scheme: AssociationScheme
    spectral: SpectralData
    x: int
    dist: np.ndarray      # distance from x, i.e. class of (x, y) in P-order
    A: np.ndarray         # class-1 adjacency
    Astar: np.ndarray     # diagonal of the dual adjacency A*_1
    Estar: np.ndarray     # (D+1, n) rows are diagonals of E*_i
    Astar_all: np.ndarray # (D+1, n) rows are diagonals of A*_i
    R: np.ndarray
    F: np.ndarray
    L: np.ndarray
    Rstar: np.ndarray
    Fstar: np.ndarray
    Lstar: np.ndarray

    @property
    def n(self) -> int:
        return self.scheme.n

    @property
    def D(self) -> int:
        return self.scheme.D

    @property
    def E(self) -> np.ndarray:
        return self.spectral.E

    def estar_matrix(self, i: int) -> np.ndarray:
        return np.diag(self.Estar[i])


def build_context(scheme: AssociationScheme, spectral: SpectralData, x: int = 0) -> TerwContext:
    """Assemble the operators at base vertex x and verify their identities.

    Requires both polynomial orderings; raises :class:`OrderingMissing`
    otherwise and :class:`NumericalCheckFailure` if any defining identity
    exceeds tolerance.
    """
    if not spectral.is_q_polynomial:
        raise OrderingMissing("context needs a Q-polynomial ordering")
    n, D = spectral.n, spectral.D
    if not (0 <= x < n):
        raise ValueError(f"base vertex {x} out of range for {n} vertices")

    dist = spectral.relation[x]
    Estar = np.stack([(dist == i) for i in range(D + 1)]).astype(np.float64)
    Astar_all = n * spectral.E[:, x, :]
    if D >= 1:
        A = (spectral.relation == 1).astype(np.float64)
        Astar = Astar_all[1].copy()
    else:
        A = np.zeros((n, n))
        Astar = np.zeros(n)

    up = dist[:, None] == dist[None, :] + 1
    R = A * up
    F = A * (dist[:, None] == dist[None, :])
    L = A * up.T

    E = spectral.E
    Rstar = np.zeros((n, n))
    Fstar = np.zeros((n, n))
    Lstar = np.zeros((n, n))
    for i in range(D + 1):
        AsEi = Astar[:, None] * E[i]
        if i + 1 <= D:
            Rstar += E[i + 1] @ AsEi
        Fstar += E[i] @ AsEi
        if i - 1 >= 0:
            Lstar += E[i - 1] @ AsEi

    ctx = TerwContext(
        scheme=scheme, spectral=spectral, x=x, dist=dist, A=A, Astar=Astar,
        Estar=Estar, Astar_all=Astar_all, R=R, F=F, L=L,
        Rstar=Rstar, Fstar=Fstar, Lstar=Lstar,
    )
    report = verify_operator_identities(ctx)
    if not report.all_passed:
        failed = [c.name for c in report.checks if not c.passed]
        raise NumericalCheckFailure(f"operator identities failed: {failed}")
    return ctx


def _exchange_residual(M: np.ndarray, Estar: np.ndarray, shift: int) -> float:
    """max_i || M E*_i - E*_{i+shift} M ||_inf with out-of-range E* = 0."""
    D = Estar.shape[0] - 1
    worst = 0.0
    for i in range(D + 1):
        left = M * Estar[i][None, :]
        j = i + shift
        right = Estar[j][:, None] * M if 0 <= j <= D else 0.0
        worst = max(worst, float(np.abs(left - right).max()))
    return worst


def _dual_exchange_residual(M: np.ndarray, E: np.ndarray, shift: int) -> float:
    D = E.shape[0] - 1
    worst = 0.0
    for i in range(D + 1):
        left = M @ E[i]
        right = E[i + shift] @ M if 0 <= i + shift <= D else 0.0
        worst = max(worst, float(np.abs(left - right).max()))
    return worst


def verify_operator_identities(ctx: TerwContext, tol: float | None = None) -> IdentityReport:
    """Residuals of the defining operator identities at this base vertex.

    Covers the dual-idempotent axioms, the eigenvalue relations for A and
    A*, the three-way splits A = R + F + L and A* = R* + F* + L*, the
    transpose pairings, the idempotent-exchange rules, and (when the
    scheme is almost-bipartite) the collapse of the flat part to the far
    shell.
    """
    n, D = ctx.n, ctx.D
    if tol is None:
        tol = IDENTITY_TOL_PER_VERTEX * n
    sp = ctx.spectral
    E, Estar = sp.E, ctx.Estar
    checks = []

    def add(name, residual):
        checks.append(CheckResult(name=name, residual=float(residual), tol=tol))

    add("sum(Estar) = I", np.abs(Estar.sum(axis=0) - 1.0).max())
    add("Estar idempotent-orthogonal",
        max(np.abs(Estar[i] * Estar[j] - (i == j) * Estar[i]).max() for i in range(D + 1) for j in range(D + 1)))
    add("sum(Astar) = n Estar_0", np.abs(ctx.Astar_all.sum(axis=0) - n * Estar[0]).max())
    if D >= 1:
        add("Astar_0 = I", np.abs(ctx.Astar_all[0] - 1.0).max())
        add("A E_i = theta_i E_i",
            max(np.abs(ctx.A @ E[i] - sp.theta[i] * E[i]).max() for i in range(D + 1)))
        add("Astar Estar_i = theta*_i Estar_i",
            max(np.abs((ctx.Astar - sp.theta_star[i]) * Estar[i]).max() for i in range(D + 1)))
    add("A = R + F + L", np.abs(ctx.A - ctx.R - ctx.F - ctx.L).max())
    add("R = L^T", np.abs(ctx.R - ctx.L.T).max())
    add("Astar = Rstar + Fstar + Lstar",
        np.abs(np.diag(ctx.Astar) - ctx.Rstar - ctx.Fstar - ctx.Lstar).max())
    add("Rstar = Lstar^T", np.abs(ctx.Rstar - ctx.Lstar.T).max())
    add("R Estar_i = Estar_{i+1} R", _exchange_residual(ctx.R, Estar, +1))
    add("F Estar_i = Estar_i F", _exchange_residual(ctx.F, Estar, 0))
    add("L Estar_i = Estar_{i-1} L", _exchange_residual(ctx.L, Estar, -1))
    add("Rstar E_i = E_{i+1} Rstar", _dual_exchange_residual(ctx.Rstar, E, +1))
    add("Fstar E_i = E_i Fstar", _dual_exchange_residual(ctx.Fstar, E, 0))
    add("Lstar E_i = E_{i-1} Lstar", _dual_exchange_residual(ctx.Lstar, E, -1))

    if D >= 1 and is_almost_bipartite(sp.pp):
        add("F = Estar_D A Estar_D",
            np.abs(ctx.F - Estar[D][:, None] * ctx.A * Estar[D][None, :]).max())
        add("F Estar_i = 0 for i < D",
            max((np.abs(ctx.F * Estar[i][None, :]).max() for i in range(D)), default=0.0))
        add("Estar_i A Estar_i = 0 for i < D",
            max((np.abs(Estar[i][:, None] * ctx.A * Estar[i][None, :]).max() for i in range(D)), default=0.0))
        far = np.abs(Estar[D][:, None] * ctx.A * Estar[D][None, :]).max()
        add("Estar_D A Estar_D != 0", 0.0 if far > 0.5 else 1.0)

    return IdentityReport(checks=tuple(checks))


@dataclass(frozen=True)
class TriangleReport:
    """Outcome of the vanishing biconditionals for triple products.

    ``p_counterexamples`` lists (h, i, j) where p[h, i, j] = 0 disagrees
    with E*_i A_j E*_h = 0; ``q_counterexamples`` the Krein-side analogue.
    """

    p_counterexamples: tuple
    q_counterexamples: tuple
    checked: int

    @property
    def passed(self) -> bool:
        return not self.p_counterexamples and not self.q_counterexamples

    def as_dict(self) -> dict:
        return {
            "checked": self.checked,
            "p_counterexamples": [list(t) for t in self.p_counterexamples],
            "q_counterexamples": [list(t) for t in self.q_counterexamples],
            "passed": self.passed,
        }


def triangle_vanishing_check(ctx: TerwContext, zero_tol: float = 1e-7) -> TriangleReport:
    """Check that triple-product supports match the parameter supports.

    For every (h, i, j): p[h, i, j] = 0 iff E*_i A_j E*_h = 0, and
    q[h, i, j] = 0 iff E_i A*_j E_h = 0.  The matrix side is exact (0/1
    blocks); the Krein side compares squared Frobenius norms against
    ``zero_tol`` relative to the largest block, matching the relative
    threshold used for Q-ordering detection.
    """
    sp = ctx.spectral
    D = ctx.D
    p = intersection_tensor(ctx.scheme).p
    if sp.p_ordering != tuple(range(D + 1)):
        p = p[np.ix_(sp.p_ordering, sp.p_ordering, sp.p_ordering)]
    dist = ctx.dist

    bad_p = []
    shells = [np.flatnonzero(dist == i) for i in range(D + 1)]
    for j in range(D + 1):
        Aj = sp.relation == j
        for i in range(D + 1):
            for h in range(D + 1):
                block_nonzero = bool(Aj[np.ix_(shells[i], shells[h])].any())
                if (p[h, i, j] != 0) != block_nonzero:
                    bad_p.append((h, i, j))

    E = sp.E
    frob2 = np.empty((D + 1,) * 3)
    for j in range(D + 1):
        aj = ctx.Astar_all[j]
        for i in range(D + 1):
            for h in range(D + 1):
                # ||E_i A*_j E_h||_F^2 contracts to a weighted entrywise sum
                frob2[h, i, j] = np.einsum("yz,y,z,yz->", E[i], aj, aj, E[h])
    kscale = max(1.0, float(np.abs(sp.krein).max()))
    fscale = max(1.0, float(frob2.max()))
    bad_q = [
        (h, i, j)
        for h in range(D + 1)
        for i in range(D + 1)
        for j in range(D + 1)
        if (abs(sp.krein[h, i, j]) > KREIN_ZERO_TOL * kscale) != (frob2[h, i, j] > zero_tol * fscale)
    ]

    return TriangleReport(
        p_counterexamples=tuple(bad_p),
        q_counterexamples=tuple(bad_q),
        checked=2 * (D + 1) ** 3,
    )
