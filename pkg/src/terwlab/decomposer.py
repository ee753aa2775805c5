"""Brute-force decomposition of the standard module into irreducible pieces.

The algebra generated by A and A* is closed under transposition, so the
coordinate space splits into an orthogonal sum of irreducible invariant
subspaces.  To find one such splitting numerically we draw a random
self-adjoint element

    S = alpha A + beta A* + gamma (A A* + A* A),

diagonalize it, and walk its eigenspaces: within one irreducible subspace
the eigenvalues of S are distinct, and isomorphic subspaces contribute
equal eigenvalues, so each eigenspace of S meets the span of the not-yet-
collected subspaces in vectors that each generate a single irreducible
piece.  Generation is closure under A and A* with re-orthogonalization;
a second draw with fresh coefficients must reproduce the census of
(dual endpoint, diameter) pairs, otherwise the run is rejected.

Each collected subspace is certified irreducible by regenerating it from
a single vector in its lowest distance shell: if W is spanned by the
closure of one vector of E*_r W and dim E*_r W = 1, no proper invariant
subspace can contain that vector.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .context import TerwContext
from .errors import DecompositionUnstable, NotThin, NumericalCheckFailure
from .predictor import tridiagonal

#: singular values below this fraction of the largest count as zero
RANK_TOL = 1e-8
#: relative gap above which consecutive eigenvalues of S start a new group
GROUP_GAP = 1e-6


@dataclass(frozen=True)
class IrreducibleModule:
    """One irreducible invariant subspace with its measured shape.

    ``r``/``t`` are the lowest distance shell (endpoint) and lowest
    eigenspace index (dual endpoint) meeting the subspace, ``d``/``dstar``
    the lengths of those supports.  ``measured_B`` and ``measured_Bstar``
    are filled by :func:`measure_module`.
    """

    basis: np.ndarray
    r: int
    t: int
    d: int
    dstar: int
    thin: bool
    dual_thin: bool
    measured_B: np.ndarray | None = None
    measured_Bstar: np.ndarray | None = None
    measurement_residual: float = 0.0

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def census(modules) -> dict:
    """Counts of modules by (dual endpoint, diameter)."""
    out: dict = {}
    for mod in modules:
        key = (mod.t, mod.d)
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


class _BadDraw(Exception):
    """One random draw produced an inconsistent splitting; redraw."""


def _closure(u: np.ndarray, generators, tol: float) -> np.ndarray:
    """Orthonormal basis of the smallest invariant subspace containing u.

    Generators are applied one at a time and the basis is extended after
    each, so candidate directions are always measured against the current
    span.  The acceptance threshold scales with the norm of the generator
    image, which keeps amplified starting noise below the gate.
    """
    B = (u / np.linalg.norm(u))[:, None]
    changed = True
    while changed:
        changed = False
        for G in generators:
            W = G @ B
            scale = max(1.0, float(np.linalg.norm(W)))
            W = W - B @ (B.T @ W)
            U, s, _ = np.linalg.svd(W, full_matrices=False)
            keep = s > tol * scale
            if keep.any():
                B, _ = np.linalg.qr(np.hstack([B, U[:, keep]]))
                changed = True
    return B


def _shell_dims(B: np.ndarray, projectors, diagonal: bool) -> list[int]:
    """rank(P_i B) for each projector, with a shared relative threshold."""
    svals = []
    for P in projectors:
        M = P[:, None] * B if diagonal else P @ B
        svals.append(np.linalg.svd(M, compute_uv=False))
    smax = max((s[0] for s in svals if s.size), default=1.0)
    return [int(np.sum(s > RANK_TOL * max(1.0, smax))) for s in svals]


def _support(dims: list[int], what: str) -> tuple[int, int]:
    """(first index, support length - 1); the support must be an interval."""
    nz = [i for i, v in enumerate(dims) if v > 0]
    if not nz:
        raise NumericalCheckFailure(f"module has empty {what} support")
    lo, hi = nz[0], nz[-1]
    if nz != list(range(lo, hi + 1)):
        raise NumericalCheckFailure(f"module {what} support {nz} is not an interval")
    return lo, hi - lo


def _classify(ctx: TerwContext, B: np.ndarray) -> IrreducibleModule:
    D = ctx.D
    star_dims = _shell_dims(B, [ctx.Estar[i] for i in range(D + 1)], diagonal=True)
    e_dims = _shell_dims(B, [ctx.E[i] for i in range(D + 1)], diagonal=False)
    r, d = _support(star_dims, "distance-shell")
    t, dstar = _support(e_dims, "eigenspace")
    return IrreducibleModule(
        basis=B, r=r, t=t, d=d, dstar=dstar,
        thin=max(star_dims) <= 1, dual_thin=max(e_dims) <= 1,
    )


def _certify_irreducible(ctx: TerwContext, B: np.ndarray, r: int, tol: float) -> bool:
    """Regenerate the subspace from one vector of its lowest shell.

    Works in the coordinates of B: compress A and A* to B, take the
    dominant direction of the E*_r slice, and close it up.  Equality of
    dimensions certifies there is no smaller invariant subspace through
    that vector, hence (with a one-dimensional slice) irreducibility.
    """
    k = B.shape[1]
    u, s, _ = np.linalg.svd(ctx.Estar[r][:, None] * B, full_matrices=False)
    if s.size == 0 or s[0] <= 0:
        return False
    v = B.T @ u[:, 0]
    Ac = B.T @ (ctx.A @ B)
    Asc = B.T @ (ctx.Astar[:, None] * B)
    Bc = _closure(v / np.linalg.norm(v), [Ac, Asc], tol)
    return Bc.shape[1] == k


def _invariance_residual(ctx: TerwContext, B: np.ndarray) -> float:
    resid = 0.0
    for G in (ctx.A, np.diag(ctx.Astar)):
        W = G @ B
        resid = max(resid, float(np.abs(W - B @ (B.T @ W)).max()))
    return resid


def _decompose_once(ctx: TerwContext, rng: np.random.Generator, tol: float) -> list:
    n, D = ctx.n, ctx.D
    alpha, beta, gamma = rng.standard_normal(3)
    Astar = np.diag(ctx.Astar)
    S = alpha * ctx.A + beta * Astar + gamma * (ctx.A @ Astar + Astar @ ctx.A)
    evals, evecs = np.linalg.eigh(S)
    spread = max(1.0, float(evals[-1] - evals[0]))

    groups = []
    start = 0
    for i in range(1, n + 1):
        if i == n or evals[i] - evals[i - 1] > GROUP_GAP * spread:
            groups.append((start, i))
            start = i

    covered = np.zeros((n, 0))
    modules = []
    for lo, hi in groups:
        eigenblock = evecs[:, lo:hi]
        U = eigenblock
        if covered.shape[1]:
            U = U - covered @ (covered.T @ U)
        u_basis, s, _ = np.linalg.svd(U, full_matrices=False)
        fresh = u_basis[:, s > 0.5]
        for col in range(fresh.shape[1]):
            # re-project onto the clean eigenspace: the covered basis
            # carries O(1e-10) drift that closure would amplify
            u = eigenblock @ (eigenblock.T @ fresh[:, col])
            B = _closure(u, [ctx.A, Astar], tol)
            if covered.shape[1]:
                overlap = float(np.abs(covered.T @ B).max())
                if overlap > 1e-6:
                    raise _BadDraw(f"closure overlaps collected modules by {overlap:.3e}")
                B = B - covered @ (covered.T @ B)
                B, _ = np.linalg.qr(B)
            try:
                mod = _classify(ctx, B)
            except NumericalCheckFailure as exc:
                raise _BadDraw(str(exc)) from exc
            if not _certify_irreducible(ctx, B, mod.r, tol):
                raise _BadDraw(f"subspace of dim {B.shape[1]} not regenerated from its lowest shell")
            resid = _invariance_residual(ctx, B)
            if resid > tol * n:
                raise _BadDraw(f"invariance residual {resid:.3e} exceeds {tol * n:.3e}")
            modules.append(mod)
            covered = np.hstack([covered, B])

    total = sum(m.dim for m in modules)
    if total != n:
        raise _BadDraw(f"collected dimension {total} != {n}")
    return modules


def decompose(
    ctx: TerwContext, tol: float = RANK_TOL, seed: int = 0, draws: int = 2, max_attempts: int = 8
) -> list:
    """Split the coordinate space into irreducible invariant subspaces.

    Runs the random-element decomposition until ``draws`` draws with
    independent coefficients succeed, redrawing when a draw is internally
    inconsistent (eigenvalue collisions across module classes make a draw
    unsplittable; fresh coefficients resolve it).  All successful draws
    must agree on the census; the first draw's modules are returned,
    sorted by (t, d, r).  For the one-vertex scheme the single trivial
    module is returned directly.
    """
    n = ctx.n
    if n == 1:
        B = np.ones((1, 1))
        return [IrreducibleModule(basis=B, r=0, t=0, d=0, dstar=0, thin=True, dual_thin=True)]
    rng = np.random.default_rng(seed)
    runs = []
    failures = []
    attempts = 0
    while len(runs) < max(1, draws) and attempts < max_attempts:
        attempts += 1
        try:
            runs.append(_decompose_once(ctx, rng, tol))
        except _BadDraw as exc:
            failures.append(str(exc))
    if len(runs) < max(1, draws):
        raise DecompositionUnstable(
            f"only {len(runs)}/{draws} draws succeeded in {attempts} attempts: {failures}"
        )
    censuses = [census(mods) for mods in runs]
    if any(c != censuses[0] for c in censuses[1:]):
        raise DecompositionUnstable(f"census disagrees across draws: {censuses}")
    modules = runs[0]
    order = sorted(range(len(modules)), key=lambda i: (modules[i].t, modules[i].d, modules[i].r, i))
    return [modules[i] for i in order]


def _principal_vector(M: np.ndarray) -> np.ndarray:
    """Unit vector spanning the dominant direction of M's column space.

    The sign is fixed by making the first coordinate of visible size
    positive, for reproducible reports.
    """
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    v = u[:, 0]
    nz = np.flatnonzero(np.abs(v) > 1e-8)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v


def measure_module(ctx: TerwContext, mod: IrreducibleModule) -> IrreducibleModule:
    """Read off the action coefficients of R, F, L and R*, F*, L*.

    Picks the unit vector spanning E_t W, splits it over the distance
    shells, and extracts c_i(W), a_i(W), b_i(W) as the coefficients of the
    raising/flat/lowering actions along that ladder; dually for the
    starred numbers from the vector spanning E*_r W.  Raises
    :class:`NotThin` when either family of slices has dimension above 1.
    Returns a copy of the module with the measured tridiagonal matrices
    and the worst coefficient-equation residual attached.
    """
    if not (mod.thin and mod.dual_thin):
        raise NotThin(f"module with (t, d) = ({mod.t}, {mod.d}) is not thin/dual thin")
    B, r, t, d = mod.basis, mod.r, mod.t, mod.d
    resid = 0.0

    v = _principal_vector(ctx.E[t] @ B)
    shells = [ctx.Estar[r + i] * v for i in range(d + 1)]
    norms2 = [float(w @ w) for w in shells]
    if min(norms2) <= 0:
        raise NumericalCheckFailure("ladder vector vanishes on a shell inside the support")

    def coeff(image, target_idx):
        nonlocal resid
        w = shells[target_idx]
        val = float(image @ w) / norms2[target_idx]
        resid = max(resid, float(np.linalg.norm(image - val * w)))
        return val

    c = np.zeros(d + 1)
    a = np.zeros(d + 1)
    b = np.zeros(d + 1)
    for i in range(1, d + 1):
        c[i] = coeff(ctx.R @ shells[i - 1], i)
    for i in range(d + 1):
        a[i] = coeff(ctx.F @ shells[i], i)
    for i in range(d):
        b[i] = coeff(ctx.L @ shells[i + 1], i)
    measured_B = tridiagonal(c, a, b)

    vstar = _principal_vector(ctx.Estar[r][:, None] * B)
    duals = [ctx.E[t + i] @ vstar for i in range(d + 1)]
    dnorms2 = [float(w @ w) for w in duals]
    if min(dnorms2) <= 0:
        raise NumericalCheckFailure("dual ladder vector vanishes inside the support")

    def dcoeff(image, target_idx):
        nonlocal resid
        w = duals[target_idx]
        val = float(image @ w) / dnorms2[target_idx]
        resid = max(resid, float(np.linalg.norm(image - val * w)))
        return val

    cs = np.zeros(d + 1)
    as_ = np.zeros(d + 1)
    bs = np.zeros(d + 1)
    for i in range(1, d + 1):
        cs[i] = dcoeff(ctx.Rstar @ duals[i - 1], i)
    for i in range(d + 1):
        as_[i] = dcoeff(ctx.Fstar @ duals[i], i)
    for i in range(d):
        bs[i] = dcoeff(ctx.Lstar @ duals[i + 1], i)
    measured_Bstar = tridiagonal(cs, as_, bs)

    return replace(
        mod,
        measured_B=measured_B,
        measured_Bstar=measured_Bstar,
        measurement_residual=resid,
    )


def measure_all(ctx: TerwContext, modules) -> list:
    return [measure_module(ctx, m) for m in modules]


@dataclass(frozen=True)
class NormLadderReport:
    """Norm-balance identities and positivity of consecutive products."""

    primal_residual: float
    dual_residual: float
    products: tuple
    dual_products: tuple

    @property
    def all_positive(self) -> bool:
        return all(p > 0 for p in self.products) and all(p > 0 for p in self.dual_products)


def norm_ladder_check(ctx: TerwContext, mod: IrreducibleModule) -> NormLadderReport:
    """Verify c_i(W) ||E*_{r+i} v||^2 = b_{i-1}(W) ||E*_{r+i-1} v||^2 and
    its dual, and collect the products b_{i-1}(W) c_i(W) for i = 1..d."""
    if mod.measured_B is None:
        mod = measure_module(ctx, mod)
    B, r, t, d = mod.basis, mod.r, mod.t, mod.d
    c = np.concatenate([[0.0], np.diagonal(mod.measured_B, -1)]) if d else np.zeros(1)
    b = np.concatenate([np.diagonal(mod.measured_B, 1), [0.0]]) if d else np.zeros(1)
    cs = np.concatenate([[0.0], np.diagonal(mod.measured_Bstar, -1)]) if d else np.zeros(1)
    bs = np.concatenate([np.diagonal(mod.measured_Bstar, 1), [0.0]]) if d else np.zeros(1)

    v = _principal_vector(ctx.E[t] @ B)
    nrm2 = np.array([float(np.sum((ctx.Estar[r + i] * v) ** 2)) for i in range(d + 1)])
    vstar = _principal_vector(ctx.Estar[r][:, None] * B)
    dnrm2 = np.array([float(np.sum((ctx.E[t + i] @ vstar) ** 2)) for i in range(d + 1)])

    primal = max(
        (abs(c[i] * nrm2[i] - b[i - 1] * nrm2[i - 1]) for i in range(1, d + 1)), default=0.0
    )
    dual = max(
        (abs(cs[i] * dnrm2[i] - bs[i - 1] * dnrm2[i - 1]) for i in range(1, d + 1)), default=0.0
    )
    return NormLadderReport(
        primal_residual=primal,
        dual_residual=dual,
        products=tuple(b[i - 1] * c[i] for i in range(1, d + 1)),
        dual_products=tuple(bs[i - 1] * cs[i] for i in range(1, d + 1)),
    )
