"""Eigenmatrices, Krein parameters, and the P-/Q-polynomial orderings.

For a P-polynomial ordering the class-1 intersection numbers collapse to a
three-term array ``(c_i, a_i, b_i)``.  The eigenvalues ``theta_j`` of the
class-1 matrix are read off the (D+1) x (D+1) tridiagonal matrix with these
bands (symmetrized by a diagonal similarity, since ``b_i c_{i+1} > 0``),
then cross-validated against the spectrum of the full adjacency matrix.
The eigenvalue matrix P follows from the three-term recurrence

    c_{i+1} v_{i+1}(x) = (x - a_i) v_i(x) - b_{i-1} v_{i-1}(x),

multiplicities from column orthogonality, and the primitive idempotents
from Lagrange projectors in the class-1 matrix.  Krein parameters are the
structure constants of the idempotents under the entrywise product; a
Q-polynomial ordering is a relabeling of the idempotents under which they
show the same tridiagonal vanishing pattern.

All spectral quantities returned here are expressed in the detected
orderings: classes are relabeled by the first P-polynomial ordering found,
idempotents by the first Q-polynomial ordering (when one exists).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, NotPPolynomial, NumericalCheckFailure
from .scheme import AssociationScheme, IntersectionTensor, intersection_tensor, relabel_classes

#: spacing under which two eigenvalues count as equal (scaled by 1 + |theta|)
EIG_MATCH_TOL = 1e-8
#: relative threshold below which a Krein parameter counts as zero
KREIN_ZERO_TOL = 1e-7
#: max-norm tolerance for idempotency and basis-change residuals
IDEMPOTENT_TOL = 1e-9


@dataclass(frozen=True)
class PPolyArray:
    """Intersection array of a P-polynomial ordering.

    Stored with the boundary conventions materialized: ``c[0] = 0`` and
    ``b[D] = 0``, so all three vectors have length D+1.
    """

    c: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @property
    def D(self) -> int:
        return len(self.a) - 1

    @property
    def valency(self) -> int:
        return int(self.b[0]) if self.D >= 1 else 0


@dataclass(frozen=True)
class SpectralData:
    """Spectral package of a P-polynomial scheme, in detected orderings.

    ``theta[i]`` is the class-1 eigenvalue on the i-th idempotent (Q-order);
    ``theta_star[i]`` is the dual eigenvalue of the position-1 idempotent on
    class i (P-order).  ``ppstar`` holds the Krein analogue of the
    intersection array.  ``q_ordering``, ``theta_star`` and ``ppstar`` are
    ``None`` when the scheme admits no Q-polynomial ordering.
    """

    n: int
    D: int
    relation: np.ndarray
    p_ordering: tuple
    q_ordering: tuple | None
    pp: PPolyArray
    P: np.ndarray
    Q: np.ndarray | None
    m: np.ndarray
    krein: np.ndarray
    theta: np.ndarray
    theta_star: np.ndarray | None
    E: np.ndarray
    ppstar: PPolyArray | None

    @property
    def is_q_polynomial(self) -> bool:
        return self.q_ordering is not None

    @property
    def k(self) -> np.ndarray:
        """Valencies, recovered from the first column of P."""
        return self.P[:, 0]


def _pattern_ok(nonzero: np.ndarray, order) -> bool:
    """Tridiagonal-support test for a 3-index array under a relabeling.

    The entry at (h, i, j) must vanish when one position index exceeds the
    sum of the other two and must not vanish when it equals that sum.
    """
    D = nonzero.shape[0] - 1
    pos = np.empty(D + 1, dtype=np.int64)
    for newi, old in enumerate(order):
        pos[old] = newi
    for h in range(D + 1):
        for i in range(D + 1):
            for j in range(D + 1):
                ph, pi, pj = pos[h], pos[i], pos[j]
                hi = max(ph, pi, pj)
                rest = ph + pi + pj - hi
                if hi > rest and nonzero[h, i, j]:
                    return False
                if hi == rest and not nonzero[h, i, j]:
                    return False
    return True


def _greedy_orderings(nonzero: np.ndarray) -> list[tuple]:
    """All relabelings fixing 0 under which the support is tridiagonal.

    Candidates for position 1 are extended greedily: the next label must be
    the unique unused one linked to the previous by the position-1 label.
    Every completed candidate is verified in full.
    """
    D = nonzero.shape[0] - 1
    if D == 0:
        return [(0,)]
    found = []
    for c1 in range(1, D + 1):
        order = [0, c1]
        while len(order) < D + 1:
            prev = order[-1]
            nxt = [h for h in range(D + 1) if h not in order and nonzero[h, c1, prev]]
            if len(nxt) != 1:
                order = None
                break
            order.append(nxt[0])
        if order is not None and _pattern_ok(nonzero, order):
            found.append(tuple(order))
    return found


def detect_p_polynomial(tensor: IntersectionTensor) -> list[tuple]:
    """All class orderings under which the scheme is P-polynomial.

    Returns a (possibly empty) list of orderings; each is a tuple whose
    i-th entry is the original class placed at position i.
    """
    return _greedy_orderings(tensor.p != 0)


def detect_q_polynomial(
    krein: np.ndarray, tol: float = KREIN_ZERO_TOL, full_search: bool = False
) -> list[tuple]:
    """All idempotent orderings under which the Krein pattern is tridiagonal.

    Zero-detection uses ``tol`` relative to the largest Krein parameter.
    With ``full_search`` every permutation fixing position 0 is tried
    (intended for D <= 8); otherwise the greedy extension is used.
    """
    D = krein.shape[0] - 1
    nonzero = np.abs(krein) > tol * max(1.0, float(np.abs(krein).max()))
    if not full_search:
        return _greedy_orderings(nonzero)
    if D == 0:
        return [(0,)]
    found = []
    for perm in itertools.permutations(range(1, D + 1)):
        order = (0,) + perm
        if _pattern_ok(nonzero, order):
            found.append(order)
    return found


def intersection_array(tensor: IntersectionTensor) -> PPolyArray:
    """The (c, a, b) array of a tensor already in P-polynomial order."""
    p = tensor.p
    D = tensor.D
    c = np.array([0] + [p[i, 1, i - 1] for i in range(1, D + 1)], dtype=np.int64)
    a = np.array([p[i, 1, i] for i in range(D + 1)], dtype=np.int64)
    b = np.array([p[i, 1, i + 1] for i in range(D)] + [0], dtype=np.int64)
    return PPolyArray(c=c, a=a, b=b)


def is_almost_bipartite(pp: PPolyArray) -> bool:
    """True iff a_i = 0 for all i < D and a_D != 0."""
    D = pp.D
    return bool(np.all(pp.a[:D] == 0) and pp.a[D] != 0)


def _tridiagonal_eigenvalues(pp: PPolyArray) -> np.ndarray:
    """Eigenvalues of the class-1 intersection matrix, descending.

    The matrix with diagonal a, superdiagonal b, subdiagonal c is similar
    to a symmetric tridiagonal one with off-diagonal sqrt(b_i c_{i+1}).
    """
    a = pp.a.astype(np.float64)
    off = np.sqrt(pp.b[:-1].astype(np.float64) * pp.c[1:].astype(np.float64))
    M = np.diag(a)
    if len(off):
        M += np.diag(off, 1) + np.diag(off, -1)
    return np.linalg.eigvalsh(M)[::-1]


def _check_distinct(theta: np.ndarray) -> None:
    scale = 1.0 + float(np.abs(theta).max())
    gaps = np.abs(np.subtract.outer(theta, theta)) + np.eye(len(theta)) * scale
    if gaps.min() < EIG_MATCH_TOL * scale:
        i, j = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        raise DegenerateSpectrum(f"theta[{i}] and theta[{j}] agree within tolerance: {theta[i]}")


def _eigenmatrix(pp: PPolyArray, theta: np.ndarray) -> np.ndarray:
    """P[i, j] = v_i(theta_j) from the three-term recurrence."""
    D = pp.D
    P = np.zeros((D + 1, D + 1))
    P[0] = 1.0
    if D >= 1:
        P[1] = theta
    for i in range(1, D):
        P[i + 1] = ((theta - pp.a[i]) * P[i] - pp.b[i - 1] * P[i - 1]) / pp.c[i + 1]
    return P


def _idempotents(A1: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Primitive idempotents as Lagrange projectors in the class-1 matrix."""
    n = A1.shape[0]
    E = np.empty((len(theta), n, n))
    I = np.eye(n)
    for j in range(len(theta)):
        M = I
        for l in range(len(theta)):
            if l != j:
                M = M @ (A1 - theta[l] * I) / (theta[j] - theta[l])
        E[j] = M
    return E


def _krein_parameters(E: np.ndarray, m: np.ndarray, n: int) -> np.ndarray:
    """Structure constants of the idempotents under the entrywise product.

    q[h, i, j] = n * sum(E_i o E_j o E_h) / m_h, the coefficient of E_h in
    the expansion of E_i o E_j.
    """
    D1 = E.shape[0]
    krein = np.empty((D1, D1, D1))
    for i in range(D1):
        prod = E[i][None, :, :] * E
        krein[:, i, :] = np.tensordot(E, prod, axes=([1, 2], [1, 2])) * n / m[:, None]
    return krein


def _cross_validate_adjacency(A1: np.ndarray, theta: np.ndarray, m: np.ndarray) -> None:
    """Match the adjacency spectrum against the tridiagonal eigenvalues."""
    ev = np.linalg.eigvalsh(A1)
    scale = 1.0 + float(np.abs(theta).max())
    for j, th in enumerate(theta):
        hits = int(np.sum(np.abs(ev - th) < EIG_MATCH_TOL * scale * 10))
        if hits != int(round(m[j])):
            raise NumericalCheckFailure(
                f"adjacency spectrum disagrees with tridiagonal eigenvalue {th}: "
                f"multiplicity {hits} vs expected {m[j]}"
            )


def _trivial_spectral(scheme: AssociationScheme) -> SpectralData:
    one = np.ones((1, 1))
    pp = PPolyArray(c=np.array([0]), a=np.array([0]), b=np.array([0]))
    return SpectralData(
        n=1, D=0, relation=scheme.relation, p_ordering=(0,), q_ordering=(0,),
        pp=pp, P=one, Q=one, m=np.array([1], dtype=np.int64),
        krein=np.ones((1, 1, 1)), theta=np.zeros(1), theta_star=np.zeros(1),
        E=np.ones((1, 1, 1)), ppstar=PPolyArray(c=np.zeros(1), a=np.zeros(1), b=np.zeros(1)),
    )


def spectral_data(
    scheme: AssociationScheme,
    tensor: IntersectionTensor | None = None,
    p_ordering: tuple | None = None,
    full_q_search: bool = False,
) -> SpectralData:
    """Eigenvalues, idempotents, Krein parameters and orderings of a scheme.

    Detects a P-polynomial ordering (raising :class:`NotPPolynomial` if
    none exists, unless one is supplied), relabels the classes by it, and
    computes all spectral quantities.  If a Q-polynomial ordering is found
    the idempotents are relabeled by it as well; otherwise the dual data
    are left ``None`` and the idempotents stay sorted by descending
    eigenvalue.
    """
    if tensor is None:
        tensor = intersection_tensor(scheme)
    n, D = scheme.n, scheme.D

    if D == 0:
        return _trivial_spectral(scheme)

    if p_ordering is None:
        orderings = detect_p_polynomial(tensor)
        if not orderings:
            raise NotPPolynomial(f"no metric ordering among {D + 1} classes")
        p_ordering = orderings[0]
    scheme_p = relabel_classes(scheme, p_ordering)
    tensor_p = scheme_p.tensor
    pp = intersection_array(tensor_p)

    # eigenvalues: position 0 is the valency (Perron root), the rest initially
    # sorted descending; the Q-ordering detected below permutes them.
    theta = _tridiagonal_eigenvalues(pp)
    _check_distinct(theta)

    P = _eigenmatrix(pp, theta)
    k = tensor_p.k.astype(np.float64)
    m = n / np.sum(P * P / k[:, None], axis=0)
    m_int = np.rint(m).astype(np.int64)
    if np.abs(m - m_int).max() > 1e-6 or m_int.sum() != n:
        raise NumericalCheckFailure(f"multiplicities not integral: {m}")

    A1 = scheme_p.class_matrix(1)
    _cross_validate_adjacency(A1, theta, m)
    E = _idempotents(A1, theta)
    _verify_bose_mesner(E, P, scheme_p, n, D)

    krein = _krein_parameters(E, m.astype(np.float64), n)
    kscale = max(1.0, float(np.abs(krein).max()))
    if krein.min() < -1e-8 * kscale:
        raise NumericalCheckFailure(f"Krein parameter significantly negative: {krein.min()}")
    if np.abs(krein[0] - np.diag(m)).max() > 1e-6 * kscale:
        raise NumericalCheckFailure("krein[0] != diag(m)")

    q_orders = detect_q_polynomial(krein, full_search=full_q_search)
    q_ordering = q_orders[0] if q_orders else None

    theta_star = None
    Q = None
    ppstar = None
    if q_ordering is not None:
        sg = list(q_ordering)
        E = E[sg]
        m = m[sg]
        m_int = m_int[sg]
        theta = theta[sg]
        P = P[:, sg]
        krein = krein[np.ix_(sg, sg, sg)]
        Q = m[:, None] * P.T / k[None, :]
        theta_star = Q[1].copy()
        _check_distinct(theta_star)
        cs = np.array([0.0] + [krein[i, 1, i - 1] for i in range(1, D + 1)])
        as_ = np.array([krein[i, 1, i] for i in range(D + 1)])
        bs = np.array([krein[i, 1, i + 1] for i in range(D)] + [0.0])
        ppstar = PPolyArray(c=cs, a=as_, b=bs)
        if np.abs(P @ Q - n * np.eye(D + 1)).max() > 1e-8 * n:
            raise NumericalCheckFailure("P Q != n I")

    for arr in (E, P, krein, theta) + (() if Q is None else (Q, theta_star)):
        arr.flags.writeable = False
    return SpectralData(
        n=n, D=D, relation=scheme_p.relation,
        p_ordering=tuple(p_ordering), q_ordering=q_ordering,
        pp=pp, P=P, Q=Q, m=m_int, krein=krein,
        theta=theta, theta_star=theta_star, E=E, ppstar=ppstar,
    )


def _verify_bose_mesner(E, P, scheme_p, n, D):
    """Idempotency, completeness, and the change of basis to the classes."""
    worst = 0.0
    S = E.sum(axis=0)
    worst = max(worst, float(np.abs(S - np.eye(n)).max()))
    worst = max(worst, float(np.abs(E[0] - 1.0 / n).max()))
    for i in range(D + 1):
        for j in range(i, D + 1):
            prod = E[i] @ E[j]
            if i == j:
                prod = prod - E[i]
            worst = max(worst, float(np.abs(prod).max()))
    if worst > IDEMPOTENT_TOL:
        raise NumericalCheckFailure(f"idempotent residual {worst:.3e} exceeds {IDEMPOTENT_TOL}")
    # A_i = sum_j P[i, j] E_j for a spot-check class (the full identity for
    # i = 1 implies the rest through the recurrence).
    A1 = scheme_p.class_matrix(1)
    recon = np.tensordot(P[1], E, axes=(0, 0))
    if np.abs(recon - A1).max() > 1e-8 * max(1.0, float(np.abs(P[1]).max())):
        raise NumericalCheckFailure("class-1 matrix does not match its spectral expansion")
