"""Symmetric association schemes and their intersection numbers.

A scheme on a vertex set of size ``n`` with ``D`` classes is stored as an
``n x n`` integer matrix ``relation`` whose ``(x, y)`` entry is the class of
the ordered pair.  Validation checks the four defining axioms: the classes
partition the pairs, class 0 is the diagonal, every class is symmetric, and
the triple count

    p[h, i, j] = #{ z : relation[x, z] = i and relation[z, y] = j }

depends only on ``h = relation[x, y]``.  The triple counts are assembled by
multiplying the 0/1 class matrices; entries never exceed ``n``, so float64
products are exact and are stored back as integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AxiomViolation


@dataclass(frozen=True)
class IntersectionTensor:
    """Triple counts ``p[h, i, j]`` and valencies ``k[i] = p[0, i, i]``."""

    p: np.ndarray
    k: np.ndarray

    @property
    def D(self) -> int:
        return self.p.shape[0] - 1


@dataclass(frozen=True)
class AssociationScheme:
    """A validated symmetric association scheme."""

    n: int
    D: int
    relation: np.ndarray
    tensor: IntersectionTensor | None = field(default=None, compare=False, repr=False)

    def class_matrix(self, i: int) -> np.ndarray:
        """The 0/1 associate matrix of class ``i`` (float64)."""
        return (self.relation == i).astype(np.float64)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def validate_scheme(relation) -> AssociationScheme:
    """Check the scheme axioms for a relation table and return the scheme.

    The constancy of the triple counts (axiom iv) is checked exhaustively,
    and the resulting intersection tensor is attached to the returned
    scheme.  Raises :class:`AxiomViolation` with a witness on failure.
    """
    rel = np.asarray(relation)
    if rel.ndim != 2 or rel.shape[0] != rel.shape[1]:
        raise AxiomViolation("i", f"relation table must be square, got shape {rel.shape}")
    if not np.issubdtype(rel.dtype, np.integer):
        if not np.all(rel == np.rint(rel)):
            raise AxiomViolation("i", "relation table has non-integer entries")
    rel = rel.astype(np.int64)
    n = rel.shape[0]
    if n == 0:
        raise AxiomViolation("i", "vertex set is empty")

    D = int(rel.max(initial=0))
    if rel.min() < 0:
        xy = np.argwhere(rel < 0)[0]
        raise AxiomViolation("i", f"negative class at pair {tuple(xy)}", tuple(xy))
    counts = np.bincount(rel.ravel(), minlength=D + 1)
    if (counts == 0).any():
        empty = int(np.argwhere(counts == 0)[0][0])
        raise AxiomViolation("i", f"class {empty} is empty", empty)

    diag = np.diagonal(rel)
    if (diag != 0).any():
        x = int(np.argwhere(diag != 0)[0][0])
        raise AxiomViolation("ii", f"relation({x},{x}) = {rel[x, x]} != 0", (x, x))
    off_zero = (rel == 0) & ~np.eye(n, dtype=bool)
    if off_zero.any():
        xy = tuple(int(v) for v in np.argwhere(off_zero)[0])
        raise AxiomViolation("ii", f"class 0 holds the off-diagonal pair {xy}", xy)

    asym = rel != rel.T
    if asym.any():
        xy = tuple(int(v) for v in np.argwhere(asym)[0])
        raise AxiomViolation(
            "iii", f"relation{xy} = {rel[xy]} but the reverse pair has class {rel[xy[::-1]]}", xy
        )

    tensor = _triple_counts(rel, n, D)
    scheme = AssociationScheme(n=n, D=D, relation=_freeze(rel), tensor=tensor)
    return scheme


def _triple_counts(rel: np.ndarray, n: int, D: int) -> IntersectionTensor:
    """Compute p[h, i, j], raising on any axiom (iv) violation."""
    A = np.stack([(rel == i) for i in range(D + 1)]).astype(np.float64)
    masks = [rel == h for h in range(D + 1)]
    p = np.zeros((D + 1, D + 1, D + 1), dtype=np.int64)
    for i in range(D + 1):
        for j in range(D + 1):
            M = A[i] @ A[j]
            for h in range(D + 1):
                vals = M[masks[h]]
                v0 = vals.flat[0]
                if not np.all(vals == v0):
                    bad = int(np.argwhere(vals != v0)[0][0])
                    xy = tuple(int(w) for w in np.argwhere(masks[h])[bad])
                    raise AxiomViolation(
                        "iv",
                        f"count of z with classes ({i},{j}) is not constant on class {h}: "
                        f"pair {xy} sees {int(M[xy])}, expected {int(v0)}",
                        (h, i, j, xy),
                    )
                p[h, i, j] = int(v0)
    k = np.diagonal(p[0]).copy()
    return IntersectionTensor(p=_freeze(p), k=_freeze(k))


def intersection_tensor(scheme: AssociationScheme) -> IntersectionTensor:
    """The exact integer intersection tensor of a validated scheme."""
    if scheme.tensor is not None:
        return scheme.tensor
    return _triple_counts(scheme.relation, scheme.n, scheme.D)


def relabel_classes(scheme: AssociationScheme, ordering) -> AssociationScheme:
    """Rename classes so that position ``i`` of ``ordering`` becomes class ``i``."""
    ordering = tuple(int(i) for i in ordering)
    D = scheme.D
    if sorted(ordering) != list(range(D + 1)) or ordering[0] != 0:
        raise ValueError(f"not a class ordering fixing 0: {ordering}")
    pos = np.empty(D + 1, dtype=np.int64)
    for newi, old in enumerate(ordering):
        pos[old] = newi
    rel = pos[scheme.relation]
    tensor = None
    if scheme.tensor is not None:
        ix = np.ix_(ordering, ordering, ordering)
        p = scheme.tensor.p[ix]
        tensor = IntersectionTensor(p=_freeze(p.copy()), k=_freeze(np.diagonal(p[0]).copy()))
    return AssociationScheme(n=scheme.n, D=D, relation=_freeze(rel), tensor=tensor)
