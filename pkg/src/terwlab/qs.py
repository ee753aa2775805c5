"""Two-parameter model of the eigenvalue sequences and its closed forms.

Away from the Odd graphs and folded cubes, both eigenvalue sequences of an
almost-bipartite P- and Q-polynomial scheme satisfy a common three-term
recurrence theta_{i-1} - beta theta_i + theta_{i+1} = const with
beta = q + 1/q for some q not 0 or +/-1, and fit the model

    theta_i   = theta_0 + h  (1 - q^i)(1 - s q^{i+1}) q^{-i}
    theta*_i  = theta*_0 + h* (1 - q^i)(1 - q^{i-2D-1}) q^{-i}

with h, h* nonzero.  In these coordinates every module intersection
number, and the multiplicity of every class of diameter >= D - 3, is a
rational expression in q and s.  All fitting is done in complex
arithmetic (q sits on the unit circle for the odd cycles); results that
are mathematically real are returned as floats after an imaginary-residual
gate.

The excluded families are recognized by their intersection arrays, which
determine them among distance-regular graphs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import generators
from .errors import BetaDegenerate, FitFailure, InvalidCell, OutOfRange
from .predictor import in_upsilon, tridiagonal
from .spectral import PPolyArray

#: residual gate for the recurrence and model fits (relative to |theta|)
FIT_TOL = 1e-8
#: margin by which the nonvanishing guards must hold
GUARD_TOL = 1e-6
#: largest imaginary part tolerated when casting model outputs to reals
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class ExclusionReport:
    is_odd_graph: bool
    is_folded_cube: bool

    @property
    def excluded(self) -> bool:
        return self.is_odd_graph or self.is_folded_cube

    @property
    def family(self) -> str | None:
        if self.is_odd_graph:
            return "odd_graph"
        if self.is_folded_cube:
            return "folded_cube"
        return None


def exclusion_check(pp: PPolyArray, n: int) -> ExclusionReport:
    """Match the intersection array against the two excluded families.

    Both families are determined by their intersection numbers, so an
    array comparison against a freshly generated instance of the same
    diameter suffices; a vertex-count mismatch short-circuits.
    """
    import math

    D = pp.D

    def same_array(scheme) -> bool:
        from .scheme import intersection_tensor
        from .spectral import intersection_array

        other = intersection_array(intersection_tensor(scheme))
        return (
            np.array_equal(pp.c, other.c)
            and np.array_equal(pp.a, other.a)
            and np.array_equal(pp.b, other.b)
        )

    is_odd = False
    if D >= 2 and n == math.comb(2 * D + 1, D):
        is_odd = same_array(generators.odd_graph(D))
    is_folded = False
    if D >= 2 and n == 1 << (2 * D):
        is_folded = same_array(generators.folded_cube(D))
    return ExclusionReport(is_odd_graph=is_odd, is_folded_cube=is_folded)


@dataclass(frozen=True)
class QSParams:
    """Fitted model parameters together with the fit diagnostics."""

    q: complex
    s: complex
    h: complex
    hstar: complex
    beta: float
    gamma: float
    gamma_star: float
    theta0: float
    theta_star0: float
    D: int
    fit_residual: float

    def as_dict(self) -> dict:
        return {
            "q": [self.q.real, self.q.imag],
            "s": [self.s.real, self.s.imag],
            "h": [self.h.real, self.h.imag],
            "hstar": [self.hstar.real, self.hstar.imag],
            "beta": self.beta,
            "gamma": self.gamma,
            "gamma_star": self.gamma_star,
            "fit_residual": self.fit_residual,
        }


def qs_theta(params: QSParams, i: int) -> complex:
    q, s, h = params.q, params.s, params.h
    return h * q ** (-i) * (1 + s * q ** (2 * i + 1))


def qs_theta_star(params: QSParams, i: int) -> complex:
    q, hs = params.q, params.hstar
    return params.theta_star0 + hs * (1 - q**i) * (1 - q ** (i - 2 * params.D - 1)) * q ** (-i)


def _real(value: complex, scale: float = 1.0) -> float:
    if abs(value.imag) > IMAG_TOL * max(1.0, scale):
        raise FitFailure(f"value {value} has a non-negligible imaginary part")
    return float(value.real)


def fit_qs(theta, theta_star, D: int) -> QSParams:
    """Fit (q, s, h, h*) to the eigenvalue sequences.

    beta, and the two recurrence constants, come from a joint least-squares
    over i = 1..D-1; q solves q + 1/q = beta with the root of modulus at
    least one (non-negative imaginary part on the unit circle).  h and
    h * s are linear in the primal model, h* in the dual one.  If the
    preferred root drives h to zero the reciprocal root is used instead.
    Every nonvanishing guard and both closed forms for h and h* are
    verified before returning.
    """
    th = np.asarray(theta, dtype=np.float64)
    ths = np.asarray(theta_star, dtype=np.float64)
    if D < 3:
        raise FitFailure(f"the model needs D >= 3, got D = {D}")
    scale = max(1.0, float(np.abs(th).max()), float(np.abs(ths).max()))

    rows, rhs = [], []
    for i in range(1, D):
        rows.append([th[i], 1.0, 0.0])
        rhs.append(th[i - 1] + th[i + 1])
        rows.append([ths[i], 0.0, 1.0])
        rhs.append(ths[i - 1] + ths[i + 1])
    rows = np.array(rows)
    rhs = np.array(rhs)
    (beta, gamma, gamma_star), *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    recur_residual = float(np.abs(rows @ [beta, gamma, gamma_star] - rhs).max())
    if recur_residual > FIT_TOL * scale:
        raise FitFailure(f"no common three-term recurrence: residual {recur_residual:.3e}")
    if abs(beta - 2.0) < GUARD_TOL or abs(beta + 2.0) < GUARD_TOL:
        raise BetaDegenerate(f"beta = {beta} admits no valid q")

    root = np.sqrt(complex(beta) ** 2 - 4)
    q1, q2 = (beta + root) / 2, (beta - root) / 2
    q = q1 if abs(q1) >= abs(q2) else q2
    if abs(abs(q) - 1.0) < 1e-9:
        q = q1 if q1.imag >= 0 else q2

    def fit_primal(q):
        M = np.empty((D, 2), dtype=complex)
        for i in range(1, D + 1):
            M[i - 1] = [(1 - q**i) * q ** (-i), -q * (1 - q**i)]
        sol, *_ = np.linalg.lstsq(M, (th[1:] - th[0]).astype(complex), rcond=None)
        return sol[0], sol[1]

    h, hs_prod = fit_primal(q)
    if abs(h) < 1e-10 * scale:
        q = 1 / q
        h, hs_prod = fit_primal(q)
    if abs(h) < 1e-10 * scale:
        raise FitFailure("h vanishes for both roots of the recurrence")
    s = hs_prod / h

    col = np.array([(1 - q**i) * (1 - q ** (i - 2 * D - 1)) * q ** (-i) for i in range(1, D + 1)])
    sol, *_ = np.linalg.lstsq(col[:, None], (ths[1:] - ths[0]).astype(complex), rcond=None)
    hstar = sol[0]

    params = QSParams(
        q=complex(q), s=complex(s), h=complex(h), hstar=complex(hstar),
        beta=float(beta), gamma=float(gamma), gamma_star=float(gamma_star),
        theta0=float(th[0]), theta_star0=float(ths[0]), D=D, fit_residual=0.0,
    )

    resid = max(
        max(abs(th[i] - th[0] - h * (1 - q**i) * (1 - s * q ** (i + 1)) * q ** (-i)) for i in range(D + 1)),
        max(abs(ths[i] - qs_theta_star(params, i)) for i in range(D + 1)),
        max(abs(th[i] - qs_theta(params, i)) for i in range(D + 1)),
    )
    if resid > FIT_TOL * scale:
        raise FitFailure(f"model residual {resid:.3e} exceeds tolerance")
    params = replace(params, fit_residual=float(resid))

    _verify_guards(params)
    _verify_closed_forms(params, scale)
    return params


def _verify_guards(params: QSParams) -> None:
    """Nonvanishing conditions implied by distinctness of the eigenvalues."""
    q, s, h, hstar, D = params.q, params.s, params.h, params.hstar, params.D
    if min(abs(q), abs(h), abs(hstar)) < GUARD_TOL:
        raise FitFailure("q, h, h* must be nonzero")
    for i in range(1, 2 * D + 1):
        if abs(q**i - 1) < GUARD_TOL:
            raise FitFailure(f"q^{i} = 1 violates the eigenvalue distinctness guard")
    for i in range(2, 2 * D + 1):
        if abs(s * q**i - 1) < GUARD_TOL:
            raise FitFailure(f"s q^{i} = 1 violates the eigenvalue distinctness guard")
    for i in range(1, 2 * D + 2):
        if abs(s * q**i + 1) < GUARD_TOL:
            raise FitFailure(f"s q^{i} = -1 violates the module nonvanishing guard")


def _verify_closed_forms(params: QSParams, scale: float) -> None:
    q, s, h, hstar, D = params.q, params.s, params.h, params.hstar, params.D
    h_closed = (q - q ** (2 * D)) / ((q - 1) * (1 + s * q ** (2 * D + 1)))
    hstar_closed = (
        q ** (2 * D + 1) * (1 - s * q**2) * (1 - s * q**3)
        / ((1 - q**2) * (1 - s**2 * q ** (2 * D + 4)))
    )
    if abs(h - h_closed) > FIT_TOL * max(1.0, abs(h)):
        raise FitFailure(f"h = {h} does not match its closed form {h_closed}")
    if abs(hstar - hstar_closed) > FIT_TOL * max(1.0, abs(hstar)):
        raise FitFailure(f"h* = {hstar} does not match its closed form {hstar_closed}")
    theta0_model = h * (1 + s * q)
    if abs(theta0_model - params.theta0) > FIT_TOL * scale:
        raise FitFailure("theta_0 does not match h (1 + s q)")


def _require_cell(t: int, d: int, D: int) -> int:
    if not in_upsilon(t, d, D):
        raise InvalidCell(f"(t, d) = ({t}, {d}) is not feasible for D = {D}")
    return D - d


def qs_predict_B(params: QSParams, t: int, d: int) -> np.ndarray:
    """Intersection matrix of the class (t, d) in the q, s coordinates."""
    q, s, h, D = params.q, params.s, params.h, params.D
    _require_cell(t, d, D)
    scale = abs(h) * max(1.0, abs(s))
    if d == 0:
        return np.array([[_real(h * q ** (-t) * (1 + s * q ** (2 * t + 1)), scale)]])
    c = np.zeros(d + 1)
    a = np.zeros(d + 1)
    b = np.zeros(d + 1)
    b[0] = _real(h * q ** (-t) * (s * q ** (2 * t + 1) + 1), scale)
    for i in range(1, d):
        c[i] = _real(
            h * (1 - q**i) * (1 + s * q ** (2 + 2 * d + 2 * t - i))
            / (q ** (t + i) * (q ** (2 * d - 2 * i + 1) - 1)),
            scale,
        )
        b[i] = _real(
            h * (q ** (2 * d + 1 - i) - 1) * (1 + s * q ** (2 * t + i + 1))
            / (q ** (t + i) * (q ** (2 * d - 2 * i + 1) - 1)),
            scale,
        )
    c[d] = _real(
        h * (1 - q**d) * (1 + s * q ** (2 + d + 2 * t)) / (q ** (t + d) * (q - 1)), scale
    )
    a[d] = _real(
        h * (q ** (d + 1) - 1) * (1 + s * q ** (1 + d + 2 * t)) / (q ** (t + d) * (q - 1)), scale
    )
    return tridiagonal(c, a, b)


def qs_predict_Bstar(params: QSParams, t: int, d: int) -> np.ndarray:
    """Dual intersection matrix of the class (t, d) in the q, s coordinates."""
    q, s, hstar, D = params.q, params.s, params.hstar, params.D
    r = _require_cell(t, d, D)
    theta_star_r = _real(qs_theta_star(params, r), abs(params.hstar))
    scale = abs(hstar) * max(1.0, abs(s)) ** 2
    if d == 0:
        return np.array([[theta_star_r]])
    cs = np.zeros(d + 1)
    bs = np.zeros(d + 1)
    bs[0] = _real(
        hstar * (q ** (2 * d) - 1) * (1 + s * q ** (2 * t + 1))
        / (q ** (D + d) * (1 - s * q ** (2 + 2 * t))),
        scale,
    )
    for i in range(1, d):
        cs[i] = _real(
            hstar * (1 - q ** (2 * i)) * (1 - s**2 * q ** (2 + 2 * d + 4 * t + 2 * i))
            / (q ** (D + d + 1) * (1 - s * q ** (2 * i + 2 * t)) * (1 - s * q ** (1 + 2 * i + 2 * t))),
            scale,
        )
        bs[i] = _real(
            hstar * (q ** (2 * d - 2 * i) - 1) * (1 - s**2 * q ** (2 + 2 * i + 4 * t))
            / (q ** (D + d - 2 * i) * (1 - s * q ** (2 + 2 * i + 2 * t)) * (1 - s * q ** (1 + 2 * i + 2 * t))),
            scale,
        )
    cs[d] = _real(
        hstar * (1 - q ** (2 * d)) * (1 + s * q ** (2 * t + 2 * d + 1))
        / (q ** (D + d + 1) * (1 - s * q ** (2 * t + 2 * d))),
        scale,
    )
    as_ = theta_star_r - bs - cs
    return tridiagonal(cs, as_, bs)


def qs_multiplicity(params: QSParams, t: int, d: int) -> float:
    """Closed-form multiplicity for cells of diameter at least D - 3."""
    q, s, D = params.q, params.s, params.D
    _require_cell(t, d, D)
    if d < D - 3:
        raise OutOfRange(f"no closed form for ({t}, {d}) with d < D - 3 = {D - 3}")
    if (t, d) == (0, D):
        value = complex(1.0)
    elif (t, d) == (1, D - 1):
        value = (q ** (2 * D) - 1) * (1 + s * q**2) / ((1 - q) * (1 + s * q ** (2 * D + 1)))
    elif (t, d) == (1, D - 2):
        value = (
            (q ** (2 * D) - q**2) * (1 + s * q) * (1 + s * q**2) * (s * q ** (2 * D + 2) - 1)
            / ((q**2 - 1) * (s**2 * q ** (2 * D + 4) - 1) * (1 + s * q ** (2 * D + 1)))
        )
    elif (t, d) == (2, D - 2):
        value = (
            (q ** (2 * D) - 1) * (q ** (2 * D) - q**2) * (1 + s * q) * (1 + s * q**4)
            * (s**2 * q ** (2 * D + 3) - 1)
            / (
                q * (q + 1) * (q - 1) ** 2 * (s**2 * q ** (2 * D + 4) - 1)
                * (1 + s * q ** (2 * D)) * (1 + s * q ** (2 * D + 1))
            )
        )
    elif (t, d) == (2, D - 3):
        value = (
            (q ** (2 * D) - 1) * (q ** (2 * D) - q**4) * (1 + s * q) * (1 + s * q**2)
            * (1 + s * q**4) * (1 - s * q ** (2 * D + 2))
            / (
                q * (q - 1) * (q**2 - 1) * (1 + s * q ** (2 * D + 1)) * (s * q ** (D + 3) - 1)
                * (q + s * q ** (2 * D)) * (1 + s * q ** (D + 3))
            )
        )
    elif (t, d) == (3, D - 3):
        value = (
            (q ** (2 * D) - 1) * (q ** (2 * D) - q**2) * (q ** (2 * D) - q**4)
            * (1 + s * q) * (1 + s * q**2) * (1 + s * q**6) * (1 - s**2 * q ** (2 * D + 3))
            / (
                q**2 * (q - 1) * (q**2 - 1) * (q**3 - 1) * (1 + s * q ** (D + 3))
                * (s * q ** (D + 3) - 1) * (q + s * q ** (2 * D)) * (1 + s * q ** (2 * D))
                * (1 + s * q ** (2 * D + 1))
            )
        )
    else:
        raise OutOfRange(f"no closed form matches cell ({t}, {d}) for D = {D}")
    return _real(value, max(1.0, abs(value)))
