import numpy as np
import pytest

import terwlab as tw
from terwlab.errors import BetaDegenerate, FitFailure, InvalidCell, OutOfRange
from terwlab.qs import qs_theta, qs_theta_star


@pytest.fixture(scope="module")
def params_c7(c7):
    sp = c7.spectral
    return tw.fit_qs(sp.theta, sp.theta_star, sp.D)


@pytest.fixture(scope="module")
def params_c9(c9):
    sp = c9.spectral
    return tw.fit_qs(sp.theta, sp.theta_star, sp.D)


def test_c7_fit_values(params_c7):
    # the 7-cycle eigenvalues are 2 cos(2 pi i / 7) = q^i + q^{-i}
    q = np.exp(2j * np.pi / 7)
    assert abs(params_c7.q - q) < 1e-10
    assert abs(params_c7.s - q**-1) < 1e-10
    assert abs(params_c7.h - 1) < 1e-10
    assert abs(params_c7.hstar - 1) < 1e-10
    assert params_c7.fit_residual < 1e-8
    assert params_c7.beta == pytest.approx(2 * np.cos(2 * np.pi / 7), abs=1e-12)


def test_c9_fit_values(params_c9):
    q = np.exp(2j * np.pi / 9)
    assert abs(params_c9.q - q) < 1e-10
    assert abs(params_c9.h - 1) < 1e-10
    assert params_c9.fit_residual < 1e-8


def test_round_trips(c7, c9, params_c7, params_c9):
    for bundle, params in ((c7, params_c7), (c9, params_c9)):
        sp = bundle.spectral
        for i in range(sp.D + 1):
            assert abs(qs_theta(params, i) - sp.theta[i]) < 1e-8
            assert abs(qs_theta_star(params, i) - sp.theta_star[i]) < 1e-8


def test_theta0_identity(params_c7):
    p = params_c7
    assert abs(p.h * (1 + p.s * p.q) - p.theta0) < 1e-10


def test_closed_form_h(params_c9):
    p, D = params_c9, params_c9.D
    h = (p.q - p.q ** (2 * D)) / ((p.q - 1) * (1 + p.s * p.q ** (2 * D + 1)))
    hstar = (
        p.q ** (2 * D + 1) * (1 - p.s * p.q**2) * (1 - p.s * p.q**3)
        / ((1 - p.q**2) * (1 - p.s**2 * p.q ** (2 * D + 4)))
    )
    assert abs(p.h - h) < 1e-8 * abs(h)
    assert abs(p.hstar - hstar) < 1e-8 * abs(hstar)


def test_guards_hold(params_c7, params_c9):
    for p in (params_c7, params_c9):
        D = p.D
        for i in range(1, 2 * D + 1):
            assert abs(p.q**i - 1) > 1e-6
        for i in range(2, 2 * D + 1):
            assert abs(p.s * p.q**i - 1) > 1e-6
        for i in range(1, 2 * D + 2):
            assert abs(p.s * p.q**i + 1) > 1e-6


def test_qs_forms_match_theta_forms(c7, c9, params_c7, params_c9):
    for bundle, params in ((c7, params_c7), (c9, params_c9)):
        sp = bundle.spectral
        for (t, d) in tw.build_upsilon(sp.D).cells:
            B_theta = tw.predict_B(t, d, sp.theta, sp.theta_star, sp.D)
            B_qs = tw.qs_predict_B(params, t, d)
            assert np.abs(B_theta - B_qs).max() < 1e-8, (bundle.name, t, d)
            Bs_theta = tw.predict_Bstar(t, d, sp.theta, sp.theta_star, sp.D)
            Bs_qs = tw.qs_predict_Bstar(params, t, d)
            assert np.abs(Bs_theta - Bs_qs).max() < 1e-8, (bundle.name, t, d)


def test_d0_qs_form(params_c7, c7):
    B = tw.qs_predict_B(params_c7, 3, 0)
    assert B.shape == (1, 1)
    assert B[0, 0] == pytest.approx(c7.spectral.theta[3], abs=1e-10)


def test_closed_form_multiplicities_c7(c7, params_c7):
    # D = 3 puts every cell within reach of the six closed forms
    for (t, d) in tw.build_upsilon(3).cells:
        closed = tw.qs_multiplicity(params_c7, t, d)
        assert closed == pytest.approx(c7.table.mult[(t, d)], abs=1e-6), (t, d)


def test_closed_form_multiplicities_c9(c9, params_c9):
    covered = [(t, d) for (t, d) in tw.build_upsilon(4).cells if d >= 1]
    assert len(covered) == 6
    for (t, d) in covered:
        closed = tw.qs_multiplicity(params_c9, t, d)
        assert closed == pytest.approx(c9.table.mult[(t, d)], abs=1e-6), (t, d)


def test_qs_multiplicity_out_of_range(params_c9):
    with pytest.raises(OutOfRange):
        tw.qs_multiplicity(params_c9, 2, 0)  # d = 0 < D - 3 = 1
    with pytest.raises(InvalidCell):
        tw.qs_multiplicity(params_c9, 0, 1)


def test_beta_degenerate_on_excluded_families(o4, fc7):
    # the excluded families sit exactly at beta = -2 and beta = +2
    for bundle in (o4, fc7):
        sp = bundle.spectral
        with pytest.raises(BetaDegenerate):
            tw.fit_qs(sp.theta, sp.theta_star, sp.D)


def test_fit_rejects_incompatible_sequences():
    theta = np.array([5.0, 2.0, -1.0, -4.5])  # no common recurrence with theta*
    theta_star = np.array([7.0, 1.0, -2.0, 3.0])
    with pytest.raises((FitFailure, BetaDegenerate)):
        tw.fit_qs(theta, theta_star, 3)


def test_exclusion_check(c7, c9, o4, fc7, fc9):
    for bundle, odd, folded in (
        (c7, False, False),
        (c9, False, False),
        (o4, True, False),
        (fc7, False, True),
        (fc9, False, True),
    ):
        report = tw.exclusion_check(bundle.spectral.pp, bundle.scheme.n)
        assert report.is_odd_graph == odd
        assert report.is_folded_cube == folded
        assert report.excluded == (odd or folded)


def test_exclusion_vertex_count_match_but_different_array():
    # the triangular scheme on 10 vertices shares the Petersen vertex count
    # but not its intersection array
    from itertools import combinations

    verts = list(combinations(range(5), 2))
    adj = [[j for j, w in enumerate(verts) if j != i and (set(v) & set(w))]
           for i, v in enumerate(verts)]
    scheme = tw.scheme_from_graph(adj)
    assert scheme.n == 10
    pp = tw.intersection_array(scheme.tensor)
    report = tw.exclusion_check(pp, scheme.n)
    assert not report.excluded
