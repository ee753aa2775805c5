from itertools import combinations

import numpy as np
import pytest

import terwlab as tw
from terwlab.errors import OrderingMissing


def test_estar_traces_are_valencies(c7):
    # shell sizes around any vertex equal the valencies
    traces = c7.ctx.Estar.sum(axis=1)
    assert traces.tolist() == [1, 2, 2, 2]


def test_rfl_partition_exact(all_bundles):
    for bundle in all_bundles:
        ctx = bundle.ctx
        assert np.array_equal(ctx.A, ctx.R + ctx.F + ctx.L)
        assert np.array_equal(ctx.R, ctx.L.T)


def test_identities_all_pass_two_vertices(all_bundles):
    for bundle in all_bundles:
        for x in (0, bundle.scheme.n // 2):
            ctx = tw.build_context(bundle.scheme, bundle.spectral, x)
            report = tw.verify_operator_identities(ctx)
            assert report.all_passed, (bundle.name, x)
            assert report.max_residual < 1e-9 * bundle.scheme.n


def test_exchange_identity_o4(o4):
    ctx = o4.ctx
    lhs = ctx.R * ctx.Estar[1][None, :]
    rhs = ctx.Estar[2][:, None] * ctx.R
    assert np.abs(lhs - rhs).max() < 1e-9


def test_dual_adjacency_eigenvalues(all_bundles):
    for bundle in all_bundles:
        ctx = bundle.ctx
        ths = bundle.spectral.theta_star
        for i in range(bundle.scheme.D + 1):
            resid = (ctx.Astar - ths[i]) * ctx.Estar[i]
            assert np.abs(resid).max() < 1e-9 * bundle.scheme.n


def test_dual_class_sum(all_bundles):
    for bundle in all_bundles:
        ctx = bundle.ctx
        total = ctx.Astar_all.sum(axis=0)
        assert np.abs(total - bundle.scheme.n * ctx.Estar[0]).max() < 1e-9 * bundle.scheme.n


def test_flat_part_lives_on_far_shell(fc7):
    ctx = fc7.ctx
    D = fc7.scheme.D
    far = ctx.Estar[D][:, None] * ctx.A * ctx.Estar[D][None, :]
    assert np.abs(ctx.F - far).max() < 1e-10
    for i in range(D):
        assert np.abs(ctx.F * ctx.Estar[i][None, :]).max() < 1e-10
    assert far.max() > 0.5


def test_base_vertex_covariance(o4):
    # vertex-transitive instance: identity residual profile matches across x
    reports = []
    for x in (0, 7, 20):
        ctx = tw.build_context(o4.scheme, o4.spectral, x)
        report = tw.verify_operator_identities(ctx)
        reports.append([c.passed for c in report.checks])
    assert reports[0] == reports[1] == reports[2]


def test_context_requires_q_ordering():
    pverts = list(combinations(range(5), 2))
    pedges = [
        (i, j)
        for i in range(10)
        for j in range(i + 1, 10)
        if not (set(pverts[i]) & set(pverts[j]))
    ]
    adj = [
        [k for k, f in enumerate(pedges) if k != idx and (set(e) & set(f))]
        for idx, e in enumerate(pedges)
    ]
    scheme = tw.scheme_from_graph(adj)
    spectral = tw.spectral_data(scheme)
    with pytest.raises(OrderingMissing):
        tw.build_context(scheme, spectral, 0)


def test_vertex_out_of_range(c7):
    with pytest.raises(ValueError):
        tw.build_context(c7.scheme, c7.spectral, 99)


@pytest.mark.parametrize("which", ["c7", "o4"])
def test_triangle_vanishing(which, request):
    bundle = request.getfixturevalue(which)
    report = tw.triangle_vanishing_check(bundle.ctx)
    assert report.passed, (report.p_counterexamples, report.q_counterexamples)


def test_triangle_vanishing_trivial_scheme():
    scheme = tw.validate_scheme([[0]])
    ctx = tw.build_context(scheme, tw.spectral_data(scheme), 0)
    assert tw.triangle_vanishing_check(ctx).passed


def test_shell_ranks_cover_everything(all_bundles):
    for bundle in all_bundles:
        ranks = bundle.ctx.Estar.sum(axis=1)
        assert int(ranks.sum()) == bundle.scheme.n
