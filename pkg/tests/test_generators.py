import json

import numpy as np
import pytest

import terwlab as tw
from terwlab.errors import InvalidParameter, ParseError, ResourceLimit
from terwlab.generators import scheme_from_json, scheme_to_json


def test_odd_cycle_basic():
    for D in (1, 2, 3, 4):
        scheme = tw.odd_cycle(D)
        assert scheme.n == 2 * D + 1 and scheme.D == D
        assert scheme.tensor.k[1:].tolist() == [2] * D


def test_odd_cycle_invalid():
    with pytest.raises(InvalidParameter):
        tw.odd_cycle(0)


def test_odd_graph_o4():
    scheme = tw.odd_graph(3)
    assert scheme.n == 35 and scheme.D == 3
    assert scheme.tensor.k[1] == 4
    pp = tw.intersection_array(scheme.tensor)
    assert pp.a.tolist() == [0, 0, 0, 2]
    assert tw.is_almost_bipartite(pp)


def test_odd_graph_petersen():
    scheme = tw.odd_graph(2)
    assert scheme.n == 10 and scheme.D == 2
    assert scheme.tensor.k[1] == 3


def test_odd_graph_limits():
    with pytest.raises(InvalidParameter):
        tw.odd_graph(1)
    with pytest.raises(ResourceLimit):
        tw.odd_graph(8)  # C(17, 8) = 24310 vertices


def test_folded_cube_families():
    fc7 = tw.folded_cube(3)
    assert fc7.n == 64 and fc7.D == 3 and fc7.tensor.k[1] == 7
    assert tw.is_almost_bipartite(tw.intersection_array(fc7.tensor))
    clebsch = tw.folded_cube(2)
    assert clebsch.n == 16 and clebsch.D == 2 and clebsch.tensor.k[1] == 5


def test_folded_cube_limits():
    with pytest.raises(InvalidParameter):
        tw.folded_cube(1)
    with pytest.raises(ResourceLimit):
        tw.folded_cube(7)  # 2^14 = 16384 vertices


def test_generated_schemes_validate(all_bundles):
    for bundle in all_bundles:
        assert bundle.scheme.tensor is not None
        assert int(bundle.scheme.relation.max()) == bundle.scheme.D


def test_round_trip_distance_graph(tmp_path, c7):
    path = tmp_path / "c7.json"
    tw.save_scheme(c7.scheme, path)
    doc = json.loads(path.read_text())
    assert doc["relation"]["kind"] == "distance_graph"
    loaded = tw.load_scheme(path)
    assert np.array_equal(loaded.relation, c7.scheme.relation)


def test_round_trip_explicit():
    scheme = tw.validate_scheme([[0]])
    doc = scheme_to_json(scheme)
    assert doc["relation"]["kind"] == "explicit"
    again = scheme_from_json(doc)
    assert again.n == 1 and again.D == 0


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        tw.load_scheme(path)


def test_missing_file():
    with pytest.raises(ParseError):
        tw.load_scheme("/nonexistent/scheme.json")


def test_wrong_declared_diameter(tmp_path, c7):
    doc = scheme_to_json(c7.scheme)
    doc["D"] = 2
    path = tmp_path / "wrong.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError):
        tw.load_scheme(path)


def test_disconnected_graph_rejected():
    with pytest.raises(ParseError):
        tw.scheme_from_graph([[1], [0], [3], [2]])


def test_non_distance_regular_graph_rejected():
    from terwlab.errors import AxiomViolation

    # the path on four vertices has non-constant triple counts
    with pytest.raises(AxiomViolation) as err:
        tw.scheme_from_graph([[1], [0, 2], [1, 3], [2]])
    assert err.value.axiom == "iv"


def test_out_of_range_neighbor(tmp_path):
    path = tmp_path / "oob.json"
    path.write_text(json.dumps({"n": 2, "D": 1, "relation": {"kind": "distance_graph", "adjacency": [[1], [5]]}}))
    with pytest.raises(ParseError):
        tw.load_scheme(path)


def test_unknown_family():
    with pytest.raises(InvalidParameter):
        tw.generators.generate("hypercube", 3)


def test_bfs_diameter_matches_D(all_bundles):
    for bundle in all_bundles:
        rel = bundle.scheme.relation
        assert int(rel.max()) == bundle.scheme.D
