import pytest

from clusterbus import oracle
from clusterbus.graph import graph_from_edges
from clusterbus.lattice import grid_cluster, path_vertices, staircase_path
from clusterbus.plan import MeasurementPlan
from clusterbus.zipper import (
    BrokenPathError,
    DisconnectedEndpointError,
    ZipperResult,
    classify_neighbors,
    expected_stitch_edges,
    run_zipper,
    verify_restoration,
)


def _setup(rows, cols, src, dst):
    g, lat = grid_cluster(rows, cols)
    p = staircase_path(lat, src, dst)
    return g, lat, path_vertices(lat, p), (lat.vertex(src), lat.vertex(dst)), p


def _coords(lat, vertices):
    return sorted(tuple(lat.coord(v)) for v in vertices)


def test_classification_on_4x5_diagonal():
    g, lat, pv, ends, _ = _setup(4, 5, (0, 0), (3, 4))
    cls = classify_neighbors(g, pv, ends)
    assert _coords(lat, cls.exclusive) == [(1, 0)]
    assert _coords(lat, cls.restoring) == [(0, 3), (1, 1), (1, 4), (2, 2), (3, 3)]
    assert not set(cls.exclusive) & set(cls.restoring)


def test_classification_against_brute_force_count():
    g, lat, pv, ends, _ = _setup(4, 4, (0, 0), (3, 3))
    cls = classify_neighbors(g, pv, ends)
    collective = set(pv) | set(ends)
    for v in g.active_vertices():
        if v in collective:
            continue
        contacts = len(g.neighbors(v) & collective)
        if contacts == 1:
            assert v in cls.exclusive
        elif contacts >= 2:
            assert v in cls.restoring
        else:
            assert v not in cls.exclusive and v not in cls.restoring


def test_boundary_path_classification_is_one_sided():
    g, lat, pv, ends, _ = _setup(2, 3, (0, 0), (1, 2))
    cls = classify_neighbors(g, pv, ends)
    # hugging the top edge: all classified neighbors lie below the path
    assert all(lat.coord(v).row == 1 for v in cls.restoring | cls.exclusive) or all(
        lat.coord(v).row == 0 for v in cls.restoring | cls.exclusive
    )


def test_run_zipper_3x3_bell_pair():
    g, lat, pv, ends, _ = _setup(3, 3, (0, 0), (2, 2))
    res = run_zipper(g, pv, ends)
    assert g.has_edge(*ends)
    assert g.connected_component(ends[0]) == set(ends)
    assert g.degree(ends[0]) == 1 and g.degree(ends[1]) == 1
    assert res.holes == frozenset()
    assert res.bell_edge == ends


def test_run_zipper_stitches_exactly_as_classified():
    for dims, src, dst in [
        ((3, 3), (0, 0), (2, 2)),
        ((4, 4), (0, 0), (3, 3)),
        ((4, 5), (0, 0), (3, 4)),
    ]:
        g, lat, pv, ends, _ = _setup(*dims, src, dst)
        expected = expected_stitch_edges(g, pv, ends)
        res = run_zipper(g, pv, ends)
        assert set(res.stitched_edges) == expected


def test_run_zipper_records_full_plan():
    g, lat, pv, ends, _ = _setup(4, 5, (0, 0), (3, 4))
    res = run_zipper(g, pv, ends)
    assert [s.vertex for s in res.plan if s.basis == "X"] == pv
    assert all(s.special == ends[0] for s in res.plan if s.basis == "X")
    assert sorted(s.vertex for s in res.plan if s.basis == "Z") == sorted(res.holes)


def test_degenerate_adjacent_endpoints():
    g, lat = grid_cluster(2, 2)
    ends = (lat.vertex((0, 0)), lat.vertex((0, 1)))
    res = run_zipper(g, [], ends)
    assert g.has_edge(*ends)
    assert g.connected_component(ends[0]) == set(ends)
    # the two remaining vertices were cut away
    assert len(res.holes) == 2


def test_v_turn_holes_stay_near_turn():
    g, lat, pv, ends, path = _setup(5, 5, (0, 0), (4, 0))
    res = run_zipper(g, pv, ends)
    assert g.connected_component(ends[0]) == set(ends)
    special_cells = {path.src, path.dst, *path.turns}
    for hole in res.holes:
        hc = lat.coord(hole)
        assert any(
            max(abs(hc.row - s.row), abs(hc.col - s.col)) <= 1 for s in special_cells
        ), f"hole {hc} far from endpoints/turns"


def test_broken_path_raises():
    g, lat, pv, ends, _ = _setup(3, 3, (0, 0), (2, 2))
    g.measure_z(pv[1])
    with pytest.raises(BrokenPathError):
        run_zipper(g, pv, ends)


def test_disconnected_endpoint_raises():
    g, lat = grid_cluster(3, 3)
    # a "path" that skips a cell: the sweep cannot drag the source across
    pv = [lat.vertex((0, 1)), lat.vertex((2, 1))]
    ends = (lat.vertex((0, 0)), lat.vertex((2, 2)))
    with pytest.raises(DisconnectedEndpointError):
        run_zipper(g, pv, ends)


def test_path_and_endpoints_must_be_distinct():
    g, lat = grid_cluster(3, 3)
    with pytest.raises(ValueError):
        run_zipper(g, [lat.vertex((0, 0))], (lat.vertex((0, 0)), lat.vertex((2, 2))))


def test_zipper_result_serialization():
    g, lat, pv, ends, _ = _setup(4, 5, (0, 0), (3, 4))
    res = run_zipper(g, pv, ends)
    data = res.to_json_dict()
    assert data["bell_edge"] == list(ends)
    assert data["holes"] == sorted(res.holes)
    assert len(data["steps"]) == len(res.plan)


def test_verify_restoration_passes_on_fresh_run():
    g, lat, pv, ends, _ = _setup(4, 4, (0, 0), (3, 3))
    before = g.copy()
    res = run_zipper(g, pv, ends)
    report = verify_restoration(before, res)
    assert report.stitched_ok and report.detached_ok
    assert report.composable_ok is None
    assert report.passed


def test_verify_restoration_composability_crossing():
    g, lat = grid_cluster(6, 6)
    before = g.copy()
    p1 = staircase_path(lat, (0, 0), (5, 5))
    res = run_zipper(
        g, path_vertices(lat, p1), (lat.vertex((0, 0)), lat.vertex((5, 5)))
    )
    p2 = staircase_path(lat, (5, 0), (0, 5))
    crossing_path = [v for v in path_vertices(lat, p2) if g.is_active(v)]
    report = verify_restoration(
        before,
        res,
        crossing=(crossing_path, (lat.vertex((5, 0)), lat.vertex((0, 5)))),
    )
    assert report.passed
    assert report.composable_ok is True


def test_verify_restoration_vacuous_on_empty_sweep():
    g, lat = grid_cluster(2, 2)
    before = g.copy()
    ends = (lat.vertex((0, 0)), lat.vertex((0, 1)))
    res = run_zipper(g, [], ends)
    report = verify_restoration(before, res)
    assert report.passed


def test_two_sequential_crossing_zippers_oracle_checked():
    g, lat = grid_cluster(4, 5)
    before = g.copy()
    plan = MeasurementPlan()
    for i, (src, dst) in enumerate((((0, 0), (3, 3)), ((3, 0), (0, 3)))):
        p = staircase_path(lat, src, dst)
        pv = [v for v in path_vertices(lat, p) if g.is_active(v)]
        res = run_zipper(
            g, pv, (lat.vertex(src), lat.vertex(dst)), tag=f"bell-{i}", plan=plan
        )
        assert g.connected_component(res.bell_edge[0]) == set(res.bell_edge)
    report = oracle.verify_plan(before, plan, g, trials=5, seed=11)
    assert report.passed
