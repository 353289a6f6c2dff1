import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterbus.graph import Status
from clusterbus.lattice import (
    GridCoord,
    GridLattice,
    NoPathError,
    OutOfBoundsError,
    ZeroDimensionError,
    exclusion_zone,
    grid_cluster,
    path_vertices,
    staircase_path,
)


def test_grid_cluster_1x2_is_single_edge():
    g, lat = grid_cluster(1, 2)
    assert g.vertex_count == 2
    assert set(g.edges()) == {(0, 1)}


def test_grid_cluster_2x2_is_four_cycle():
    g, _ = grid_cluster(2, 2)
    assert g.edge_count == 4
    assert all(g.degree(v) == 2 for v in range(4))


def test_grid_cluster_3x3_edge_count():
    g, lat = grid_cluster(3, 3)
    assert g.vertex_count == 9
    assert g.edge_count == 12
    assert g.degree(lat.vertex((1, 1))) == 4


def test_zero_dimension_rejected():
    with pytest.raises(ZeroDimensionError):
        grid_cluster(0, 3)


def test_lattice_coord_vertex_bijection():
    lat = GridLattice(3, 4)
    seen = set()
    for coord in lat.coords():
        v = lat.vertex(coord)
        assert lat.coord(v) == coord
        seen.add(v)
    assert seen == set(range(12))
    with pytest.raises(OutOfBoundsError):
        lat.vertex((3, 0))


def test_adjacent_endpoints_give_empty_path():
    lat = GridLattice(3, 3)
    p = staircase_path(lat, (0, 0), (0, 1))
    assert p.is_empty
    assert p.src == GridCoord(0, 0)


def test_single_diagonal_path_3x3():
    lat = GridLattice(3, 3)
    p = staircase_path(lat, (0, 0), (2, 2))
    assert [tuple(c) for c in p.cells] == [(0, 1), (1, 1), (1, 2)]
    assert p.turns == ()


def test_two_segment_v_path():
    lat = GridLattice(5, 5)
    p = staircase_path(lat, (0, 0), (4, 0))
    assert GridCoord(2, 2) in p.turns
    assert len(p.cells) == 7
    # both arms are diagonal; the path never hugs itself
    cells = [p.src, *p.cells, p.dst]
    for i, a in enumerate(cells):
        for j, b in enumerate(cells):
            if abs(i - j) > 1:
                assert abs(a.row - b.row) + abs(a.col - b.col) != 1


def test_odd_parity_gets_leading_column_kink():
    lat = GridLattice(4, 5)
    p = staircase_path(lat, (0, 0), (3, 4))
    assert p.cells[0] == GridCoord(0, 1)
    assert len(p.cells) >= 3 + 4 - 1


def test_narrow_grid_bounce_path():
    lat = GridLattice(2, 8)
    p = staircase_path(lat, (0, 0), (0, 7))
    cells = [p.src, *p.cells, p.dst]
    for a, b in zip(cells, cells[1:]):
        assert abs(a.row - b.row) + abs(a.col - b.col) == 1


def test_path_errors():
    lat = GridLattice(3, 3)
    with pytest.raises(OutOfBoundsError):
        staircase_path(lat, (0, 0), (5, 5))
    with pytest.raises(Exception):
        staircase_path(lat, (1, 1), (1, 1))
    with pytest.raises(NoPathError):
        staircase_path(GridLattice(1, 5), (0, 0), (0, 3))


@given(st.data())
@settings(max_examples=80, deadline=None)
def test_staircase_invariants_on_random_pairs(data):
    rows = data.draw(st.integers(min_value=2, max_value=7))
    cols = data.draw(st.integers(min_value=2, max_value=7))
    lat = GridLattice(rows, cols)
    src = GridCoord(
        data.draw(st.integers(0, rows - 1)), data.draw(st.integers(0, cols - 1))
    )
    dst = GridCoord(
        data.draw(st.integers(0, rows - 1)), data.draw(st.integers(0, cols - 1))
    )
    if src == dst:
        return
    p = staircase_path(lat, src, dst)
    cells = [src, *p.cells, dst]
    for a, b in zip(cells, cells[1:]):
        assert abs(a.row - b.row) + abs(a.col - b.col) == 1
    assert src not in p.cells and dst not in p.cells
    assert len(set(p.cells)) == len(p.cells)
    assert len(p.cells) >= abs(src.row - dst.row) + abs(src.col - dst.col) - 1
    assert all(lat.in_bounds(c) for c in p.cells)


def test_exclusion_zone_disjoint_from_path_and_endpoints():
    lat = GridLattice(4, 5)
    p = staircase_path(lat, (0, 0), (3, 4))
    zone = exclusion_zone(lat, p)
    assert zone == {GridCoord(1, 0)}
    assert not zone & set(p.cells)
    assert p.src not in zone and p.dst not in zone


def test_exclusion_zone_corner_endpoint_is_small():
    lat = GridLattice(3, 3)
    p = staircase_path(lat, (0, 0), (2, 2))
    # corner-to-corner diagonal: every off-path neighbor is restoring
    assert exclusion_zone(lat, p) == set()


def test_exclusion_zone_matches_scratch_run_isolation():
    from clusterbus.zipper import run_zipper

    lat = GridLattice(4, 5)
    p = staircase_path(lat, (0, 0), (3, 4))
    zone = exclusion_zone(lat, p)
    g, _ = grid_cluster(4, 5)
    res = run_zipper(
        g, path_vertices(lat, p), (lat.vertex(p.src), lat.vertex(p.dst))
    )
    assert {lat.coord(v) for v in res.holes} == zone
    assert {v for v in res.holes} == {
        v for v in range(g.vertex_count) if g.status(v) is Status.MEASURED_Z
    }
