"""2D cluster lattices, staircase paths, and exclusion-zone geometry.

The lattice owns the bijection between (row, col) coordinates and vertex
ids and generates the 4-neighbor grid graph.  Staircase paths are diagonal
measurement paths built from alternating row and column unit steps; any two
cells of a grid with both dimensions >= 2 are connected by one or more such
diagonal segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .graph import GraphState


class LatticeError(Exception):
    """Base class for lattice construction and routing failures."""


class ZeroDimensionError(LatticeError):
    """Grid dimensions must be positive."""


class OutOfBoundsError(LatticeError):
    """A coordinate lies outside the grid."""


class NoPathError(LatticeError):
    """No staircase path exists between the endpoints (e.g. on a 1xN grid)."""


class GridCoord(NamedTuple):
    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


def _as_coord(c) -> GridCoord:
    return c if isinstance(c, GridCoord) else GridCoord(int(c[0]), int(c[1]))


@dataclass(frozen=True)
class GridLattice:
    """Row-major coordinate <-> vertex-id mapping for a rows x cols grid."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ZeroDimensionError(
                f"grid dimensions must be >= 1, got {self.rows}x{self.cols}"
            )

    @property
    def vertex_count(self) -> int:
        return self.rows * self.cols

    def in_bounds(self, coord) -> bool:
        r, c = coord
        return 0 <= r < self.rows and 0 <= c < self.cols

    def vertex(self, coord) -> int:
        r, c = coord
        if not self.in_bounds((r, c)):
            raise OutOfBoundsError(f"({r},{c}) outside {self.rows}x{self.cols} grid")
        return r * self.cols + c

    def coord(self, vertex: int) -> GridCoord:
        if not 0 <= vertex < self.vertex_count:
            raise OutOfBoundsError(f"vertex {vertex} outside grid")
        return GridCoord(vertex // self.cols, vertex % self.cols)

    def coords(self) -> Iterator[GridCoord]:
        for r in range(self.rows):
            for c in range(self.cols):
                yield GridCoord(r, c)

    def grid_neighbors(self, coord) -> list[GridCoord]:
        r, c = coord
        out = []
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            if self.in_bounds((r + dr, c + dc)):
                out.append(GridCoord(r + dr, c + dc))
        return out


def grid_cluster(rows: int, cols: int) -> tuple[GraphState, GridLattice]:
    """A rows x cols cluster: one vertex per cell, edges between 4-neighbors."""
    lat = GridLattice(rows, cols)
    g = GraphState(lat.vertex_count)
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                g.toggle_edge(lat.vertex((r, c)), lat.vertex((r, c + 1)))
            if r + 1 < rows:
                g.toggle_edge(lat.vertex((r, c)), lat.vertex((r + 1, c)))
    return g, lat


@dataclass(frozen=True)
class StaircasePath:
    """Measurement path between two cells, excluding both endpoints.

    ``cells`` runs from source-adjacent to destination-adjacent; consecutive
    cells are grid-adjacent and each segment between ``turns`` alternates
    row and column steps.  An empty path means the endpoints are already
    grid-adjacent.
    """

    src: GridCoord
    dst: GridCoord
    cells: tuple[GridCoord, ...]
    turns: tuple[GridCoord, ...] = ()

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def to_json_dict(self) -> dict:
        return {
            "src": list(self.src),
            "dst": list(self.dst),
            "cells": [list(c) for c in self.cells],
            "turns": [list(c) for c in self.turns],
        }


def _staircase_cells(a: GridCoord, b: GridCoord, first: str = "col") -> list[GridCoord]:
    """Cells strictly after ``a`` up to and including ``b``.

    Requires |dr| == |dc| (a true diagonal); steps alternate axes starting
    with ``first``.
    """
    dr, dc = b.row - a.row, b.col - a.col
    if abs(dr) != abs(dc):
        raise ValueError(f"{a} -> {b} is not a diagonal")
    sr, sc = (dr > 0) - (dr < 0), (dc > 0) - (dc < 0)
    cells = []
    r, c = a
    for _ in range(abs(dr)):
        if first == "col":
            c += sc
            cells.append(GridCoord(r, c))
            r += sr
            cells.append(GridCoord(r, c))
        else:
            r += sr
            cells.append(GridCoord(r, c))
            c += sc
            cells.append(GridCoord(r, c))
    return cells


def _turning_candidates(src: GridCoord, dst: GridCoord) -> list[GridCoord]:
    r0, c0 = src
    r1, c1 = dst
    cands = []
    for num_r, num_c in (
        (r0 - c0 + r1 + c1, r1 + c1 - r0 + c0),
        (r0 + c0 + r1 - c1, r0 + c0 - r1 + c1),
    ):
        if num_r % 2 == 0 and num_c % 2 == 0:
            cands.append(GridCoord(num_r // 2, num_c // 2))
    return cands


def staircase_path(lat: GridLattice, src, dst) -> StaircasePath:
    """A diagonal measurement path from ``src`` to ``dst``.

    Single diagonal when the endpoints share one; otherwise two diagonal
    segments joined at the in-bounds turning point closest to the source,
    falling back to a bouncing multi-segment walk on narrow grids.  Odd
    row+col parity is absorbed by one leading unit step (column preferred).
    Grid-adjacent endpoints yield the empty path.
    """
    src, dst = _as_coord(src), _as_coord(dst)
    for p in (src, dst):
        if not lat.in_bounds(p):
            raise OutOfBoundsError(f"{p} outside {lat.rows}x{lat.cols} grid")
    if src == dst:
        raise LatticeError("source and destination coincide")
    if abs(src.row - dst.row) + abs(src.col - dst.col) == 1:
        return StaircasePath(src, dst, ())

    walk, turns = _route(lat, src, dst)
    cells = tuple(walk[1:-1])
    if len(set(cells)) != len(cells) or src in cells or dst in cells:
        raise NoPathError(f"routing produced a degenerate path {src} -> {dst}")
    return StaircasePath(src, dst, cells, tuple(t for t in turns if t in cells))


def _is_simple_walk(walk: list[GridCoord]) -> bool:
    return len(set(walk)) == len(walk)


def _route(
    lat: GridLattice, src: GridCoord, dst: GridCoord
) -> tuple[list[GridCoord], list[GridCoord]]:
    """Full cell walk from src to dst inclusive, plus its turning cells."""
    prefix = [src]
    turns: list[GridCoord] = []
    cur = src
    dr, dc = dst.row - src.row, dst.col - src.col
    if (dr + dc) % 2 != 0:
        # parity kink: one unit step along the longer axis (column on ties)
        if abs(dc) >= abs(dr) and dc != 0:
            cur = GridCoord(cur.row, cur.col + ((dc > 0) - (dc < 0)))
        else:
            cur = GridCoord(cur.row + ((dr > 0) - (dr < 0)), cur.col)
        prefix.append(cur)
        turns.append(cur)

    dr, dc = dst.row - cur.row, dst.col - cur.col
    if abs(dr) == abs(dc):
        walk = prefix + _staircase_cells(cur, dst)
        if _is_simple_walk(walk):
            return walk, turns
        return _bounce_walk(lat, prefix, turns, cur, dst)

    cands = []
    for t in _turning_candidates(cur, dst):
        if t in (cur, dst, src) or not lat.in_bounds(t):
            continue
        d = max(abs(t.row - cur.row), abs(t.col - cur.col))
        cands.append(((d, t.row, t.col), t))
    for _, t in sorted(cands):
        # second arm leads with the axis whose direction survives the turn,
        # so the two arms never run alongside each other
        row_preserved = ((t.row - cur.row) > 0) == ((dst.row - t.row) > 0)
        arm2_first = "row" if row_preserved else "col"
        for arm1_first in ("col", "row"):
            walk = (
                prefix
                + _staircase_cells(cur, t, first=arm1_first)
                + _staircase_cells(t, dst, first=arm2_first)
            )
            if _is_simple_walk(walk):
                return walk, turns + [t]

    return _bounce_walk(lat, prefix, turns, cur, dst)


def _bounce_walk(
    lat: GridLattice,
    walk: list[GridCoord],
    turns: list[GridCoord],
    cur: GridCoord,
    dst: GridCoord,
) -> tuple[list[GridCoord], list[GridCoord]]:
    """Diagonal walk toward dst, reflecting off grid walls (narrow grids)."""
    if lat.rows < 2 or lat.cols < 2:
        raise NoPathError("staircase routing needs both grid dimensions >= 2")
    prev_dir: tuple[int, int] | None = None
    for _ in range(4 * (lat.rows + lat.cols) ** 2):
        dr, dc = dst.row - cur.row, dst.col - cur.col
        if abs(dr) == abs(dc):
            walk.extend(_staircase_cells(cur, dst))
            return walk, turns
        sr = (dr > 0) - (dr < 0)
        sc = (dc > 0) - (dc < 0)
        if sr == 0:
            sr = 1 if cur.row + 1 < lat.rows else -1
        if sc == 0:
            sc = 1 if cur.col + 1 < lat.cols else -1
        if not lat.in_bounds((cur.row + sr, cur.col)):
            sr = -sr
        if not lat.in_bounds((cur.row, cur.col + sc)):
            sc = -sc
        if prev_dir is not None and (sr, sc) != prev_dir:
            turns.append(cur)
        prev_dir = (sr, sc)
        step_to = GridCoord(cur.row + sr, cur.col + sc)
        walk.extend(_staircase_cells(cur, step_to))
        cur = step_to
    raise NoPathError(f"bounce walk failed to reach {dst}")


def path_vertices(lat: GridLattice, path: StaircasePath) -> list[int]:
    return [lat.vertex(c) for c in path.cells]


def exclusion_zone(lat: GridLattice, path: StaircasePath) -> set[GridCoord]:
    """Cells that must be Z-measured to isolate the pair routed along ``path``.

    Determined by running the zipper on a fresh scratch grid and collecting
    the vertices still attached to either endpoint after the sweep; a
    closed-form stencil could drift from the rules, a scratch run cannot.
    """
    from .zipper import run_zipper  # local import: zipper builds on this module

    g, _ = grid_cluster(lat.rows, lat.cols)
    result = run_zipper(
        g,
        path_vertices(lat, path),
        (lat.vertex(path.src), lat.vertex(path.dst)),
    )
    return {lat.coord(v) for v in result.holes}
