"""Graph states and their exact single-qubit transformation rules.

A graph state is fully described by a simple graph: one qubit per vertex,
one CZ interaction per edge.  Local complementation and Pauli X/Y/Z
measurements act on that description as purely combinatorial edge rewrites,
which this module implements.  Measured vertices are kept (status-marked)
rather than deleted so that vertex ids and grid coordinates stay stable
across an entire measurement schedule.

The update rules are outcome-independent; outcome-dependent byproducts are
local Paulis that the statevector oracle absorbs via modulus-1 stabilizer
checks (see :mod:`clusterbus.oracle`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator


class GraphError(Exception):
    """Base class for graph-state rule violations."""


class SelfLoopError(GraphError):
    """An edge was requested between a vertex and itself."""


class InactiveVertexError(GraphError):
    """An operation touched a vertex that is measured or out of range."""


class NotANeighborError(GraphError):
    """The special vertex of an X measurement is not adjacent to the target."""


class Status(Enum):
    """Lifecycle of a vertex: active, or consumed by a Pauli measurement."""

    ACTIVE = "active"
    MEASURED_X = "X"
    MEASURED_Y = "Y"
    MEASURED_Z = "Z"


_MEASURED_STATUS = {
    "X": Status.MEASURED_X,
    "Y": Status.MEASURED_Y,
    "Z": Status.MEASURED_Z,
}


@dataclass(frozen=True)
class PauliString:
    """A signed Pauli operator, stored as a vertex -> letter map.

    Letters are 'X', 'Y' or 'Z'; identity positions are simply absent.
    """

    letters: dict[int, str] = field(default_factory=dict)
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        for v, letter in self.letters.items():
            if letter not in ("X", "Y", "Z"):
                raise ValueError(f"invalid Pauli letter {letter!r} on vertex {v}")

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "+I" if self.sign > 0 else "-I"
        body = "*".join(f"{p}{v}" for v, p in sorted(self.letters.items()))
        return ("+" if self.sign > 0 else "-") + body


class GraphState:
    """Simple undirected graph with a per-vertex measurement status.

    The adjacency relation is the single source of truth for the
    entanglement structure; all rule methods mutate in place and keep the
    invariants: no self-loops, symmetric adjacency, and measured vertices
    have degree zero.
    """

    __slots__ = ("_adj", "_status")

    def __init__(self, n: int) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._status: list[Status] = [Status.ACTIVE] * n

    # -- basic structure ---------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    def status(self, a: int) -> Status:
        self._check_vertex(a)
        return self._status[a]

    def is_active(self, a: int) -> bool:
        return 0 <= a < len(self._adj) and self._status[a] is Status.ACTIVE

    def active_vertices(self) -> list[int]:
        return [v for v, s in enumerate(self._status) if s is Status.ACTIVE]

    def measured_vertices(self, basis: str | None = None) -> list[int]:
        if basis is None:
            return [v for v, s in enumerate(self._status) if s is not Status.ACTIVE]
        wanted = _MEASURED_STATUS[basis]
        return [v for v, s in enumerate(self._status) if s is wanted]

    def neighbors(self, a: int) -> set[int]:
        self._check_vertex(a)
        return set(self._adj[a])

    def degree(self, a: int) -> int:
        self._check_vertex(a)
        return len(self._adj[a])

    def has_edge(self, a: int, b: int) -> bool:
        self._check_vertex(a)
        self._check_vertex(b)
        return b in self._adj[a]

    def edges(self) -> Iterator[tuple[int, int]]:
        for a, nbrs in enumerate(self._adj):
            for b in nbrs:
                if a < b:
                    yield (a, b)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj) // 2

    def toggle_edge(self, a: int, b: int) -> None:
        """Flip the presence of edge (a, b); both endpoints must be active."""
        if a == b:
            raise SelfLoopError(f"cannot toggle a self-loop at vertex {a}")
        self._check_active(a)
        self._check_active(b)
        if b in self._adj[a]:
            self._adj[a].discard(b)
            self._adj[b].discard(a)
        else:
            self._adj[a].add(b)
            self._adj[b].add(a)

    # -- transformation rules ----------------------------------------------

    def local_complement(self, a: int) -> None:
        """Invert the subgraph induced by the neighbors of ``a``."""
        self._check_active(a)
        nbrs = sorted(self._adj[a])
        for i, b in enumerate(nbrs):
            for c in nbrs[i + 1 :]:
                if c in self._adj[b]:
                    self._adj[b].discard(c)
                    self._adj[c].discard(b)
                else:
                    self._adj[b].add(c)
                    self._adj[c].add(b)

    def measure_z(self, a: int) -> None:
        """Z measurement: delete all edges at ``a`` and retire the vertex."""
        self._check_active(a)
        self._clear_vertex(a, Status.MEASURED_Z)

    def measure_y(self, a: int) -> None:
        """Y measurement: local complementation at ``a`` followed by Z."""
        self._check_active(a)
        self.local_complement(a)
        self._clear_vertex(a, Status.MEASURED_Y)

    def measure_x(self, a: int, special: int | None = None) -> None:
        """X measurement with a chosen special neighbor.

        Equivalent to local complementation at the special neighbor, a Y
        measurement at ``a``, and another local complementation at the
        special neighbor.  An isolated vertex degenerates to a pure status
        change and ignores ``special``.  When ``special`` is omitted, the
        lowest-id neighbor is used.
        """
        self._check_active(a)
        nbrs = self._adj[a]
        if not nbrs:
            self._clear_vertex(a, Status.MEASURED_X)
            return
        if special is None:
            special = min(nbrs)
        elif special not in nbrs:
            raise NotANeighborError(
                f"special vertex {special} is not a neighbor of {a}"
            )
        self.local_complement(special)
        self.local_complement(a)
        self._clear_vertex(a, Status.MEASURED_X)
        self.local_complement(special)

    def stabilizer(self, a: int) -> PauliString:
        """The generator with X on ``a`` and Z on each of its neighbors."""
        self._check_active(a)
        letters = {b: "Z" for b in self._adj[a]}
        letters[a] = "X"
        return PauliString(letters=letters, sign=1)

    # -- structure queries ---------------------------------------------------

    def connected_component(self, a: int) -> set[int]:
        """Vertices reachable from ``a`` (over active vertices only)."""
        self._check_vertex(a)
        seen = {a}
        frontier = [a]
        while frontier:
            v = frontier.pop()
            for w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen

    def copy(self) -> GraphState:
        dup = GraphState(0)
        dup._adj = [set(nbrs) for nbrs in self._adj]
        dup._status = list(self._status)
        return dup

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphState):
            return NotImplemented
        return self._adj == other._adj and self._status == other._status

    def __repr__(self) -> str:
        return (
            f"GraphState(n={self.vertex_count}, edges={self.edge_count}, "
            f"active={len(self.active_vertices())})"
        )

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        measured = {"X": [], "Y": [], "Z": []}
        for v, s in enumerate(self._status):
            if s is not Status.ACTIVE:
                measured[s.value].append(v)
        return {
            "n": self.vertex_count,
            "edges": sorted([a, b] for a, b in self.edges()),
            "measured": measured,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, data: dict) -> GraphState:
        g = cls(int(data["n"]))
        for a, b in data.get("edges", []):
            g.toggle_edge(int(a), int(b))
        for basis, vertices in data.get("measured", {}).items():
            status = _MEASURED_STATUS[basis]
            for v in vertices:
                g._clear_vertex(int(v), status)
        return g

    @classmethod
    def from_json(cls, text: str) -> GraphState:
        return cls.from_json_dict(json.loads(text))

    def to_dot(
        self,
        labels: dict[int, str] | None = None,
        colors: dict[int, str] | None = None,
    ) -> str:
        """Render as Graphviz DOT; measured vertices are drawn dashed."""
        labels = labels or {}
        colors = colors or {}
        lines = ["graph clusterbus {", "  node [shape=circle fontsize=10];"]
        for v in range(self.vertex_count):
            attrs = [f'label="{labels.get(v, v)}"']
            if self._status[v] is not Status.ACTIVE:
                attrs.append("style=dashed")
                attrs.append(f'xlabel="{self._status[v].value}"')
            if v in colors:
                attrs.append(f'color="{colors[v]}"')
            lines.append(f"  {v} [{' '.join(attrs)}];")
        for a, b in sorted(self.edges()):
            lines.append(f"  {a} -- {b};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    # -- internals -----------------------------------------------------------

    def _check_vertex(self, a: int) -> None:
        if not 0 <= a < len(self._adj):
            raise InactiveVertexError(f"vertex {a} is out of range")

    def _check_active(self, a: int) -> None:
        self._check_vertex(a)
        if self._status[a] is not Status.ACTIVE:
            raise InactiveVertexError(
                f"vertex {a} was already measured ({self._status[a].value})"
            )

    def _clear_vertex(self, a: int, status: Status) -> None:
        for b in self._adj[a]:
            self._adj[b].discard(a)
        self._adj[a].clear()
        self._status[a] = status


def new_graph(n: int) -> GraphState:
    """A graph state of ``n`` active, unentangled qubits (no edges)."""
    return GraphState(n)


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> GraphState:
    g = GraphState(n)
    for a, b in edges:
        g.toggle_edge(a, b)
    return g
