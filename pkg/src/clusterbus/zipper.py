"""The zipper scheme: routing Bell pairs along staircase measurement paths.

Sweeping Pauli X measurements along a diagonal path, always using the
source endpoint as the special neighbor for the enclosing local
complementations, drags the source's entanglement cell by cell until it
reaches the destination.  Off-path neighbors sort into two classes:
exclusive neighbors (touching exactly one path/endpoint vertex) trail the
sweep and must be cut by Z measurements at the end, while restoring
neighbors (touching two or more) detach on their own and acquire stitch
edges that re-close the cluster across the measured seam.  Those stitch
edges are what make consecutive sweeps through the same region possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import GraphState
from .plan import MeasurementPlan


class ZipperError(Exception):
    """Base class for zipper failures."""


class BrokenPathError(ZipperError):
    """A path vertex is not active (hole or previously measured)."""


class DisconnectedEndpointError(ZipperError):
    """The routed endpoint lost adjacency to the path mid-sweep."""


@dataclass(frozen=True)
class NeighborClassification:
    """Partition of the off-path neighborhood of a sweep."""

    exclusive: frozenset[int]
    restoring: frozenset[int]


@dataclass
class ZipperResult:
    """Outcome of one sweep: final graph, recorded plan, and bookkeeping.

    ``chain`` is the ordered output structure (source, kept vertices,
    destination); for a plain Bell sweep it is just the two endpoints of
    ``bell_edge``.  ``holes`` are the Z-measured cleanup vertices of this
    run only.
    """

    graph: GraphState
    plan: MeasurementPlan
    bell_edge: tuple[int, int]
    chain: tuple[int, ...]
    path: tuple[int, ...]
    stitched_edges: frozenset[tuple[int, int]]
    holes: frozenset[int]
    classification: NeighborClassification

    def to_json_dict(self) -> dict:
        data = self.plan.to_json_dict()
        data["bell_edge"] = list(self.bell_edge)
        data["chain"] = list(self.chain)
        data["stitched_edges"] = sorted(list(e) for e in self.stitched_edges)
        data["holes"] = sorted(self.holes)
        return data


def classify_neighbors(
    g: GraphState,
    path: Sequence[int],
    endpoints: tuple[int, int],
) -> NeighborClassification:
    """Split the pre-sweep neighborhood into exclusive and restoring sets."""
    collective = set(path) | set(endpoints)
    exclusive: set[int] = set()
    restoring: set[int] = set()
    for v in collective:
        for w in g.neighbors(v):
            if w in collective or w in restoring:
                continue
            if w in exclusive:
                exclusive.discard(w)
                restoring.add(w)
            else:
                exclusive.add(w)
    return NeighborClassification(frozenset(exclusive), frozenset(restoring))


def expected_stitch_edges(
    g: GraphState,
    path: Sequence[int],
    endpoints: tuple[int, int],
    classification: NeighborClassification | None = None,
) -> set[tuple[int, int]]:
    """Stitch edges the sweep should create among restoring vertices.

    Index the measured collective in sweep order (source, path..., then
    destination) and record where each restoring vertex touches it.  The
    sweep re-joins exactly the pairs whose contact intervals interleave:
    they sit on opposite sides of the seam at consecutive rungs, and the
    stitch ladder between them is what closes the cluster again.  Pairs on
    the same side share a contact vertex instead and stay unjoined.  Only
    vertices with exactly two contacts take part; elbow vertices inside a
    turn touch three path cells and end up in the exclusion zone instead.
    """
    cls = classification or classify_neighbors(g, path, endpoints)
    order = [endpoints[0], *path, endpoints[1]]
    pos = {v: i for i, v in enumerate(order)}
    contact = {}
    for r in sorted(cls.restoring):
        touches = sorted(pos[w] for w in g.neighbors(r) if w in pos)
        if len(touches) == 2:
            contact[r] = touches
    rest = sorted(contact)
    out: set[tuple[int, int]] = set()
    for i, r in enumerate(rest):
        for s in rest[i + 1 :]:
            if set(contact[r]) & set(contact[s]):
                continue
            overlap = min(contact[r][-1], contact[s][-1]) - max(
                contact[r][0], contact[s][0]
            )
            if overlap >= 1:
                out.add((min(r, s), max(r, s)))
    return out


def run_zipper(
    g: GraphState,
    path: Sequence[int],
    endpoints: tuple[int, int],
    *,
    keep: Iterable[int] = (),
    cleanup_exempt: Iterable[int] = (),
    tag: str = "",
    plan: MeasurementPlan | None = None,
) -> ZipperResult:
    """Sweep X measurements along ``path`` and isolate the routed state.

    Mutates ``g`` in place.  ``endpoints`` are the (source, destination)
    vertices; the source is the special neighbor of every X measurement
    until a kept vertex takes over that role.  Vertices in ``keep`` stay
    unmeasured and become interior qubits of the output chain (linear
    cluster extraction); a plain Bell sweep keeps nothing.  After the sweep
    every vertex still attached to the output chain is Z-measured unless it
    is listed in ``cleanup_exempt`` (used when a data line continues past
    this sweep into a larger block).

    Args:
        g: working graph, modified in place.
        path: measurement path as vertex ids, source-adjacent first.
        endpoints: (source, destination) vertex ids; never measured here.
        keep: path vertices to leave unmeasured, in path order.
        cleanup_exempt: vertices spared from the final Z cleanup.
        tag: request tag recorded on every plan step.
        plan: plan to append to (a fresh one is created when omitted).

    Returns:
        ZipperResult; ``result.graph`` is ``g``.

    Raises:
        BrokenPathError: a path vertex or endpoint is not active.
        DisconnectedEndpointError: the special vertex lost its adjacency to
            the next path vertex, or the destination was never reached.
    """
    b1, b2 = endpoints
    path = list(path)
    keep = set(keep)
    if not keep.issubset(path):
        raise ValueError("kept vertices must lie on the path")
    for v in (b1, b2, *path):
        if not g.is_active(v):
            raise BrokenPathError(f"vertex {v} is not active")
    if len(set(path) | {b1, b2}) != len(path) + 2:
        raise ValueError("path vertices and endpoints must be distinct")

    classification = classify_neighbors(g, path, endpoints)
    restoring = classification.restoring
    pre_edges = {
        (a, b) for a, b in g.edges() if a in restoring and b in restoring
    }

    if plan is None:
        plan = MeasurementPlan()
    special = b1
    chain = [b1]
    for v in path:
        if v in keep:
            if not g.has_edge(special, v):
                raise DisconnectedEndpointError(
                    f"kept vertex {v} is not attached to the routed chain"
                )
            special = v
            chain.append(v)
            continue
        if g.degree(v) > 0 and not g.has_edge(v, special):
            raise DisconnectedEndpointError(
                f"special {special} lost adjacency to path vertex {v}"
            )
        g.measure_x(v, special if g.degree(v) > 0 else None)
        plan.append(v, "X", special, tag)

    if not g.has_edge(special, b2):
        raise DisconnectedEndpointError(
            f"sweep finished without connecting {special} to destination {b2}"
        )
    chain.append(b2)

    exempt = set(cleanup_exempt) | set(chain)
    holes: set[int] = set()
    for u in chain:
        for w in sorted(g.neighbors(u)):
            if w in exempt or w in holes:
                continue
            g.measure_z(w)
            plan.append(w, "Z", tag=tag)
            holes.add(w)

    stitched = frozenset(
        (a, b)
        for a, b in g.edges()
        if a in restoring and b in restoring and (a, b) not in pre_edges
    )
    return ZipperResult(
        graph=g,
        plan=plan,
        bell_edge=(b1, b2),
        chain=tuple(chain),
        path=tuple(path),
        stitched_edges=stitched,
        holes=frozenset(holes),
        classification=classification,
    )


@dataclass
class RestorationReport:
    """Pass/fail record of the post-sweep restoration assertions."""

    stitched_ok: bool
    detached_ok: bool
    composable_ok: bool | None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.stitched_ok and self.detached_ok and self.composable_ok is not False

    def to_json_dict(self) -> dict:
        return {
            "stitched_ok": self.stitched_ok,
            "detached_ok": self.detached_ok,
            "composable_ok": self.composable_ok,
            "failures": list(self.failures),
            "passed": self.passed,
        }


def verify_restoration(
    before: GraphState,
    result: ZipperResult,
    *,
    crossing: tuple[Sequence[int], tuple[int, int]] | None = None,
) -> RestorationReport:
    """Check that a sweep re-stitched the cluster as the scheme promises.

    Asserts that (a) every stitch edge expected from the pre-sweep
    classification is present, (b) no restoring vertex stayed attached to
    the output chain, and (c), when a ``crossing`` (path, endpoints) is
    supplied, that a second sweep across the seam succeeds on a scratch
    copy of the result graph.
    """
    failures: list[str] = []
    expected = expected_stitch_edges(
        before, result.path, result.bell_edge, result.classification
    )
    g = result.graph
    missing = [e for e in expected if not g.has_edge(*e)]
    if missing:
        failures.append(f"missing stitch edges: {missing}")
    stitched_ok = not missing

    chain = set(result.chain)
    attached = [
        r
        for r in result.classification.restoring
        if g.is_active(r) and g.neighbors(r) & chain
    ]
    if attached:
        failures.append(f"restoring vertices still attached to the chain: {attached}")
    detached_ok = not attached

    composable_ok: bool | None = None
    if crossing is not None:
        cross_path, cross_ends = crossing
        scratch = g.copy()
        try:
            run_zipper(scratch, cross_path, cross_ends)
            composable_ok = True
        except ZipperError as exc:
            composable_ok = False
            failures.append(f"crossing sweep failed: {exc}")

    return RestorationReport(stitched_ok, detached_ok, composable_ok, failures)
