"""Ordered single-qubit measurement schedules and their execution on graphs.

A plan is the compiled artifact of the router: a sequence of (vertex,
basis, optional special neighbor) steps tagged with the request they
serve.  Plans serialize to JSON and round-trip exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .graph import GraphState, InactiveVertexError, NotANeighborError

BASES = ("X", "Y", "Z")


class PlanError(Exception):
    """A plan violates its structural invariants."""


@dataclass(frozen=True)
class MeasurementStep:
    vertex: int
    basis: str
    special: int | None = None
    tag: str = ""

    def __post_init__(self) -> None:
        if self.basis not in BASES:
            raise PlanError(f"unknown basis {self.basis!r}")
        if self.basis != "X" and self.special is not None:
            raise PlanError("only X steps carry a special neighbor")

    def to_json_dict(self) -> dict:
        data: dict = {"vertex": self.vertex, "basis": self.basis}
        if self.special is not None:
            data["special"] = self.special
        if self.tag:
            data["request"] = self.tag
        return data

    @classmethod
    def from_json_dict(cls, data: dict) -> MeasurementStep:
        return cls(
            vertex=int(data["vertex"]),
            basis=str(data["basis"]),
            special=None if data.get("special") is None else int(data["special"]),
            tag=str(data.get("request", "")),
        )


@dataclass
class MeasurementPlan:
    """An ordered measurement schedule; no vertex may appear twice."""

    steps: list[MeasurementStep] = field(default_factory=list)

    def append(
        self,
        vertex: int,
        basis: str,
        special: int | None = None,
        tag: str = "",
    ) -> None:
        if any(s.vertex == vertex for s in self.steps):
            raise PlanError(f"vertex {vertex} is measured twice")
        self.steps.append(MeasurementStep(vertex, basis, special, tag))

    def extend(self, other: MeasurementPlan) -> None:
        for s in other.steps:
            self.append(s.vertex, s.basis, s.special, s.tag)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[MeasurementStep]:
        return iter(self.steps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MeasurementPlan):
            return NotImplemented
        return self.steps == other.steps

    def basis_counts(self) -> dict[str, int]:
        counts = {b: 0 for b in BASES}
        for s in self.steps:
            counts[s.basis] += 1
        return counts

    def validate(self, vertex_count: int | None = None) -> None:
        seen: set[int] = set()
        for s in self.steps:
            if s.vertex in seen:
                raise PlanError(f"vertex {s.vertex} is measured twice")
            seen.add(s.vertex)
            if vertex_count is not None and not 0 <= s.vertex < vertex_count:
                raise PlanError(f"vertex {s.vertex} is out of range")

    def to_json_dict(self) -> dict:
        return {"steps": [s.to_json_dict() for s in self.steps]}

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: dict) -> MeasurementPlan:
        plan = cls([MeasurementStep.from_json_dict(s) for s in data["steps"]])
        plan.validate()
        return plan

    @classmethod
    def from_json(cls, text: str) -> MeasurementPlan:
        return cls.from_json_dict(json.loads(text))


def execute_plan(g: GraphState, plan: MeasurementPlan | Iterable[MeasurementStep]) -> None:
    """Apply every step of ``plan`` to ``g`` in order, enforcing rule preconditions.

    Raises InactiveVertexError / NotANeighborError if the plan would measure
    a retired vertex or use a detached special neighbor, so a compiled plan
    that executes cleanly is safe by construction.
    """
    for step in plan:
        if step.basis == "Z":
            g.measure_z(step.vertex)
        elif step.basis == "Y":
            g.measure_y(step.vertex)
        else:
            if step.special is not None and not g.is_active(step.special):
                raise InactiveVertexError(
                    f"special vertex {step.special} is no longer active"
                )
            if (
                step.special is not None
                and g.degree(step.vertex) > 0
                and not g.has_edge(step.vertex, step.special)
            ):
                raise NotANeighborError(
                    f"special {step.special} not adjacent to {step.vertex} at execution time"
                )
            g.measure_x(step.vertex, step.special)
