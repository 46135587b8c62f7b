"""JSON community documents, built-in example fixtures, and text formatting of values."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .core import Community, State, StateGrid, AgentSpec, as_fraction
from .expr import parse

EXAMPLES = ("sec-c", "sec-f", "sec-j")


class DocumentError(ValueError):
    pass


def fmt(value: Any) -> str:
    """Compact exact text for fractions, states and nested containers."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool) or value is None:
        return str(value).lower() if value is not None else "none"
    if isinstance(value, tuple) and value and all(isinstance(v, Fraction) for v in value):
        return "(" + ",".join(fmt(v) for v in value) + ")"
    if isinstance(value, (frozenset, set)):
        return "{" + ",".join(fmt(v) for v in sorted(value)) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(fmt(v) for v in value) + "]"
    return str(value)


def jsonable(value: Any) -> Any:
    """Fractions become strings, sets sorted lists, dict keys strings."""
    if isinstance(value, Fraction):
        return fmt(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return [jsonable(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


_STATE = re.compile(r"^\(?\s*([^()]*?)\s*\)?$")


def parse_state(text: str) -> State:
    m = _STATE.match(text.strip())
    if not m or not m.group(1):
        raise DocumentError(f"cannot read state {text!r}")
    try:
        return tuple(Fraction(part.strip()) for part in m.group(1).split(","))
    except ValueError as exc:
        raise DocumentError(f"cannot read state {text!r}: {exc}") from exc


@dataclass
class CommunityDocument:
    dimension: int
    axes: list[list[str]]
    agents: list[dict]  # {"id", "v", "p"}
    tolerance: str = "0"
    matrix: dict | None = None  # optional {"A": [[...]], "kappa": [...]}
    name: str | None = None
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "CommunityDocument":
        try:
            doc = cls(
                int(data["dimension"]),
                [[str(v) for v in axis] for axis in data["axes"]],
                [{"id": int(a["id"]), "v": str(a["v"]), "p": str(a["p"])} for a in data["agents"]],
                str(data.get("tolerance", "0")),
                data.get("matrix"),
                data.get("name"),
                list(data.get("notes", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed community document: {exc}") from exc
        doc.validate()
        return doc

    @classmethod
    def loads(cls, text: str) -> "CommunityDocument":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc

    def validate(self) -> None:
        if len(self.axes) != self.dimension:
            raise DocumentError(f"{len(self.axes)} axes given for dimension {self.dimension}")
        ids = [a["id"] for a in self.agents]
        if len(set(ids)) != len(ids):
            raise DocumentError(f"duplicate agent ids in {ids}")
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise DocumentError(f"agent ids must be 1..n, got {sorted(ids)}")

    def to_dict(self) -> dict:
        out: dict = {}
        if self.name:
            out["name"] = self.name
        out.update(dimension=self.dimension, axes=self.axes, agents=self.agents, tolerance=self.tolerance)
        if self.matrix is not None:
            out["matrix"] = self.matrix
        if self.notes:
            out["notes"] = self.notes
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def grid(self) -> StateGrid:
        try:
            return StateGrid(tuple(tuple(Fraction(v) for v in axis) for axis in self.axes))
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(str(exc)) from exc

    def community(self) -> Community:
        grid = self.grid()
        agents = sorted(self.agents, key=lambda a: a["id"])
        specs = tuple(
            AgentSpec(a["id"], parse(a["v"], self.dimension), parse(a["p"], self.dimension)) for a in agents
        )
        return Community(specs, grid, as_fraction(Fraction(self.tolerance)))

    def representation(self):
        from .representation import AffineRepresentation

        if self.matrix is None:
            raise DocumentError("document has no matrix block")
        A = [[Fraction(str(x)) for x in row] for row in self.matrix["A"]]
        kappa = [Fraction(str(x)) for x in self.matrix.get("kappa", [0] * len(A))]
        return AffineRepresentation.of(A, kappa)


def _levels(count: int) -> list[str]:
    """``count`` evenly spaced levels on [0, 1]."""
    if count < 2:
        raise DocumentError("need at least two levels")
    return [fmt(Fraction(k, count - 1)) for k in range(count)]


def example_document(name: str, levels: int | None = None) -> CommunityDocument:
    """Built-in fixtures: the four-agent line, the two-agent plane and the three-agent min example."""
    if name == "sec-c":
        axis = _levels(levels or 5)
        selfish_down = {"v": "-x1", "p": "x1"}
        selfish_up = {"v": "x1", "p": "-x1"}
        agents = [dict(id=k, **(selfish_down if k % 2 else selfish_up)) for k in range(1, 5)]
        return CommunityDocument(1, [axis], agents, name=name,
                                 notes=["agents 1 and 3 identical, agents 2 and 4 identical; interests opposed"])
    if name == "sec-f":
        axis = [str(k) for k in range(levels)] if levels else ["0", "1"]
        agents = [{"id": 1, "v": "x1", "p": "2*x1 - x2"}, {"id": 2, "v": "x2", "p": "2*x2 - x1"}]
        return CommunityDocument(2, [axis, list(axis)], agents, name=name,
                                 matrix={"A": [["2", "-1"], ["-1", "2"]], "kappa": ["0", "0"]})
    if name == "sec-j":
        axis = ["0", "1", "2", "3", "7"]
        agents = [
            {"id": 1, "v": "x1", "p": "min(x1/2, x2, x3)"},
            {"id": 2, "v": "x2", "p": "min(x2/2, x3, x1)"},
            {"id": 3, "v": "x3", "p": "min(x3/2, x1, x2)"},
        ]
        return CommunityDocument(3, [axis, list(axis), list(axis)], agents, name=name)
    raise DocumentError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")


def load_document(source: str) -> CommunityDocument:
    """Read a path, or ``example:<name>`` for a built-in fixture."""
    if source.startswith("example:"):
        return example_document(source.split(":", 1)[1])
    try:
        with open(source, encoding="utf-8") as fh:
            return CommunityDocument.loads(fh.read())
    except OSError as exc:
        raise DocumentError(f"cannot read {source}: {exc}") from exc


def document_for(c: Community, matrix: Sequence[Sequence[Fraction]] | None = None,
                 kappa: Sequence[Fraction] | None = None) -> CommunityDocument:
    agents = [{"id": a.id, "v": a.v_text, "p": a.p_text} for a in c.agents]
    axes = [[fmt(v) for v in axis] for axis in c.grid.axes]
    block = None
    if matrix is not None:
        block = {"A": [[fmt(x) for x in row] for row in matrix],
                 "kappa": [fmt(x) for x in (kappa or [Fraction(0)] * len(matrix))]}
    return CommunityDocument(c.grid.dimension, axes, agents, fmt(c.tolerance), block)
