"""Graphs, colorings and batched instances.

Vertex ids are opaque strings. Everything here is immutable once built so graphs
and colorings can be shared between runs and worker processes.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from batchcolor.core.errors import InconsistentInstance

if TYPE_CHECKING:
    from batchcolor.core.intervals import Interval

Edge = Tuple[str, str]

OBJECTIVES = ("colors", "sum")


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    adjacency: Mapping

    def __post_init__(self):
        adjacency = {v: frozenset(self.adjacency.get(v, ())) for v in self.vertices}
        if len(adjacency) != len(self.vertices):
            raise InconsistentInstance("duplicate vertex ids in graph")
        for v, neighbors in adjacency.items():
            if v in neighbors:
                raise InconsistentInstance(f"self-loop on {v}")
            for u in neighbors:
                if u not in adjacency or v not in adjacency[u]:
                    raise InconsistentInstance(f"asymmetric adjacency between {v} and {u}")
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "adjacency", MappingProxyType(adjacency))

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Edge] = ()) -> "Graph":
        order = list(dict.fromkeys(vertices))
        adjacency: Dict[str, Set[str]] = {v: set() for v in order}
        for u, v in edges:
            if u not in adjacency or v not in adjacency:
                raise InconsistentInstance(f"edge ({u}, {v}) references an unknown vertex")
            if u == v:
                raise InconsistentInstance(f"self-loop on {u}")
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(tuple(order), adjacency)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        return cls.from_edges([str(v) for v in g.nodes], [(str(u), str(v)) for u, v in g.edges])

    @property
    def n(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: str) -> FrozenSet[str]:
        return self.adjacency[v]

    def degree(self, v: str) -> int:
        return len(self.adjacency[v])

    def edges(self) -> List[Edge]:
        index = self.index()
        return [(u, v) for u in self.vertices for v in self.adjacency[u] if index[u] < index[v]]

    def index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def induced(self, subset: Iterable[str]) -> "Graph":
        keep = set(subset)
        order = [v for v in self.vertices if v in keep]
        return Graph(tuple(order), {v: self.adjacency[v] & keep for v in order})

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges())
        return g


@dataclass(frozen=True, eq=False)
class Coloring(Mapping):
    """Vertex id -> positive integer color."""

    assignment: Mapping = field(default_factory=dict)

    def __post_init__(self):
        colors = dict(self.assignment)
        for v, c in colors.items():
            if isinstance(c, bool) or not isinstance(c, int) or c < 1:
                raise ValueError(f"color of {v} must be a positive integer, got {c!r}")
        object.__setattr__(self, "assignment", MappingProxyType(colors))

    def __getitem__(self, v: str) -> int:
        return self.assignment[v]

    def __iter__(self) -> Iterator[str]:
        return iter(self.assignment)

    def __len__(self) -> int:
        return len(self.assignment)

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return dict(self.assignment) == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Coloring({dict(self.assignment)!r})"

    @property
    def max_color(self) -> int:
        return max(self.assignment.values(), default=0)

    @property
    def color_sum(self) -> int:
        return sum(self.assignment.values())

    @property
    def distinct_colors(self) -> FrozenSet[int]:
        return frozenset(self.assignment.values())

    def cost(self, objective: str) -> int:
        if objective == "colors":
            return self.max_color
        if objective == "sum":
            return self.color_sum
        raise ValueError(f"unknown objective {objective!r}")

    def restrict(self, vertices: Iterable[str]) -> "Coloring":
        return Coloring({v: self.assignment[v] for v in vertices if v in self.assignment})

    def merged(self, other: Mapping) -> "Coloring":
        colors = dict(self.assignment)
        colors.update(other)
        return Coloring(colors)


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    monochromatic_edges: Tuple[Edge, ...] = ()
    uncolored: Tuple[str, ...] = ()
    invalid_colors: Tuple[str, ...] = ()
    unknown_vertices: Tuple[str, ...] = ()

    def as_dict(self) -> Dict[str, object]:
        return {
            "ok": self.ok,
            "monochromatic_edges": [list(e) for e in self.monochromatic_edges],
            "uncolored": list(self.uncolored),
            "invalid_colors": list(self.invalid_colors),
            "unknown_vertices": list(self.unknown_vertices),
        }


def validate_coloring(g: Graph, colors: Mapping) -> ValidationResult:
    """Check that every vertex has a positive integer color and no edge is monochromatic."""
    uncolored = tuple(v for v in g.vertices if v not in colors)
    invalid = tuple(
        v for v in g.vertices
        if v in colors and (isinstance(colors[v], bool) or not isinstance(colors[v], int) or colors[v] < 1)
    )
    unknown = tuple(sorted(v for v in colors if v not in g.adjacency))
    clashes = tuple(
        (u, v) for u, v in g.edges()
        if u in colors and v in colors and colors[u] == colors[v]
    )
    ok = not (uncolored or invalid or unknown or clashes)
    return ValidationResult(ok, clashes, uncolored, invalid, unknown)


def first_fit(g: Graph, order: Sequence[str]) -> Coloring:
    """Greedy coloring: each vertex takes the least color absent among colored neighbors."""
    if len(order) != g.n or set(order) != set(g.vertices):
        raise ValueError("order must be a permutation of the graph's vertices")
    colors: Dict[str, int] = {}
    for v in order:
        colors[v] = least_free_color(colors.get(u) for u in g.adjacency[v])
    return Coloring(colors)


def least_free_color(neighbor_colors: Iterable[Optional[int]]) -> int:
    used = {c for c in neighbor_colors if c is not None}
    c = 1
    while c in used:
        c += 1
    return c


@dataclass(frozen=True)
class Batch:
    """New vertices plus every edge joining them to current or earlier vertices."""

    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()
    intervals: Optional[Tuple["Interval", ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((u, v) for u, v in self.edges))
        if self.intervals is not None:
            object.__setattr__(self, "intervals", tuple(self.intervals))


@dataclass(frozen=True)
class BatchedGraphInstance:
    batches: Tuple[Batch, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "batches", tuple(self.batches))

    @property
    def k(self) -> int:
        return len(self.batches)

    @property
    def kind(self) -> str:
        if self.batches and all(b.intervals is not None for b in self.batches):
            return "intervals"
        return "graph"

    def validate(self) -> None:
        """Raise InconsistentInstance unless every edge points back to the same or an earlier batch."""
        seen: Set[str] = set()
        for i, batch in enumerate(self.batches, start=1):
            check_batch(batch, seen, i)
            seen.update(batch.vertices)

    def vertices(self) -> List[str]:
        return [v for b in self.batches for v in b.vertices]

    def graph(self, upto: Optional[int] = None) -> Graph:
        batches = self.batches if upto is None else self.batches[:upto]
        return Graph.from_edges(
            [v for b in batches for v in b.vertices],
            [e for b in batches for e in b.edges],
        )

    def batch_of(self) -> Dict[str, int]:
        return {v: i for i, b in enumerate(self.batches, start=1) for v in b.vertices}

    def intervals(self) -> List["Interval"]:
        return [iv for b in self.batches for iv in (b.intervals or ())]


def check_batch(batch: Batch, known: Set[str], index: int) -> None:
    new = set(batch.vertices)
    if len(new) != len(batch.vertices):
        raise InconsistentInstance(f"batch {index} repeats a vertex id")
    reused = new & known
    if reused:
        raise InconsistentInstance(f"batch {index} reuses ids {sorted(reused)[:5]}")
    for u, v in batch.edges:
        if u == v:
            raise InconsistentInstance(f"batch {index} has a self-loop on {u}")
        if u not in new and v not in new:
            raise InconsistentInstance(f"batch {index} edge ({u}, {v}) touches no new vertex")
        for w in (u, v):
            if w not in new and w not in known:
                raise InconsistentInstance(f"batch {index} edge ({u}, {v}) references unknown {w}")
    if batch.intervals is not None:
        ids = [iv.id for iv in batch.intervals]
        if sorted(ids) != sorted(batch.vertices):
            raise InconsistentInstance(f"batch {index} intervals do not match its vertices")
