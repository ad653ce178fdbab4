"""Exact-rational intervals, the event order, positions on the line and cliques.

The real line is never sampled. Given a set of intervals, every real point falls
into one of finitely many classes: left of everything, exactly on an endpoint
coordinate, strictly between two consecutive coordinates, or right of
everything. Those classes are the Positions of an IntervalLine, numbered by an
ordinal that increases left to right.
"""

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from batchcolor.core.errors import InstanceFormatError
from batchcolor.core.graph import Batch, BatchedGraphInstance, Graph
from batchcolor.utils.rationals import to_fraction, to_pair

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"
INSIDE = "inside"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True
    id: str = ""

    def __post_init__(self):
        try:
            lo, hi = to_fraction(self.lo), to_fraction(self.hi)
        except (TypeError, ValueError) as e:
            raise InstanceFormatError(f"interval {self.id!r}: {e}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo > hi or (lo == hi and not (self.lo_closed and self.hi_closed)):
            raise InstanceFormatError(f"interval {self.id!r} is empty: {self}")

    def __str__(self) -> str:
        return f"{'[' if self.lo_closed else '('}{self.lo},{self.hi}{']' if self.hi_closed else ')'}"

    def renamed(self, new_id: str) -> "Interval":
        return Interval(self.lo, self.hi, self.lo_closed, self.hi_closed, new_id)

    def contains_point(self, x: Fraction) -> bool:
        above = self.lo < x or (self.lo == x and self.lo_closed)
        below = x < self.hi or (x == self.hi and self.hi_closed)
        return above and below

    def overlaps(self, other: "Interval") -> bool:
        """Nonempty intersection, decided on the rationals."""
        if self.lo != other.lo:
            lo, lo_closed = max((self.lo, self.lo_closed), (other.lo, other.lo_closed), key=lambda e: e[0])
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi != other.hi:
            hi, hi_closed = min((self.hi, self.hi_closed), (other.hi, other.hi_closed), key=lambda e: e[0])
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return lo < hi or (lo == hi and lo_closed and hi_closed)

    def as_dict(self) -> Dict[str, object]:
        return {"lo": to_pair(self.lo), "hi": to_pair(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed, "id": self.id}


def closed(lo, hi, id: str) -> Interval:
    return Interval(lo, hi, True, True, id)


@dataclass(frozen=True)
class EventPoint:
    coordinate: Fraction
    side: str
    in_interval: bool
    owner: str

    @property
    def rank(self) -> int:
        # open right < closed left < closed right < open left, among equal coordinates
        if self.side == RIGHT:
            return 2 if self.in_interval else 0
        return 1 if self.in_interval else 3

    def sort_key(self) -> Tuple[Fraction, int, str]:
        return (self.coordinate, self.rank, self.owner)


def event_points(iv: Interval) -> Tuple[EventPoint, EventPoint]:
    return (EventPoint(iv.lo, LEFT, iv.lo_closed, iv.id), EventPoint(iv.hi, RIGHT, iv.hi_closed, iv.id))


@dataclass(frozen=True)
class EventOrder:
    """The fixed total order T over all endpoint instances."""

    events: Tuple[EventPoint, ...]
    _index: Dict[Tuple[str, str], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "_index", {(e.owner, e.side): i for i, e in enumerate(self.events)})

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def index_of(self, owner: str, side: str) -> int:
        return self._index[(owner, side)]

    def left_index(self, owner: str) -> int:
        return self._index[(owner, LEFT)]

    def right_index(self, owner: str) -> int:
        return self._index[(owner, RIGHT)]


def build_event_order(intervals: Iterable[Interval]) -> EventOrder:
    points = [p for iv in intervals for p in event_points(iv)]
    points.sort(key=EventPoint.sort_key)
    return EventOrder(tuple(points))


@dataclass(frozen=True, order=True)
class Position:
    """One class of real points on an IntervalLine, compared by ordinal."""

    ordinal: int
    kind: str = field(default="gap", compare=False)
    index: int = field(default=-1, compare=False)
    coordinate: Optional[Fraction] = field(default=None, compare=False)

    def as_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {"ordinal": self.ordinal, "kind": self.kind, "index": self.index}
        if self.coordinate is not None:
            data["at"] = to_pair(self.coordinate)
        return data


class IntervalLine:
    """Positions, containment and coverage for a fixed set of intervals."""

    def __init__(self, intervals: Sequence[Interval]):
        self.intervals = list(intervals)
        self.by_id = {iv.id: iv for iv in self.intervals}
        if len(self.by_id) != len(self.intervals):
            raise InstanceFormatError("interval ids must be unique")
        self.order = build_event_order(self.intervals)
        self.coords: List[Fraction] = sorted({e.coordinate for e in self.order})
        self._group = {c: g for g, c in enumerate(self.coords)}
        self._first_event: List[int] = []
        self._last_event: List[int] = []
        for i, e in enumerate(self.order):
            g = self._group[e.coordinate]
            if g == len(self._first_event):
                self._first_event.append(i)
                self._last_event.append(i)
            else:
                self._last_event[g] = i
        self.size = 2 * len(self.coords) + 1
        self.spans: Dict[str, Tuple[int, int]] = {iv.id: self._span(iv) for iv in self.intervals}

    def _span(self, iv: Interval) -> Tuple[int, int]:
        g_lo, g_hi = self._group[iv.lo], self._group[iv.hi]
        first = 1 + 2 * g_lo if iv.lo_closed else 2 + 2 * g_lo
        last = 1 + 2 * g_hi if iv.hi_closed else 2 * g_hi
        return first, last

    def point_ordinal(self, x: Fraction) -> int:
        return 1 + 2 * self._group[to_fraction(x)]

    def position(self, ordinal: int) -> Position:
        if not 0 <= ordinal < self.size:
            raise IndexError(f"ordinal {ordinal} outside the line")
        if ordinal == 0:
            return Position(0, "before_all", -1)
        if ordinal == self.size - 1:
            return Position(ordinal, "after_all", len(self.order) - 1)
        g, odd = divmod(ordinal - 1, 2)
        if odd == 0:
            return Position(ordinal, "at_event", self._first_event[g], self.coords[g])
        return Position(ordinal, "gap", self._last_event[g])

    def positions(self) -> List[Position]:
        return [self.position(o) for o in range(self.size)]

    def contains(self, interval_id: str, where) -> bool:
        first, last = self.spans[interval_id]
        o = _ordinal(where)
        return first <= o <= last

    def side_of(self, interval_id: str, where) -> str:
        first, last = self.spans[interval_id]
        o = _ordinal(where)
        if o < first:
            return LEFT
        if o > last:
            return RIGHT
        return INSIDE

    def coverage(self, ids: Optional[Iterable[str]] = None) -> List[int]:
        """Number of the given intervals containing each ordinal."""
        diff = [0] * (self.size + 1)
        for i in (self.spans if ids is None else ids):
            first, last = self.spans[i]
            diff[first] += 1
            diff[last + 1] -= 1
        counts, running = [], 0
        for o in range(self.size):
            running += diff[o]
            counts.append(running)
        return counts

    def active_sets(self, ids: Optional[Iterable[str]] = None) -> List[FrozenSet[str]]:
        starts: Dict[int, List[str]] = {}
        ends: Dict[int, List[str]] = {}
        for i in (self.spans if ids is None else ids):
            first, last = self.spans[i]
            starts.setdefault(first, []).append(i)
            ends.setdefault(last, []).append(i)
        active: set = set()
        sets = []
        for o in range(self.size):
            active.update(starts.get(o, ()))
            sets.append(frozenset(active))
            active.difference_update(ends.get(o, ()))
        return sets

    def max_coverage(self, ids: Optional[Iterable[str]] = None) -> int:
        return max(self.coverage(ids), default=0)

    def maximal_cliques(self, ids: Optional[Iterable[str]] = None) -> List["MaximalClique"]:
        """Maximal cliques of the given intervals, left to right by clique point."""
        sets = self.active_sets(ids)
        runs: List[Tuple[int, FrozenSet[str]]] = []
        for o, s in enumerate(sets):
            if not runs or runs[-1][1] != s:
                runs.append((o, s))
        cliques = []
        for r, (start, members) in enumerate(runs):
            if not members:
                continue
            if r > 0 and runs[r - 1][1] >= members:
                continue
            if r + 1 < len(runs) and runs[r + 1][1] >= members:
                continue
            cliques.append(self._clique(members, start))
        return cliques

    def _clique(self, members: FrozenSet[str], start: int) -> "MaximalClique":
        by_left = sorted(members, key=self.order.left_index)
        by_right = sorted(members, key=self.order.right_index, reverse=True)
        return MaximalClique(
            members=members,
            clique_point=self.position(start),
            size=len(members),
            left_order={v: r for r, v in enumerate(by_left, start=1)},
            right_order={v: r for r, v in enumerate(by_right, start=1)},
        )

    def representative_points(self, clique_points: Sequence = ()) -> List[Position]:
        """One position per class of equal (clique point side, interval side) signatures."""
        cuts = sorted({_ordinal(p) for p in clique_points})
        candidates = {0}
        for first, last in self.spans.values():
            candidates.update((first, last + 1))
        for c in cuts:
            candidates.update((c, c + 1))
        reps: List[Position] = []
        previous = None
        for o in sorted(x for x in candidates if 0 <= x < self.size):
            sig = self._signature(o, cuts)
            if sig != previous:
                reps.append(self.position(o))
                previous = sig
        return reps

    def _signature(self, o: int, cuts: Sequence[int]) -> Tuple:
        return (
            tuple((o > c) - (o < c) for c in cuts),
            tuple(self.side_of(i, o) for i in self.spans),
        )


def _ordinal(where) -> int:
    return where.ordinal if isinstance(where, Position) else int(where)


@dataclass(frozen=True)
class MaximalClique:
    members: FrozenSet[str]
    clique_point: Position
    size: int
    left_order: Dict[str, int]
    right_order: Dict[str, int]

    def by_left(self) -> List[str]:
        return sorted(self.members, key=self.left_order.__getitem__)

    def by_right(self) -> List[str]:
        return sorted(self.members, key=self.right_order.__getitem__)


def interval_graph(intervals: Sequence[Interval]) -> Graph:
    line = IntervalLine(intervals)
    edges = []
    active: List[str] = []
    for iv in sorted(intervals, key=lambda iv: line.spans[iv.id][0]):
        first = line.spans[iv.id][0]
        active = [a for a in active if line.spans[a][1] >= first]
        edges.extend((a, iv.id) for a in active)
        active.append(iv.id)
    return Graph.from_edges([iv.id for iv in intervals], edges)


def max_clique_size(intervals: Sequence[Interval]) -> int:
    if not intervals:
        return 0
    return IntervalLine(intervals).max_coverage()


def maximal_cliques(intervals: Sequence[Interval]) -> List[MaximalClique]:
    return IntervalLine(intervals).maximal_cliques()


def representative_points(intervals: Sequence[Interval], clique_points: Sequence = ()) -> List[Position]:
    """Clique points are Positions (or ordinals) of IntervalLine(intervals)."""
    return IntervalLine(intervals).representative_points(clique_points)


def interval_sweep_coloring(intervals: Sequence[Interval]) -> Dict[str, int]:
    """Optimal coloring of an interval set: left-endpoint sweep reusing the least released color."""
    line = IntervalLine(intervals)
    starts: Dict[int, List[str]] = {}
    ends: Dict[int, List[str]] = {}
    for i, (first, last) in line.spans.items():
        starts.setdefault(first, []).append(i)
        ends.setdefault(last, []).append(i)
    colors: Dict[str, int] = {}
    free: List[int] = []
    top = 0
    for o in range(line.size):
        for i in sorted(starts.get(o, ()), key=line.order.left_index):
            if free:
                colors[i] = heapq.heappop(free)
            else:
                top += 1
                colors[i] = top
        for i in ends.get(o, ()):
            heapq.heappush(free, colors[i])
    return colors


def interval_instance(batches: Sequence[Sequence[Interval]]) -> BatchedGraphInstance:
    """Batched instance carrying both the intervals and their induced edges."""
    seen: List[Interval] = []
    out = []
    for batch in batches:
        batch = list(batch)
        merged = seen + batch
        new_ids = {iv.id for iv in batch}
        g = interval_graph(merged)
        edges = [(u, v) for u, v in g.edges() if u in new_ids or v in new_ids]
        out.append(Batch(tuple(iv.id for iv in batch), tuple(edges), tuple(batch)))
        seen = merged
    return BatchedGraphInstance(tuple(out))
