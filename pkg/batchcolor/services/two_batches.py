"""TwoBatches: coloring two batches of intervals with at most floor(3w/2) colors.

The first batch is colored by a stack sweep over the event order. The second
batch is split into chains (color classes of an optimal coloring) and colored
two chains per iteration: one chain reuses the color of a first-batch interval
that is retired in its region, the other gets a fresh color w + i. Regions are
the stretches between active clique points; an uncolored second-batch interval
never crosses a region boundary, so every region is handled on its own.
"""

import bisect
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

from batchcolor.core.config import get_settings
from batchcolor.core.errors import InconsistentInstance, InvariantViolation, ParameterError, UncoveredPoint
from batchcolor.core.graph import Batch, Coloring
from batchcolor.core.intervals import (LEFT, Interval, IntervalLine, MaximalClique, build_event_order,
                                       max_clique_size)
from batchcolor.services.engine import OnlineColorer

logger = logging.getLogger(__name__)

DUMMY_LEFT = "__dummy_left_"
DUMMY_RIGHT = "__dummy_right_"


def stack_coloring(intervals: Sequence[Interval], depth: int) -> Dict[str, int]:
    """Left endpoints pop the most recently released color, right endpoints push it back."""
    stack = list(range(depth, 0, -1))
    colors: Dict[str, int] = {}
    for e in build_event_order(intervals):
        if e.side == LEFT:
            if not stack:
                raise InvariantViolation("color stack popped while empty", {"interval": e.owner})
            colors[e.owner] = stack.pop()
        else:
            stack.append(colors[e.owner])
    return colors


def color_first_batch(intervals: Sequence[Interval]) -> Dict[str, int]:
    return stack_coloring(intervals, max_clique_size(intervals))


@dataclass
class DummyCliques:
    left: List[Interval]
    right: List[Interval]
    colors: Dict[str, int]


def install_dummy_cliques(batch1: Sequence[Interval], omega: int,
                          batch2: Sequence[Interval] = ()) -> DummyCliques:
    """Two size-omega cliques of first-batch dummies, left and right of every real endpoint.

    The left clique is nested so the stack leaves it in its initial order;
    the right one is omega copies of one interval.
    """
    coords = [x for iv in list(batch1) + list(batch2) for x in (iv.lo, iv.hi)]
    base, top = (min(coords), max(coords)) if coords else (0, 0)
    left = [Interval(base - 2 * omega - 1 + c, base - c, True, True, f"{DUMMY_LEFT}{c:04d}")
            for c in range(1, omega + 1)]
    right = [Interval(top + 1, top + 2, True, True, f"{DUMMY_RIGHT}{c:04d}") for c in range(1, omega + 1)]
    taken = {iv.id for iv in batch1} | {iv.id for iv in batch2}
    if taken & {iv.id for iv in left + right}:
        raise InconsistentInstance("interval ids collide with dummy ids")
    colors = stack_coloring(left + list(batch1) + right, omega)
    return DummyCliques(left, right, colors)


def partition_into_chains(intervals: Sequence[Interval], omega: int,
                          line: Optional[IntervalLine] = None) -> List[List[str]]:
    """First-Fit over left endpoints; returns exactly omega chains, empty ones last."""
    line = line or IntervalLine(intervals)
    chains: List[List[str]] = []
    ends: List[int] = []
    for iv in sorted(intervals, key=lambda iv: line.order.left_index(iv.id)):
        first, last = line.spans[iv.id]
        for j, end in enumerate(ends):
            if end < first:
                chains[j].append(iv.id)
                ends[j] = last
                break
        else:
            chains.append([iv.id])
            ends.append(last)
    if len(chains) > omega:
        raise InvariantViolation(f"second batch needs {len(chains)} chains but w={omega}")
    return chains + [[] for _ in range(omega - len(chains))]


@dataclass
class Fragment:
    """Piece of a first-batch interval between active clique points it contains."""

    parent: str
    lo: int
    hi: int
    color: int
    owns_left: bool = True
    owns_right: bool = True
    lo_cut: bool = False
    hi_cut: bool = False
    processed: bool = False

    @property
    def eligible(self) -> bool:
        return self.owns_left or self.owns_right

    def contains(self, ordinal: int) -> bool:
        return self.lo <= ordinal <= self.hi

    def split(self, at: int) -> Tuple["Fragment", "Fragment"]:
        left = Fragment(self.parent, self.lo, at, self.color, self.owns_left, False,
                        self.lo_cut, True, self.processed)
        right = Fragment(self.parent, at, self.hi, self.color, False, self.owns_right,
                         True, self.hi_cut, self.processed)
        return left, right

    def as_dict(self) -> Dict[str, Any]:
        return {"parent": self.parent, "span": [self.lo, self.hi], "color": self.color,
                "processed": self.processed}


@dataclass
class Region:
    lo: int
    hi: int
    chains: List[List[str]]
    points: List[int]
    stalled: bool = False

    def holds(self, frag: Fragment) -> bool:
        left_ok = self.lo < frag.lo or (frag.lo_cut and frag.lo == self.lo)
        right_ok = frag.hi < self.hi or (frag.hi_cut and frag.hi == self.hi)
        return left_ok and right_ok

    def meets(self, span: Tuple[int, int]) -> bool:
        return span[0] <= self.hi and span[1] >= self.lo


@dataclass
class InvariantReport:
    ok: bool
    i: int
    clause: Optional[str] = None
    witness: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "i": self.i, "clause": self.clause, "witness": self.witness}


class SecondBatchState:
    """Mutable state of the second-batch coloring loop."""

    def __init__(self, batch1: Sequence[Interval], colors1: Dict[str, int], batch2: Sequence[Interval],
                 omega: Optional[int] = None):
        self.batch1 = list(batch1)
        self.batch2 = list(batch2)
        self.omega = omega if omega is not None else max_clique_size(self.batch1 + self.batch2)
        self.dummies = install_dummy_cliques(self.batch1, self.omega, self.batch2)
        drift = {v: c for v, c in colors1.items() if self.dummies.colors.get(v) != c}
        if drift:
            raise InvariantViolation("dummy cliques changed the first-batch colors",
                                     {"intervals": sorted(drift)[:10]})
        self.first_colors = {**self.dummies.colors, **colors1}
        first = self.dummies.left + self.batch1 + self.dummies.right
        self.first_ids = [iv.id for iv in first]
        self.second_ids = [iv.id for iv in self.batch2]
        self.line = IntervalLine(first + self.batch2)
        self.order = self.line.order
        self.cliques: List[MaximalClique] = self.line.maximal_cliques(self.first_ids)
        clique_points = [c.clique_point for c in self.cliques]
        self.points = [p.ordinal for p in self.line.representative_points(clique_points)]
        self.depth = self.line.coverage(self.second_ids)
        self.fragments = [Fragment(v, *self.line.spans[v], self.first_colors[v]) for v in self.first_ids]
        self.i = 0
        self.active: List[MaximalClique] = []
        self.colored: Set[str] = set()
        self.colors2: Dict[str, int] = {}
        chains = partition_into_chains(self.batch2, self.omega, self.line)
        self.regions = [Region(0, self.line.size - 1, chains, list(self.points))]
        self.swaps = 0
        self.crossovers = 0
        self.iterations: List[Dict[str, Any]] = []
        self.check = get_settings().check_invariants

    # bookkeeping

    def first_event(self, frag: Fragment) -> int:
        if frag.owns_left:
            return self.order.left_index(frag.parent)
        return self.order.right_index(frag.parent)

    def last_event(self, frag: Fragment) -> int:
        if frag.owns_right:
            return self.order.right_index(frag.parent)
        return self.order.left_index(frag.parent)

    def unprocessed_in(self, region: Region) -> List[Fragment]:
        return [f for f in self.fragments if not f.processed and region.holds(f)]

    def colored_coverage(self) -> List[int]:
        return self.line.coverage(self.colored)

    def activate(self) -> List[MaximalClique]:
        """Activate cliques of size w - i + 1; cut fragments and split regions at their points."""
        size = self.omega - self.i + 1
        new = [c for c in self.cliques if c.size == size]
        if not new:
            return new
        cuts = sorted(c.clique_point.ordinal for c in new)
        for at in cuts:
            pieces: List[Fragment] = []
            for frag in self.fragments:
                pieces.extend(frag.split(at) if frag.contains(at) else (frag,))
            self.fragments = pieces
        regions: List[Region] = []
        for region in self.regions:
            inside = [c for c in cuts if region.lo < c < region.hi]
            regions.extend(self._split(region, inside) if inside else (region,))
        self.regions = regions
        self.active.extend(new)
        self.active.sort(key=lambda c: c.clique_point.ordinal)
        return new

    def _split(self, region: Region, cuts: List[int]) -> List[Region]:
        bounds = [region.lo] + cuts + [region.hi]
        subs = [Region(a, b, [[] for _ in region.chains], [p for p in region.points if a <= p <= b],
                       region.stalled)
                for a, b in zip(bounds, bounds[1:])]
        for j, chain in enumerate(region.chains):
            for v in chain:
                first, last = self.line.spans[v]
                crossed = [c for c in cuts if first <= c <= last]
                if crossed:
                    raise InvariantViolation(
                        "uncolored second-batch interval contains an active clique point",
                        {"interval": v, "clique_point": self.line.position(crossed[0]).as_dict(), "i": self.i})
                home = next(s for s in subs if s.lo <= first and last <= s.hi)
                home.chains[j].append(v)
        return subs

    # the loop

    def run(self, check: bool = True) -> Dict[str, int]:
        self.check = check
        if not self.batch2:
            return {}
        if check:
            self._checkpoint()
        while self.i < self.omega // 2:
            self.i += 1
            new = self.activate()
            swaps, crossovers = self.swaps, self.crossovers
            for region in self.regions:
                self._color_two_chains(region)
            self.iterations.append({
                "i": self.i,
                "activated": len(new),
                "regions": len(self.regions),
                "stalled": sum(r.stalled for r in self.regions),
                "swaps": self.swaps - swaps,
                "crossovers": self.crossovers - crossovers,
            })
            logger.debug(f"two-batches: iteration {self.i}, {len(self.regions)} regions, "
                         f"{self.crossovers - crossovers} crossovers")
            if check:
                self._checkpoint()
        self._color_leftovers()
        missing = [v for v in self.second_ids if v not in self.colors2]
        if missing:
            raise InvariantViolation("second-batch intervals left uncolored", {"intervals": missing[:10]})
        return dict(self.colors2)

    def _checkpoint(self) -> None:
        report = check_loop_invariant(self)
        if self.iterations:
            self.iterations[-1]["invariant"] = report.as_dict()
        if not report.ok:
            raise InvariantViolation(f"invariant clause {report.clause} failed at i={report.i}", report.as_dict())

    def _color_two_chains(self, region: Region) -> None:
        if not any(region.chains):
            region.stalled = True
            return
        c1, c2 = create_chains(region, self)
        frags = [f for f in self.unprocessed_in(region) if f.eligible]
        if not frags:
            raise InvariantViolation("region has chains left but no unprocessed first-batch interval",
                                     {"region": [region.lo, region.hi], "i": self.i})
        left = min(frags, key=self.first_event)
        right = max(frags, key=self.last_event)
        left.processed = True
        right.processed = True
        self._paint(region.chains[c1], left.color)
        self._paint(region.chains[c2], self.omega + self.i)
        for j in sorted((c1, c2), reverse=True):
            del region.chains[j]

    def _color_leftovers(self) -> None:
        for region in self.regions:
            rest = [c for c in region.chains if c]
            if not rest:
                continue
            if len(rest) > 1:
                raise InvariantViolation("more than one chain left in a region",
                                         {"region": [region.lo, region.hi], "chains": len(rest)})
            frags = [f for f in self.unprocessed_in(region) if f.eligible]
            if not frags:
                raise InvariantViolation("no first-batch color left for the last chain",
                                         {"region": [region.lo, region.hi]})
            chosen = min(frags, key=self.first_event)
            chosen.processed = True
            self._paint(rest[0], chosen.color)
            region.chains = []

    def _paint(self, chain: List[str], color: int) -> None:
        for v in chain:
            self.colors2[v] = color
            self.colored.add(v)


def overlapping_pair(state: SecondBatchState, chain: List[str]) -> Optional[Tuple[str, str]]:
    spans = state.line.spans
    ordered = sorted(chain, key=lambda v: spans[v][0])
    for a, b in zip(ordered, ordered[1:]):
        if spans[b][0] <= spans[a][1]:
            return a, b
    return None


def _chain_hits(state: SecondBatchState, chain: List[str], points: List[int]) -> Set[int]:
    hits: Set[int] = set()
    for v in chain:
        first, last = state.line.spans[v]
        lo = bisect.bisect_left(points, first)
        hi = bisect.bisect_right(points, last)
        hits.update(points[lo:hi])
    return hits


def create_chains(region: Region, state: SecondBatchState) -> Tuple[int, int]:
    """Pick two chains of the region that cover every representative point, crossing chains over as needed.

    Returns indices into region.chains; region.chains is modified in place.
    """
    chains = region.chains
    spans = state.line.spans
    everything = [v for chain in chains for v in chain]
    if not everything or len(chains) < 2:
        raise InvariantViolation("chain creation needs a nonempty chain and a partner",
                                 {"region": [region.lo, region.hi], "chains": len(chains)})
    leftmost = min(everything, key=state.order.left_index)
    c1 = next(j for j, chain in enumerate(chains) if leftmost in chain)
    c2 = next(j for j in range(len(chains)) if j != c1)
    base = state.colored_coverage()
    points = region.points

    for _ in range(len(points) + 2):
        h1, h2 = _chain_hits(state, chains[c1], points), _chain_hits(state, chains[c2], points)
        uncovered = [p for p in points
                     if base[p] + (p in h1) + (p in h2) < min(state.depth[p], state.i)]
        if not uncovered:
            return c1, c2
        p = uncovered[0]
        c3 = next((j for j in range(len(chains))
                   if j not in (c1, c2) and p in _chain_hits(state, chains[j], [p])), None)
        if c3 is None:
            raise UncoveredPoint("uncovered point lies in no remaining chain",
                                 {"point": state.line.position(p).as_dict(), "i": state.i})
        h3 = _chain_hits(state, chains[c3], points)
        violators = [q for q in points if q < p and not (q in h3 or (q in h1 and q in h2))]
        if not violators:
            c2 = c3
            state.swaps += 1
            continue
        q = violators[-1]
        partner = c2 if q not in h2 else c1
        head = [v for v in chains[partner] if spans[v][0] <= q]
        tail = [v for v in chains[partner] if spans[v][0] > q]
        head3 = [v for v in chains[c3] if spans[v][0] <= q]
        tail3 = [v for v in chains[c3] if spans[v][0] > q]
        chains[partner] = head + tail3
        chains[c3] = head3 + tail
        state.crossovers += 1
        logger.debug(f"crossover of chains {partner} and {c3} at ordinal {q}")
        if state.check:
            for j in (partner, c3):
                pair = overlapping_pair(state, chains[j])
                if pair:
                    raise InvariantViolation("crossover left two overlapping intervals in a chain",
                                             {"intervals": list(pair), "at": q, "i": state.i})
    raise InvariantViolation("chain creation did not converge", {"region": [region.lo, region.hi], "i": state.i})


def check_loop_invariant(state: SecondBatchState) -> InvariantReport:
    """Evaluate the loop invariants and chain disjointness; the first failing clause is reported with a witness."""
    i, omega = state.i, state.omega
    covered = state.colored_coverage()
    for p in state.points:
        need = min(state.depth[p], i)
        if covered[p] < need:
            return InvariantReport(False, i, "coverage", {
                "point": state.line.position(p).as_dict(), "depth": state.depth[p], "covered": covered[p],
            })

    for region in state.regions:
        palette: Dict[int, str] = {}
        for frag in state.unprocessed_in(region):
            palette.setdefault(frag.color, frag.parent)
        for v in state.colored:
            color = state.colors2[v]
            if color in palette and region.meets(state.line.spans[v]):
                return InvariantReport(False, i, "fragment-color", {
                    "interval": v, "fragment": palette[color], "color": color, "region": [region.lo, region.hi],
                })

    for clique in state.active:
        at = clique.clique_point.ordinal
        for region in state.regions:
            if region.stalled or at not in (region.lo, region.hi):
                continue
            count = sum(1 for f in state.unprocessed_in(region) if f.contains(at))
            if count != omega - i:
                return InvariantReport(False, i, "clique-count", {
                    "clique_point": clique.clique_point.as_dict(), "region": [region.lo, region.hi],
                    "unprocessed": count, "expected": omega - i,
                })

    for region in state.regions:
        live = sum(1 for c in region.chains if c)
        if live > omega - 2 * i:
            return InvariantReport(False, i, "chain-count", {"region": [region.lo, region.hi], "chains": live})
    for region in state.regions:
        for chain in region.chains:
            pair = overlapping_pair(state, chain)
            if pair:
                return InvariantReport(False, i, "chain-overlap", {"region": [region.lo, region.hi],
                                                                   "intervals": list(pair)})
    return InvariantReport(True, i)


def color_second_batch(batch1: Sequence[Interval], colors1: Dict[str, int], batch2: Sequence[Interval],
                       check: Optional[bool] = None) -> Coloring:
    check = get_settings().check_invariants if check is None else check
    return Coloring(SecondBatchState(batch1, colors1, batch2).run(check))


def first_batch_span_colors(batch1: Sequence[Interval], colors: Dict[str, int]) -> List[Dict[str, Any]]:
    """Check that first-batch colors between two cliques come from the rightmost-right members.

    For a maximal clique L, its member x of right rank h, the first clique R of
    size >= h to the right and its member y of left rank h: every interval
    meeting the stretch strictly between x's right endpoint and y's left
    endpoint has a color of one of L's h - 1 rightmost-right members.
    Returns the violations found.
    """
    line = IntervalLine(batch1)
    order = line.order
    cliques = line.maximal_cliques()
    violations = []
    for a, clique in enumerate(cliques):
        ranked = clique.by_right()
        for h in range(1, clique.size + 1):
            right_side = next((c for c in cliques[a + 1:] if c.size >= h), None)
            if right_side is None:
                continue
            x = ranked[h - 1]
            y = right_side.by_left()[h - 1]
            p_l, p_r = order.right_index(x), order.left_index(y)
            x_l, x_r = line.by_id[x].hi, line.by_id[y].lo
            between = {e.owner for e in order.events[p_l + 1:p_r]} if p_l < p_r else set()
            if x_l < x_r:
                gap = Interval(x_l, x_r, False, False, "__gap")
                between.update(iv.id for iv in batch1 if iv.lo < iv.hi and iv.overlaps(gap))
            allowed = {colors[v] for v in ranked[:h - 1]}
            bad = sorted(v for v in between if colors[v] not in allowed)
            if bad:
                violations.append({"clique": sorted(clique.members), "h": h, "intervals": bad})
    return violations


class TwoBatchesColorer(OnlineColorer):
    name = "two-batches"
    modes = ("intervals",)

    def start(self, k: Optional[int] = None) -> None:
        super().start(k)
        self.first: List[Interval] = []
        self.first_colors: Dict[str, int] = {}
        self.state: Optional[SecondBatchState] = None

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        if batch.intervals is None:
            raise ParameterError("two-batches needs the interval representation")
        if self.batch_index == 1:
            self.first = list(batch.intervals)
            self.first_colors = color_first_batch(self.first)
            return dict(self.first_colors)
        if self.batch_index == 2:
            self.state = SecondBatchState(self.first, self.first_colors, list(batch.intervals))
            return self.state.run(get_settings().check_invariants)
        raise ParameterError("two-batches colors exactly two batches")

    def diagnostics(self) -> List[Dict[str, Any]]:
        return list(self.state.iterations) if self.state else []
