"""Two-batch interval adversaries, with and without a revealed representation."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from batchcolor.core.config import get_settings
from batchcolor.core.errors import InvariantViolation, ParameterError
from batchcolor.core.graph import Batch
from batchcolor.core.intervals import Interval, closed, interval_graph, interval_sweep_coloring
from batchcolor.models.schemas import GuaranteeCheck
from batchcolor.services.engine import Adversary

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliqueColorRecord:
    index: int
    ids: Tuple[str, ...]
    colors: FrozenSet[int]


def record_cliques(cliques: Sequence[Sequence[str]], coloring: Mapping[str, int]) -> List[CliqueColorRecord]:
    records = []
    for index, ids in enumerate(cliques):
        colors = frozenset(coloring[v] for v in ids)
        if len(colors) != len(ids):
            raise InvariantViolation(f"clique {index} repeats a color", {"ids": list(ids)})
        records.append(CliqueColorRecord(index, tuple(ids), colors))
    return records


def find_twins(records: Sequence[CliqueColorRecord]) -> Tuple[CliqueColorRecord, CliqueColorRecord]:
    """First pair of cliques colored with the same color set, in emission order."""
    seen: Dict[FrozenSet[int], CliqueColorRecord] = {}
    for rec in records:
        if rec.colors in seen:
            return seen[rec.colors], rec
        seen[rec.colors] = rec
    raise InvariantViolation("no two cliques share a color set", {"cliques": len(records)})


class _IntervalAdversary(Adversary):
    mode = "graph"
    graph_class = "interval"

    def __init__(self, q: int):
        super().__init__(2)
        self.q = q
        self.placed: Dict[str, Interval] = {}
        self.stopped_early = False
        self.done = False

    def params(self) -> Dict[str, Any]:
        return {"q": self.q}

    def representation(self) -> Optional[List[Interval]]:
        return [self.placed[v] for b in self.batches for v in b.vertices]

    def witness(self) -> Dict[str, int]:
        return interval_sweep_coloring(self.representation())

    def _second_batch(self, new: List[Interval], reveal: bool) -> Batch:
        old = self.representation()
        self.placed.update({iv.id: iv for iv in new})
        ids = {iv.id for iv in new}
        edges = [(u, v) for u, v in interval_graph(old + new).edges() if u in ids or v in ids]
        return self.emit(Batch(tuple(iv.id for iv in new), tuple(edges), tuple(new) if reveal else None))

    def _check(self, coloring: Mapping[str, int], required: int, what: str) -> GuaranteeCheck:
        used = len(set(coloring.values()))
        if self.stopped_early:
            required = self._stop_threshold() + 1
        return GuaranteeCheck(
            statement=f"at least {required} distinct colors {what}",
            passed=used >= required,
            observed=Fraction(used),
            required=Fraction(required),
            early_stop=self.stopped_early,
        )

    def _stop_threshold(self) -> int:
        raise NotImplementedError


class IntervalNoRepAdversary(_IntervalAdversary):
    """Disjoint cliques first; their positions on the line are chosen after they are colored."""

    name = "interval-norep"

    def __init__(self, q: int, max_q: Optional[int] = None):
        max_q = max_q if max_q is not None else get_settings().norep_max_q
        if not 1 <= q <= max_q:
            raise ParameterError(f"interval-norep needs 1 <= q <= {max_q}, got {q}")
        super().__init__(q)
        self.n_small = comb(4 * q, q) + 1
        self.n_big = comb(4 * q, 2 * q) + 1
        self.small = [[f"s{c:04d}_{m}" for m in range(q)] for c in range(self.n_small)]
        self.big = [[f"b{c:04d}_{m}" for m in range(2 * q)] for c in range(self.n_big)]
        self.details: Dict[str, Any] = {}

    def claimed_omega(self) -> Optional[int]:
        return 2 * self.q

    def _stop_threshold(self) -> int:
        return 4 * self.q

    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        if self.done:
            return None
        if not self.batches:
            edges = [(ids[a], ids[b]) for ids in self.small + self.big
                     for a in range(len(ids)) for b in range(a + 1, len(ids))]
            return self.emit(Batch(tuple(v for ids in self.small + self.big for v in ids), tuple(edges)))
        self.done = True
        used = len(set(coloring.values()))
        if used > self._stop_threshold():
            logger.info(f"interval-norep: {used} colors on batch 1, stopping")
            self.stopped_early = True
            self._place_rest(self.small + self.big)
            return None
        return self._second_batch(self._place_twins(coloring), reveal=False)

    def _place_twins(self, coloring: Mapping[str, int]) -> List[Interval]:
        q = self.q
        s1, s2 = find_twins(record_cliques(self.small, coloring))
        b1, b2 = find_twins(record_cliques(self.big, coloring))
        shared = s1.colors
        for v in s1.ids:
            self.placed[v] = closed(5, 6, v)
        for v in s2.ids:
            self.placed[v] = closed(9, 10, v)

        # vertices of the first big twin colored from the small twins' set must stay short
        short = [v for v in b1.ids if coloring[v] in shared]
        short += [v for v in b1.ids if v not in short][:q - len(short)]
        long = [v for v in b1.ids if v not in short]
        long_colors = frozenset(coloring[v] for v in long)
        for v in short:
            self.placed[v] = closed(0, 1, v)
        for v in long:
            self.placed[v] = closed(0, 3, v)
        for v in b2.ids:
            self.placed[v] = closed(12, 15, v) if coloring[v] in long_colors else closed(14, 15, v)

        used = {s1.index, s2.index}
        rest = [ids for c, ids in enumerate(self.small) if c not in used]
        used = {b1.index, b2.index}
        rest += [ids for c, ids in enumerate(self.big) if c not in used]
        self._place_rest(rest)
        self.details = {
            "small_twins": [s1.index, s2.index],
            "big_twins": [b1.index, b2.index],
            "small_twin_colors": sorted(shared),
            "big_twin_colors": sorted(b1.colors),
            "long_side_colors": sorted(long_colors),
        }
        logger.info(f"interval-norep: small twins {s1.index},{s2.index}, big twins {b1.index},{b2.index}")
        return ([closed(2, 8, f"n_left_{m}") for m in range(q)] +
                [closed(7, 13, f"n_right_{m}") for m in range(q)])

    def _place_rest(self, cliques: List[List[str]]) -> None:
        for r, ids in enumerate(cliques):
            for v in ids:
                self.placed[v] = closed(16 + 2 * r, 17 + 2 * r, v)

    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        return self._check(coloring, 4 * self.q, f"against clique number {2 * self.q}")

    def placement(self) -> Dict[str, Any]:
        return dict(self.details)


class IntervalKTAdversary(_IntervalAdversary):
    """Rows of identical unit cliques, then two stacks bridging a pair with equal color sets."""

    name = "interval-kt"
    mode = "intervals"

    def __init__(self, q: int, max_q: Optional[int] = None):
        max_q = max_q if max_q is not None else get_settings().kt_max_q
        if not 1 <= q <= max_q:
            raise ParameterError(f"interval-kt needs 1 <= q <= {max_q}, got {q}")
        super().__init__(q)
        self.n_cliques = comb(3 * q, 2 * q) + 1
        self.cliques = [[f"c{i:03d}_{m}" for m in range(2 * q)] for i in range(self.n_cliques)]
        self.twins: Optional[Tuple[int, int]] = None

    def claimed_omega(self) -> Optional[int]:
        return 2 * self.q if self.twins is None else 4 * self.q

    def _stop_threshold(self) -> int:
        return 3 * self.q

    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        if self.done:
            return None
        if not self.batches:
            first = [closed(4 * i, 4 * i + 1, v) for i, ids in enumerate(self.cliques) for v in ids]
            self.placed.update({iv.id: iv for iv in first})
            edges = [(ids[a], ids[b]) for ids in self.cliques
                     for a in range(len(ids)) for b in range(a + 1, len(ids))]
            return self.emit(Batch(tuple(iv.id for iv in first), tuple(edges), tuple(first)))
        self.done = True
        used = len(set(coloring.values()))
        if used > self._stop_threshold():
            logger.info(f"interval-kt: {used} colors on batch 1, stopping")
            self.stopped_early = True
            return None
        a, b = find_twins(record_cliques(self.cliques, coloring))
        self.twins = (a.index, b.index)
        logger.info(f"interval-kt: cliques {a.index} and {b.index} share colors {sorted(a.colors)}")
        lo, hi = self.twins
        span = 2 * self.q
        new = ([closed(4 * lo, 4 * lo + 3, f"x_{m}") for m in range(span)] +
               [closed(4 * lo + 2, 4 * hi + 1, f"y_{m}") for m in range(span)])
        return self._second_batch(new, reveal=True)

    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        return self._check(coloring, 6 * self.q, f"against clique number {self.claimed_omega()}")

    def placement(self) -> Dict[str, Any]:
        return {"twins": list(self.twins) if self.twins else None}
