"""Sum-coloring algorithms: k-BatchColor, BatchColor_f and First-Fit on forests."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Set, Tuple

from networkx.utils import UnionFind

from batchcolor.core.errors import InfeasibleBatch, NotAForest, ParameterError, ScheduleError
from batchcolor.core.graph import Batch, BatchedGraphInstance, Coloring, least_free_color
from batchcolor.core.oracles import components, min_sum_coloring_exact
from batchcolor.services.engine import OnlineColorer
from batchcolor.utils.rationals import floor_fraction, to_fraction

logger = logging.getLogger(__name__)


def _isq(i: int) -> int:
    return i * i


def _pronic(i: int) -> int:
    return i * (i + 1)


def _pow2(i: int) -> int:
    return 2 ** (i - 1)


# name -> (f, default c_f); each c_f bounds the series of 1/f(i) from above
SCHEDULES: Dict[str, Tuple[Callable[[int], int], Fraction]] = {
    "isq": (_isq, Fraction(329, 200)),
    "pronic": (_pronic, Fraction(1)),
    "pow2": (_pow2, Fraction(2)),
}


@dataclass
class ScheduleFunction:
    name: str
    f: Callable[[int], int]
    c_f: Fraction
    certified_up_to: int = 0
    _partial: Fraction = field(default=Fraction(0), repr=False)

    def __call__(self, i: int) -> int:
        self.certify(i)
        return self.f(i)

    def certify(self, n: int) -> None:
        """Check f(1) >= 1, monotonicity and partial sums <= c_f for every index up to n."""
        while self.certified_up_to < n:
            i = self.certified_up_to + 1
            value = self.f(i)
            if value < 1 or (i > 1 and value < self.f(i - 1)):
                raise ScheduleError(f"schedule {self.name}: f({i})={value} is not nondecreasing and >= 1")
            self._partial += Fraction(1, value)
            if self._partial > self.c_f:
                raise ScheduleError(f"schedule {self.name}: partial sum up to {i} exceeds c_f={self.c_f}")
            self.certified_up_to = i

    def cap(self, i: int, j: int) -> int:
        return floor_fraction(j * self.c_f * self(i))

    def describe(self) -> str:
        return f"f={self.name},cf={self.c_f.numerator}/{self.c_f.denominator}"


def parse_schedule(text: Optional[str] = None) -> ScheduleFunction:
    """Read "f=isq,cf=329/200"; cf defaults to the schedule's own bound."""
    options: Dict[str, str] = {}
    for part in filter(None, (text or "f=isq").split(",")):
        key, sep, value = part.partition("=")
        if not sep:
            raise ScheduleError(f"schedule option {part!r} is not key=value")
        options[key.strip()] = value.strip()
    unknown = set(options) - {"f", "cf"}
    if unknown:
        raise ScheduleError(f"unknown schedule options {sorted(unknown)}")
    name = options.get("f", "isq")
    if name not in SCHEDULES:
        raise ScheduleError(f"unknown schedule {name!r}; choose from {sorted(SCHEDULES)}")
    f, default = SCHEDULES[name]
    try:
        c_f = to_fraction(options["cf"]) if "cf" in options else default
    except (TypeError, ValueError) as e:
        raise ScheduleError(f"bad cf: {e}")
    return ScheduleFunction(name, f, c_f)


@dataclass
class LedgerRecord:
    batch: int
    klass: int
    cap: int
    color: int


class ColorLedger:
    """Colors declared taken by BatchColor_f; each is handed out once."""

    def __init__(self):
        self.taken: Set[int] = set()
        self.records: List[LedgerRecord] = []

    def assign(self, batch: int, klass: int, cap: int) -> int:
        color = cap
        while color >= 1 and color in self.taken:
            color -= 1
        if color < 1:
            raise InfeasibleBatch(f"no available color <= {cap} for class {klass} of batch {batch}",
                                  {"batch": batch, "class": klass, "cap": cap})
        self.taken.add(color)
        self.records.append(LedgerRecord(batch, klass, cap, color))
        return color


class KBatchColorer(OnlineColorer):
    """Knows k; within-batch color c of batch i becomes k(c-1)+i."""

    name = "k-batch-color"
    k_aware = True

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        if not self.k:
            raise ParameterError("k-batch-color needs the number of batches in advance")
        if self.batch_index > self.k:
            raise ParameterError(f"batch {self.batch_index} arrived but k={self.k} was declared")
        _, base = min_sum_coloring_exact(self.batch_subgraph(batch))
        return {v: self.k * (c - 1) + self.batch_index for v, c in base.items()}


class BatchColorFColorer(OnlineColorer):
    """Does not know k; class j of batch i takes the largest free color <= floor(j * c_f * f(i))."""

    name = "batch-color-f"

    def __init__(self, schedule: Optional[ScheduleFunction] = None):
        self.schedule = schedule or parse_schedule()
        super().__init__()

    def start(self, k: Optional[int] = None) -> None:
        super().start(k)
        self.ledger = ColorLedger()

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        i = self.batch_index
        _, base = min_sum_coloring_exact(self.batch_subgraph(batch))
        mapping = {j: self.ledger.assign(i, j, self.schedule.cap(i, j))
                   for j in range(1, base.max_color + 1)}
        logger.debug(f"batch-color-f: batch {i} classes {base.max_color} -> {mapping}")
        return {v: mapping[c] for v, c in base.items()}

    def diagnostics(self) -> List[Dict[str, int]]:
        return [{"batch": r.batch, "class": r.klass, "cap": r.cap, "color": r.color} for r in self.ledger.records]


class FirstFitSumColorer(OnlineColorer):
    """First-Fit restricted to forests; a cycle anywhere in the revealed graph aborts."""

    name = "first-fit-sum"

    def start(self, k: Optional[int] = None) -> None:
        super().start(k)
        self.forest = UnionFind()

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        for u, v in batch.edges:
            if self.forest[u] == self.forest[v]:
                raise NotAForest(f"edge ({u}, {v}) closes a cycle in batch {self.batch_index}")
            self.forest.union(u, v)
        new: Dict[str, int] = {}
        for v in batch.vertices:
            new[v] = least_free_color(self.colors.get(u, new.get(u)) for u in self.graph.adj[v])
        return new


def k_batch_color(instance: BatchedGraphInstance, k: Optional[int] = None) -> Coloring:
    colorer = KBatchColorer()
    colorer.start(k or instance.k)
    for batch in instance.batches:
        colorer.receive_batch(batch)
    return Coloring(colorer.colors)


def batch_color_f(instance: BatchedGraphInstance, schedule: Optional[ScheduleFunction] = None) -> Coloring:
    colorer = BatchColorFColorer(schedule)
    for batch in instance.batches:
        colorer.receive_batch(batch)
    return Coloring(colorer.colors)


def first_fit_sum(instance: BatchedGraphInstance) -> Tuple[Coloring, List[Tuple[int, int]]]:
    """First-Fit coloring plus (component size, component color sum) per component."""
    colorer = FirstFitSumColorer()
    for batch in instance.batches:
        colorer.receive_batch(batch)
    coloring = Coloring(colorer.colors)
    sums = [(len(part), sum(coloring[v] for v in part)) for part in components(instance.graph())]
    return coloring, sums
