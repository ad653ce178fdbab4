import logging
import random
from typing import Dict, Iterable, Optional, Sequence, Tuple

from batchcolor.core.graph import Batch, BatchedGraphInstance, Coloring, Graph, least_free_color
from batchcolor.core.intervals import Interval, interval_sweep_coloring
from batchcolor.core.oracles import chromatic_number_exact
from batchcolor.services.engine import OnlineColorer

logger = logging.getLogger(__name__)


def generic_batch_step(subgraph: Graph, color_offset: int,
                       intervals: Optional[Sequence[Interval]] = None) -> Tuple[Dict[str, int], int]:
    """Color one batch optimally and shift it above every color used so far."""
    if intervals is not None:
        base = interval_sweep_coloring(intervals)
    else:
        _, base = chromatic_number_exact(subgraph)
    chi = max(base.values(), default=0)
    return {v: c + color_offset for v, c in base.items()}, color_offset + chi


class GenericBatchColorer(OnlineColorer):
    """Optimal per batch, disjoint palettes across batches."""

    name = "generic-batch"

    def start(self, k: Optional[int] = None) -> None:
        super().start(k)
        self.offset = 0

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        colors, self.offset = generic_batch_step(self.batch_subgraph(batch), self.offset, batch.intervals)
        logger.debug(f"generic-batch: batch {self.batch_index} offset now {self.offset}")
        return colors


class FirstFitColorer(OnlineColorer):
    name = "first-fit"

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        new: Dict[str, int] = {}
        for v in batch.vertices:
            # earlier vertices of the same batch count as colored
            new[v] = least_free_color(self.colors.get(u, new.get(u)) for u in self.graph.adj[v])
        return new


class RandomProperColorer(OnlineColorer):
    """Seeded random proper colors; a baseline that follows no greedy rule."""

    name = "random-proper"

    def __init__(self, seed: int = 0):
        self.seed = seed
        super().__init__()

    def start(self, k: Optional[int] = None) -> None:
        super().start(k)
        self.rng = random.Random(self.seed)

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        new: Dict[str, int] = {}
        for v in batch.vertices:
            used = {self.colors.get(u, new.get(u)) for u in self.graph.adj[v]}
            palette = [c for c in range(1, len(used) + 3) if c not in used]
            new[v] = self.rng.choice(palette)
        return new


def first_fit_online(batches: Iterable[Batch]) -> Coloring:
    colorer = FirstFitColorer()
    for batch in batches:
        colorer.receive_batch(batch)
    return Coloring(colorer.colors)


def generic_batch(instance: BatchedGraphInstance) -> Coloring:
    colorer = GenericBatchColorer()
    for batch in instance.batches:
        colorer.receive_batch(batch)
    return Coloring(colorer.colors)
