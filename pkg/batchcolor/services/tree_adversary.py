"""Adaptive forest construction forcing 2k colors out of any k-batch colorer."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

import networkx as nx

from batchcolor.core.config import get_settings
from batchcolor.core.errors import ParameterError, PoolExhausted
from batchcolor.core.graph import Batch
from batchcolor.models.schemas import GuaranteeCheck
from batchcolor.services.engine import Adversary

logger = logging.getLogger(__name__)

CONNECTOR = "t_connect"


def batch_size(k: int, i: int) -> int:
    return 2 * (8 * k ** 3) ** (k - i)


@dataclass
class LevelTreeState:
    """Identified color pairs per level and the unconsumed good trees of each level."""

    k: int
    levels: List[Tuple[int, int]] = field(default_factory=list)
    # level j -> (vertex colored c_{2j-1}, vertex colored c_{2j}) for each good tree
    pools: Dict[int, List[Tuple[str, str]]] = field(default_factory=dict)
    found: Dict[int, int] = field(default_factory=dict)
    consumed: Dict[int, int] = field(default_factory=dict)

    def take(self, level: int) -> Tuple[str, str]:
        pool = self.pools.get(level)
        if not pool:
            raise PoolExhausted(f"no good level-{level} tree left",
                                {"level": level, "consumed": self.consumed.get(level, 0)})
        self.consumed[level] = self.consumed.get(level, 0) + 1
        return pool.pop()

    def identify(self, level: int, base_edges: List[Tuple[str, str]], coloring: Mapping[str, int]) -> None:
        pairs = Counter(tuple(sorted((coloring[u], coloring[v]))) for u, v in base_edges)
        (low, high), count = min(pairs.items(), key=lambda kv: (-kv[1], kv[0]))
        if count * 4 * self.k ** 2 < 2 * len(base_edges):
            raise PoolExhausted(f"level {level}: only {count} base edges share a color pair")
        self.levels.append((low, high))
        pool = []
        for u, v in base_edges:
            if {coloring[u], coloring[v]} == {low, high}:
                pool.append((u, v) if coloring[u] == low else (v, u))
        pool.reverse()
        self.pools[level] = pool
        self.found[level] = len(pool)
        logger.info(f"tree adversary: level {level} colors ({low}, {high}) on {len(pool)} good trees")


class TreeAdversary(Adversary):
    name = "tree"
    objective = "colors"

    def __init__(self, k: int, connect: bool = False, max_k: Optional[int] = None):
        max_k = max_k if max_k is not None else get_settings().tree_max_k
        if not 1 <= k <= max_k:
            raise ParameterError(f"tree adversary needs 1 <= k <= {max_k}, got {k}")
        super().__init__(k)
        self.connect = connect
        self.graph_class = "tree" if connect else "forest"
        self.state = LevelTreeState(k)
        self.graph = nx.Graph()
        self.base_edges: List[Tuple[str, str]] = []
        self.stopped_early = False
        self.done = False

    def params(self) -> Dict[str, Any]:
        return {"k": self.k, "connect": self.connect}

    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        if self.done:
            return None
        i = len(self.batches)
        if i:
            used = len(set(coloring.values()))
            if used > 2 * self.k:
                logger.info(f"tree adversary: {used} colors after batch {i}, stopping")
                self.stopped_early = True
                self.done = True
                return self._connector_batch() if self.connect and not self._connected() else None
            if i == self.k:
                self.done = True
                return None
            self.state.identify(i, self.base_edges, coloring)
        return self.emit(self._level_batch(i + 1))

    def _level_batch(self, i: int) -> Batch:
        vertices: List[str] = []
        edges: List[Tuple[str, str]] = []
        self.base_edges = []
        for e in range(batch_size(self.k, i) // 2):
            u, v = f"t{i}_{2 * e:06d}", f"t{i}_{2 * e + 1:06d}"
            vertices += [u, v]
            edges.append((u, v))
            self.base_edges.append((u, v))
            for x in (u, v):
                for j in range(1, i):
                    odd, _ = self.state.take(j)
                    _, even = self.state.take(j)
                    edges += [(x, odd), (x, even)]
        self.graph.add_nodes_from(vertices)
        self.graph.add_edges_from(edges)
        if self.connect and i == self.k:
            edges += self._connector_edges()
            vertices.append(CONNECTOR)
        logger.debug(f"tree adversary: batch {i} with {len(vertices)} vertices")
        return Batch(tuple(vertices), tuple(edges))

    def _connected(self) -> bool:
        return nx.is_connected(self.graph)

    def _connector_edges(self) -> List[Tuple[str, str]]:
        edges = [(CONNECTOR, min(part)) for part in nx.connected_components(self.graph)]
        self.graph.add_edges_from(edges)
        return edges

    def _connector_batch(self) -> Batch:
        edges = self._connector_edges()
        return self.emit(Batch((CONNECTOR,), tuple(edges)))

    def witness(self) -> Dict[str, int]:
        sides = nx.bipartite.color(self.graph)
        return {v: sides[v] + 1 for v in self.graph}

    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        used = len(set(coloring.values()))
        required = 2 * self.k + 1 if self.stopped_early else 2 * self.k
        return GuaranteeCheck(
            statement=f"at least {required} distinct colors on a 2-colorable forest",
            passed=used >= required,
            observed=Fraction(used),
            required=Fraction(required),
            early_stop=self.stopped_early,
        )

    def placement(self) -> Dict[str, Any]:
        return {
            "levels": [list(pair) for pair in self.state.levels],
            "batch_sizes": [batch_size(self.k, i) for i in range(1, self.k + 1)],
            "good_trees": {str(j): n for j, n in self.state.found.items()},
            "consumed": {str(j): n for j, n in self.state.consumed.items()},
        }
