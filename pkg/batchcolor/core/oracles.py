"""Exact offline oracles for the chromatic number and the minimum color sum.

Graphs are split into connected components first. Edgeless and complete
components (and bipartite ones, for the chromatic number) are solved directly;
everything else goes through a DSATUR-ordered branch and bound whose size cap
applies per component.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx

from batchcolor.core.config import get_settings
from batchcolor.core.errors import SizeLimitExceeded
from batchcolor.core.graph import Coloring, Graph

logger = logging.getLogger(__name__)


def components(g: Graph) -> List[List[str]]:
    """Connected components, each listed in the graph's vertex order."""
    index = g.index()
    parts = [sorted(c, key=index.__getitem__) for c in nx.connected_components(g.to_networkx())]
    parts.sort(key=lambda part: index[part[0]])
    return parts


def _is_complete(g: Graph, part: Sequence[str]) -> bool:
    m = len(part)
    return all(g.degree(v) == m - 1 for v in part)


def _needs_search(g: Graph, part: Sequence[str], objective: str) -> bool:
    if len(part) <= 2 or _is_complete(g, part):
        return False
    if objective == "colors" and nx.is_bipartite(g.induced(part).to_networkx()):
        return False
    return True


def _cap(objective: str, limit: Optional[int]) -> int:
    if limit is not None:
        return limit
    settings = get_settings()
    return settings.chromatic_cap if objective == "colors" else settings.sum_cap


def check_size(g: Graph, objective: str, limit: Optional[int] = None) -> None:
    """Raise SizeLimitExceeded when some component would need a search above the cap."""
    cap = _cap(objective, limit)
    for part in components(g):
        if len(part) > cap and _needs_search(g, part, objective):
            raise SizeLimitExceeded(len(part), cap, f"{objective} oracle")


def within_limits(g: Graph, objective: str, limit: Optional[int] = None) -> bool:
    try:
        check_size(g, objective, limit)
    except SizeLimitExceeded:
        return False
    return True


class _Component:
    """Dense-index view of one component for the search routines."""

    def __init__(self, g: Graph, part: Sequence[str]):
        self.ids = list(part)
        local = {v: i for i, v in enumerate(self.ids)}
        self.n = len(self.ids)
        self.neighbors = [[local[u] for u in g.neighbors(v)] for v in self.ids]
        self.degree = [len(nbrs) for nbrs in self.neighbors]

    def forbidden(self, colors: List[int], v: int) -> set:
        return {colors[u] for u in self.neighbors[v] if colors[u]}

    def pick(self, colors: List[int]) -> int:
        """DSATUR choice: max saturation, then max degree, then lowest index."""
        best, best_key = -1, None
        for v in range(self.n):
            if colors[v]:
                continue
            key = (len(self.forbidden(colors, v)), self.degree[v], -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best

    def greedy(self) -> List[int]:
        colors = [0] * self.n
        for _ in range(self.n):
            v = self.pick(colors)
            used = self.forbidden(colors, v)
            c = 1
            while c in used:
                c += 1
            colors[v] = c
        return colors


def _chromatic_search(comp: _Component, lower: int) -> List[int]:
    best = comp.greedy()
    best_k = max(best, default=0)
    if best_k <= lower:
        return best
    colors = [0] * comp.n

    def search(count: int, used: int) -> bool:
        nonlocal best, best_k
        if count == comp.n:
            best, best_k = list(colors), used
            return best_k <= lower
        v = comp.pick(colors)
        blocked = comp.forbidden(colors, v)
        for c in range(1, min(used + 1, best_k - 1) + 1):
            if c in blocked:
                continue
            colors[v] = c
            done = search(count + 1, max(used, c))
            colors[v] = 0
            if done:
                return True
        return False

    search(0, 0)
    return best


def _clique_bound(order: Sequence[int], adj: Sequence[int], lows: Dict[int, int]) -> int:
    """Sum of distinct colors >= each vertex's lowest free color, over a greedy clique cover of `lows`."""
    masks: List[int] = []
    groups: List[List[int]] = []
    for v in order:
        if v not in lows:
            continue
        for i, mask in enumerate(masks):
            if not mask & ~adj[v]:
                masks[i] = mask | (1 << v)
                groups[i].append(lows[v])
                break
        else:
            masks.append(1 << v)
            groups.append([lows[v]])
    total = 0
    for group in groups:
        last = 0
        for low in sorted(group):
            last = max(low, last + 1)
            total += last
    return total


def _sum_search(comp: _Component, seeds: Sequence[List[int]] = ()) -> List[int]:
    n = comp.n
    best = min([comp.greedy(), *seeds], key=sum)
    best_sum = sum(best)
    adj = [sum(1 << u for u in nbrs) for nbrs in comp.neighbors]
    order = sorted(range(n), key=lambda v: (-comp.degree[v], v))
    colors = [0] * n
    # blocked[v] has bit c set while some colored neighbor of v holds color c
    blocked = [0] * n
    counts = [[0] * (n + 1) for _ in range(n)]

    def lowest_free(v: int) -> int:
        free = ~blocked[v] & ~1
        return (free & -free).bit_length() - 1

    def paint(v: int, c: int) -> None:
        colors[v] = c
        for u in comp.neighbors[v]:
            counts[u][c] += 1
            blocked[u] |= 1 << c

    def unpaint(v: int, c: int) -> None:
        colors[v] = 0
        for u in comp.neighbors[v]:
            counts[u][c] -= 1
            if not counts[u][c]:
                blocked[u] &= ~(1 << c)

    def search(count: int, partial: int) -> None:
        nonlocal best, best_sum
        if count == n:
            best, best_sum = list(colors), partial
            return
        lows = {v: lowest_free(v) for v in range(n) if not colors[v]}
        if partial + _clique_bound(order, adj, lows) >= best_sum:
            return
        simple = partial + sum(lows.values())
        v = max(lows, key=lambda u: (bin(blocked[u]).count("1"), comp.degree[u], -u))
        for c in range(lows[v], min(comp.degree[v] + 1, n) + 1):
            # the other vertices' lowest free colors can only grow
            if simple - lows[v] + c >= best_sum:
                break
            if blocked[v] >> c & 1:
                continue
            paint(v, c)
            search(count + 1, partial + c)
            unpaint(v, c)

    search(0, 0)
    return best


def _solve(g: Graph, objective: str, limit: Optional[int],
           searcher: Callable[[Graph, List[str]], Dict[str, int]]) -> Coloring:
    check_size(g, objective, limit)
    colors: Dict[str, int] = {}
    for part in components(g):
        if len(part) == 1:
            colors[part[0]] = 1
        elif _is_complete(g, part):
            colors.update({v: i for i, v in enumerate(part, start=1)})
        else:
            colors.update(searcher(g, part))
    return Coloring({v: colors[v] for v in g.vertices})


def _chromatic_part(g: Graph, part: List[str]) -> Dict[str, int]:
    sub = g.induced(part).to_networkx()
    if nx.is_bipartite(sub):
        sides = nx.bipartite.color(sub)
        return {v: sides[v] + 1 for v in part}
    comp = _Component(g, part)
    clique, _ = nx.max_weight_clique(sub, weight=None)
    found = _chromatic_search(comp, len(clique))
    return dict(zip(comp.ids, found))


# networkx greedy orders whose sums seed the incumbent of the sum search
SEED_STRATEGIES = ("saturation_largest_first", "largest_first", "smallest_last", "independent_set")


def _sum_part(g: Graph, part: List[str]) -> Dict[str, int]:
    comp = _Component(g, part)
    sub = g.induced(part).to_networkx()
    seeds = []
    for strategy in SEED_STRATEGIES:
        found = nx.coloring.greedy_color(sub, strategy=strategy)
        seeds.append([found[v] + 1 for v in comp.ids])
    return dict(zip(comp.ids, _sum_search(comp, seeds)))


def chromatic_number_exact(g: Graph, limit: Optional[int] = None) -> Tuple[int, Coloring]:
    """Return (chi, witness) for g."""
    witness = _solve(g, "colors", limit, _chromatic_part)
    logger.debug(f"chromatic oracle: n={g.n} chi={witness.max_color}")
    return witness.max_color, witness


def min_sum_coloring_exact(g: Graph, limit: Optional[int] = None) -> Tuple[int, Coloring]:
    """Return (minimum color sum, witness) for g."""
    witness = _solve(g, "sum", limit, _sum_part)
    logger.debug(f"sum oracle: n={g.n} sum={witness.color_sum}")
    return witness.color_sum, witness


def exact_optimum(g: Graph, objective: str, limit: Optional[int] = None) -> Tuple[int, Coloring]:
    if objective == "colors":
        return chromatic_number_exact(g, limit)
    return min_sum_coloring_exact(g, limit)


def dsatur_coloring(g: Graph) -> Coloring:
    """Heuristic proper coloring via networkx DSATUR, used as a witnessed upper bound."""
    found = nx.coloring.greedy_color(g.to_networkx(), strategy="saturation_largest_first")
    return Coloring({v: found[v] + 1 for v in g.vertices})
