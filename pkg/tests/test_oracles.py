import time
from functools import lru_cache
from itertools import product

import networkx as nx
import pytest
from hypothesis import given, settings

from batchcolor.core.errors import SizeLimitExceeded
from batchcolor.core.graph import Graph, validate_coloring
from batchcolor.core.oracles import (chromatic_number_exact, components, dsatur_coloring, exact_optimum,
                                     min_sum_coloring_exact, within_limits)
from tests.strategies import graphs


def cycle(n: int) -> Graph:
    return Graph.from_networkx(nx.cycle_graph(n))


def brute_force(g: Graph, objective: str) -> int:
    best = None
    n = g.n
    for colors in product(range(1, n + 1), repeat=n):
        assignment = dict(zip(g.vertices, colors))
        if any(assignment[u] == assignment[v] for u, v in g.edges()):
            continue
        cost = max(colors) if objective == "colors" else sum(colors)
        best = cost if best is None else min(best, cost)
    return best or 0


def layered_minimum_sum(g: Graph) -> int:
    """Peel one independent set per color: the sum counts each vertex once per color at or below its own."""
    index = g.index()
    adj = [0] * g.n
    for u, v in g.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    independent = [True] * (1 << g.n)
    for mask in range(1, 1 << g.n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        independent[mask] = independent[rest] and not adj[low] & rest

    @lru_cache(maxsize=None)
    def peel(s: int) -> int:
        if not s:
            return 0
        best = None
        sub = s
        while sub:
            if independent[sub]:
                cost = peel(s & ~sub)
                best = cost if best is None else min(best, cost)
            sub = (sub - 1) & s
        return bin(s).count("1") + best

    return peel((1 << g.n) - 1)


def test_triangle_needs_three_colors(triangle):
    chi, witness = chromatic_number_exact(triangle)
    assert chi == 3
    assert validate_coloring(triangle, witness).ok


def test_path_is_two_colorable(path3):
    assert chromatic_number_exact(path3)[0] == 2


def test_petersen_graph_needs_three_colors():
    g = Graph.from_networkx(nx.petersen_graph())
    chi, witness = chromatic_number_exact(g)
    assert chi == 3
    assert validate_coloring(g, witness).ok


def test_odd_cycle():
    assert chromatic_number_exact(cycle(7))[0] == 3


def test_minimum_sums_of_small_graphs(triangle, path3, star):
    assert min_sum_coloring_exact(Graph.from_edges("uv", [("u", "v")]))[0] == 3
    assert min_sum_coloring_exact(triangle)[0] == 6
    assert min_sum_coloring_exact(path3)[0] == 4


def test_star_sum_puts_the_center_on_two(star):
    total, witness = min_sum_coloring_exact(star)
    assert total == 5
    assert witness["c"] == 2


def test_empty_graph():
    g = Graph.from_edges([])
    assert chromatic_number_exact(g)[0] == 0
    assert min_sum_coloring_exact(g)[0] == 0


def test_components_are_solved_separately():
    g = Graph.from_edges(["a", "b", "c", "d", "e"], [("a", "b"), ("c", "d"), ("d", "e"), ("c", "e")])
    assert components(g) == [["a", "b"], ["c", "d", "e"]]
    assert exact_optimum(g, "sum")[0] == 3 + 6
    assert exact_optimum(g, "colors")[0] == 3


def test_search_above_the_cap_is_refused():
    with pytest.raises(SizeLimitExceeded) as info:
        chromatic_number_exact(cycle(9), limit=5)
    assert info.value.exit_code == 3
    assert info.value.details == {"size": 9, "limit": 5}


def test_directly_solvable_components_ignore_the_cap():
    big_clique = Graph.from_networkx(nx.complete_graph(12))
    assert chromatic_number_exact(big_clique, limit=4)[0] == 12
    long_path = Graph.from_networkx(nx.path_graph(40))
    assert chromatic_number_exact(long_path, limit=4)[0] == 2
    assert not within_limits(long_path, "sum", limit=4)


def test_oracle_limit_from_the_environment(monkeypatch):
    from batchcolor.core.config import get_settings

    monkeypatch.setenv("BATCHCOLOR_ORACLE_LIMIT", "4")
    get_settings.cache_clear()
    with pytest.raises(SizeLimitExceeded):
        min_sum_coloring_exact(Graph.from_networkx(nx.path_graph(6)))


def test_dsatur_is_a_proper_upper_bound():
    g = Graph.from_networkx(nx.petersen_graph())
    found = dsatur_coloring(g)
    assert validate_coloring(g, found).ok
    assert found.max_color >= 3


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_chromatic_number_matches_brute_force(g):
    chi, witness = chromatic_number_exact(g)
    assert chi == brute_force(g, "colors")
    assert validate_coloring(g, witness).ok


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_minimum_sum_matches_brute_force(g):
    total, witness = min_sum_coloring_exact(g)
    assert total == brute_force(g, "sum")
    assert witness.color_sum == total
    assert validate_coloring(g, witness).ok


@pytest.mark.slow
@settings(max_examples=15, deadline=None)
@given(graphs(max_n=7, min_n=7))
def test_minimum_sum_matches_brute_force_on_seven_vertices(g):
    assert min_sum_coloring_exact(g)[0] == brute_force(g, "sum")


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=10, min_n=7))
def test_minimum_sum_matches_independent_set_peeling(g):
    total, witness = min_sum_coloring_exact(g)
    assert total == layered_minimum_sum(g)
    assert validate_coloring(g, witness).ok


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_minimum_sum_of_dense_sixteen_vertex_graph_is_fast(seed):
    g = Graph.from_networkx(nx.gnp_random_graph(16, 0.7, seed=seed))
    started = time.perf_counter()
    total, witness = min_sum_coloring_exact(g)
    elapsed = time.perf_counter() - started
    assert elapsed < 20.0
    assert validate_coloring(g, witness).ok
    assert witness.color_sum == total <= dsatur_coloring(g).color_sum


def test_minimum_sum_of_sixteen_vertex_cycle_alternates():
    g = cycle(16)
    assert min_sum_coloring_exact(g)[0] == 24
