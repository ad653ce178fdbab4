import pytest
from hypothesis import given

from batchcolor.core.errors import InconsistentInstance
from batchcolor.core.graph import (Batch, BatchedGraphInstance, Coloring, Graph, first_fit, least_free_color,
                                   validate_coloring)
from tests.strategies import batched, graphs


def test_distinct_colors_on_an_edge_are_proper():
    g = Graph.from_edges("uv", [("u", "v")])
    assert validate_coloring(g, {"u": 1, "v": 2}).ok


def test_monochromatic_edge_is_reported():
    g = Graph.from_edges("uv", [("u", "v")])
    result = validate_coloring(g, {"u": 1, "v": 1})
    assert not result.ok
    assert result.monochromatic_edges == (("u", "v"),)


def test_rainbow_triangle(triangle):
    assert validate_coloring(triangle, {"a": 1, "b": 2, "c": 3}).ok


def test_validation_lists_every_kind_of_problem(path3):
    result = validate_coloring(path3, {"a": 0, "b": 2, "x": 1})
    assert not result.ok
    assert result.uncolored == ("c",)
    assert result.invalid_colors == ("a",)
    assert result.unknown_vertices == ("x",)
    assert result.as_dict()["uncolored"] == ["c"]


def test_first_fit_colors_independent_ends_first(path3):
    assert first_fit(path3, ["a", "c", "b"]) == {"a": 1, "c": 1, "b": 2}


def test_first_fit_on_a_clique(triangle):
    assert sorted(first_fit(triangle, ["c", "a", "b"]).values()) == [1, 2, 3]


def test_first_fit_on_a_four_cycle():
    g = Graph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    colors = first_fit(g, ["a", "c", "b", "d"])
    assert colors == {"a": 1, "c": 1, "b": 2, "d": 2}
    assert validate_coloring(g, colors).ok


def test_first_fit_needs_a_permutation(path3):
    with pytest.raises(ValueError):
        first_fit(path3, ["a", "b"])


def test_least_free_color_skips_used_and_uncolored():
    assert least_free_color([1, None, 2, 4]) == 3
    assert least_free_color([]) == 1


def test_coloring_costs():
    c = Coloring({"a": 1, "b": 3, "c": 3})
    assert c.max_color == 3
    assert c.color_sum == 7
    assert c.distinct_colors == {1, 3}
    assert c.cost("colors") == 3
    assert c.cost("sum") == 7
    assert c.restrict(["a", "z"]) == {"a": 1}


def test_coloring_rejects_non_positive_colors():
    with pytest.raises(ValueError):
        Coloring({"a": 0})


def test_graph_rejects_unknown_endpoints():
    with pytest.raises(InconsistentInstance):
        Graph.from_edges("ab", [("a", "z")])


def test_batch_edges_must_touch_the_new_vertices():
    instance = BatchedGraphInstance((
        Batch(("a", "b")),
        Batch(("c",), (("a", "b"),)),
    ))
    with pytest.raises(InconsistentInstance):
        instance.validate()


def test_batch_ids_cannot_be_reused():
    instance = BatchedGraphInstance((Batch(("a",)), Batch(("a",))))
    with pytest.raises(InconsistentInstance):
        instance.validate()


def test_prefix_graphs_grow_with_the_batches():
    instance = BatchedGraphInstance((
        Batch(("a", "c")),
        Batch(("b",), (("a", "b"), ("b", "c"))),
    ))
    assert instance.graph(1).edges() == []
    assert len(instance.graph().edges()) == 2
    assert instance.batch_of() == {"a": 1, "c": 1, "b": 2}


@given(graphs())
def test_first_fit_is_always_proper(g):
    assert validate_coloring(g, first_fit(g, list(g.vertices))).ok


@given(batched())
def test_generated_instances_are_consistent(instance):
    instance.validate()
    assert sorted(instance.vertices()) == sorted(instance.graph().vertices)
