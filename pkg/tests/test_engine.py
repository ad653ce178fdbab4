from fractions import Fraction
from typing import Dict, Mapping, Optional

import networkx as nx
import pytest

from batchcolor.core.errors import ImproperColoring, InconsistentInstance, ParameterError
from batchcolor.core.graph import Batch, BatchedGraphInstance, Graph
from batchcolor.core.intervals import closed, interval_instance
from batchcolor.models.schemas import GuaranteeCheck
from batchcolor.services.coloring import FirstFitColorer, GenericBatchColorer
from batchcolor.services.engine import Adversary, OnlineColorer, optimum, run_duel, run_instance, run_trials
from batchcolor.services.tree_adversary import TreeAdversary
from batchcolor.services.two_batches import TwoBatchesColorer


class AllOnes(OnlineColorer):
    name = "all-ones"

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        return {v: 1 for v in batch.vertices}


class Recolorer(FirstFitColorer):
    name = "recolorer"

    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        new = super()._color_batch(batch)
        for v in self.colors:
            self.colors[v] += 10
        return new


class TriangleAdversary(Adversary):
    """Claims a forest but hands out a triangle."""

    name = "liar"
    graph_class = "forest"

    def __init__(self, witness_color: Optional[int] = None):
        super().__init__(1)
        self.witness_color = witness_color

    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        if self.batches:
            return None
        return self.emit(Batch(("a", "b", "c"), (("a", "b"), ("b", "c"), ("a", "c"))))

    def witness(self) -> Dict[str, int]:
        if self.witness_color is not None:
            return {v: self.witness_color for v in "abc"}
        return {"a": 1, "b": 2, "c": 3}

    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        return GuaranteeCheck(statement="none", passed=True, observed=Fraction(0), required=Fraction(0))


def path_in_two_batches() -> BatchedGraphInstance:
    return BatchedGraphInstance((Batch(("a", "c")), Batch(("b",), (("a", "b"), ("b", "c")))))


def test_generic_batch_on_a_two_batch_path():
    report = run_instance(GenericBatchColorer(), path_in_two_batches())
    assert report.opt_cost == 2
    assert report.opt_kind == "exact"
    assert report.algorithm_cost <= 2 * report.opt_cost
    assert report.coloring() == {"a": 1, "c": 1, "b": 2}


def test_first_fit_on_a_single_triangle_batch():
    instance = BatchedGraphInstance((Batch(tuple("abc"), (("a", "b"), ("b", "c"), ("a", "c"))),))
    report = run_instance(FirstFitColorer(), instance)
    assert report.ratio == 1
    assert report.k == 1


def test_empty_instance_has_ratio_one():
    report = run_instance(FirstFitColorer(), BatchedGraphInstance(()))
    assert report.algorithm_cost == 0
    assert report.opt_cost == 0
    assert report.ratio == 1


def test_sum_objective_is_measured_against_the_sum_oracle():
    report = run_instance(FirstFitColorer(), path_in_two_batches(), objective="sum")
    assert report.algorithm_cost == 4
    assert report.opt_cost == 4
    assert report.color_sum == 4


def test_interval_instances_use_the_clique_number():
    instance = interval_instance([[closed(0, 2, "a")], [closed(1, 3, "b")]])
    report = run_instance(FirstFitColorer(), instance)
    assert report.opt_cost == 2
    assert report.n == 2


def test_monochromatic_answers_are_rejected():
    with pytest.raises(ImproperColoring) as info:
        run_instance(AllOnes(), path_in_two_batches())
    assert info.value.details["monochromatic_edges"]


def test_recoloring_is_rejected():
    with pytest.raises(ImproperColoring):
        run_instance(Recolorer(), path_in_two_batches())


def test_interval_only_algorithms_refuse_graph_instances():
    with pytest.raises(ParameterError):
        run_instance(TwoBatchesColorer(), path_in_two_batches())


def test_optimum_falls_back_to_the_witness_out_of_range():
    g = Graph.from_networkx(nx.cycle_graph(7))
    witness = {str(i): 1 + (i % 2) + (i == 6) for i in range(7)}
    cost, kind, _ = optimum(g, "colors", witness=witness, limit=3)
    assert (cost, kind) == (3, "bound")
    cost, kind, _ = optimum(g, "colors", limit=3)
    assert kind == "bound"
    assert cost >= 3


def test_tree_duel_with_one_batch():
    transcript = run_duel(FirstFitColorer(), TreeAdversary(1))
    assert transcript.report.distinct_colors == 2
    assert transcript.report.opt_cost == 2
    assert transcript.report.ratio == 1
    assert transcript.guarantee.passed
    assert transcript.instance.kind == "graph"


def test_duel_rejects_a_false_graph_class():
    with pytest.raises(InconsistentInstance):
        run_duel(FirstFitColorer(), TriangleAdversary())


def test_duel_rejects_an_improper_witness():
    adversary = TriangleAdversary(witness_color=1)
    adversary.graph_class = "any"
    with pytest.raises(InconsistentInstance):
        run_duel(FirstFitColorer(), adversary)


def test_trials_in_process():
    summary = run_trials("tree", {"k": "1"}, "random-proper", 3, workers=1)
    assert summary.trials == 3
    assert summary.passed == 3
    assert summary.best_ratio >= 1
    assert len(summary.transcripts) == 3


def test_trials_must_be_positive():
    with pytest.raises(ParameterError):
        run_trials("tree", {"k": "1"}, "first-fit", 0)
