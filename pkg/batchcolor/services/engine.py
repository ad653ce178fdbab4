"""Online play: feeding batches to colorers, adversary duels and ratio reports."""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from batchcolor.core import oracles
from batchcolor.core.config import get_settings
from batchcolor.core.errors import ImproperColoring, InconsistentInstance, ParameterError
from batchcolor.core.graph import Batch, BatchedGraphInstance, Coloring, Graph, check_batch, validate_coloring
from batchcolor.core.intervals import Interval, interval_graph, interval_sweep_coloring, max_clique_size
from batchcolor.models.schemas import (GuaranteeCheck, InstanceFile, IntervalModel, RatioReport,
                                       TrialSummary, Transcript)

logger = logging.getLogger(__name__)


class OnlineColorer(ABC):
    """Colors each batch irrevocably, seeing only what has been revealed so far."""

    name = "online"
    k_aware = False
    modes: Tuple[str, ...] = ("graph", "intervals")

    def __init__(self):
        self.start()

    def start(self, k: Optional[int] = None) -> None:
        self.graph = nx.Graph()
        self.colors: Dict[str, int] = {}
        self.intervals: Dict[str, Interval] = {}
        self.batch_index = 0
        self.k = k if self.k_aware else None

    def receive_batch(self, batch: Batch) -> Dict[str, int]:
        self.batch_index += 1
        self.graph.add_nodes_from(batch.vertices)
        self.graph.add_edges_from(batch.edges)
        if batch.intervals is not None:
            self.intervals.update({iv.id: iv for iv in batch.intervals})
        new = self._color_batch(batch)
        self.colors.update(new)
        return new

    def batch_subgraph(self, batch: Batch) -> Graph:
        new = set(batch.vertices)
        return Graph.from_edges(batch.vertices, [(u, v) for u, v in batch.edges if u in new and v in new])

    def neighbor_colors(self, v: str) -> Set[int]:
        return {self.colors[u] for u in self.graph.adj[v] if u in self.colors}

    def diagnostics(self) -> List[Dict[str, Any]]:
        return []

    @abstractmethod
    def _color_batch(self, batch: Batch) -> Dict[str, int]:
        ...


class Adversary(ABC):
    """Adaptive batch source with a witnessed bound on the optimum."""

    name = "adversary"
    mode = "graph"
    objective = "colors"
    graph_class = "any"

    def __init__(self, k: int):
        self.k = k
        self.batches: List[Batch] = []

    @abstractmethod
    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        """Return the next batch, or None to stop."""

    @abstractmethod
    def witness(self) -> Dict[str, int]:
        """Proper coloring of everything emitted so far."""

    @abstractmethod
    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        ...

    def params(self) -> Dict[str, Any]:
        return {"k": self.k}

    def representation(self) -> Optional[List[Interval]]:
        return None

    def claimed_omega(self) -> Optional[int]:
        return None

    def placement(self) -> Dict[str, Any]:
        return {}

    def emit(self, batch: Batch) -> Batch:
        self.batches.append(batch)
        return batch


class _Feeder:
    """Checks every batch and every answer against the online contract."""

    def __init__(self, algorithm: OnlineColorer):
        self.algorithm = algorithm
        self.known: Set[str] = set()
        self.history: Dict[str, int] = {}
        self.batch_colorings: List[Dict[str, int]] = []

    def feed(self, batch: Batch) -> Dict[str, int]:
        index = len(self.batch_colorings) + 1
        check_batch(batch, self.known, index)
        answer = dict(self.algorithm.receive_batch(batch))
        if set(answer) != set(batch.vertices):
            missing = sorted(set(batch.vertices) - set(answer))
            extra = sorted(set(answer) - set(batch.vertices))
            raise ImproperColoring(f"{self.algorithm.name}: batch {index} answer covers the wrong vertices",
                                   {"missing": missing[:10], "extra": extra[:10]})
        for v, c in answer.items():
            if isinstance(c, bool) or not isinstance(c, int) or c < 1:
                raise ImproperColoring(f"{self.algorithm.name}: vertex {v} got invalid color {c!r}")
        merged = {**self.history, **answer}
        clashes = [(u, v) for u, v in batch.edges if merged[u] == merged[v]]
        if clashes:
            raise ImproperColoring(f"{self.algorithm.name}: batch {index} is not proper",
                                   {"monochromatic_edges": [list(e) for e in clashes[:10]]})
        changed = [v for v, c in self.history.items() if self.algorithm.colors.get(v) != c]
        if changed:
            raise ImproperColoring(f"{self.algorithm.name}: recolored earlier vertices",
                                   {"vertices": changed[:10]})
        self.known.update(batch.vertices)
        self.history.update(answer)
        self.batch_colorings.append(answer)
        logger.debug(f"batch {index}: {len(batch.vertices)} vertices, "
                     f"{len(set(answer.values()))} colors, max so far {max(self.history.values(), default=0)}")
        return answer


def optimum(g: Graph, objective: str, intervals: Optional[Sequence[Interval]] = None,
            witness: Optional[Mapping[str, int]] = None,
            limit: Optional[int] = None) -> Tuple[int, str, Dict[str, int]]:
    """(cost, "exact" | "bound", witness coloring) for the optimum of g."""
    if objective == "colors" and intervals is not None and len(intervals) == g.n:
        return max_clique_size(intervals), "exact", interval_sweep_coloring(intervals)
    if oracles.within_limits(g, objective, limit):
        cost, found = oracles.exact_optimum(g, objective, limit)
        return cost, "exact", dict(found)
    if witness is not None:
        coloring = Coloring(witness)
        logger.info(f"optimum of {g.n} vertices is out of oracle range, using the witnessed bound")
        return coloring.cost(objective), "bound", dict(coloring)
    logger.warning(f"optimum of {g.n} vertices is out of oracle range, falling back to a DSATUR bound")
    found = oracles.dsatur_coloring(g)
    return found.cost(objective), "bound", dict(found)


def _report(algorithm: OnlineColorer, feeder: _Feeder, g: Graph, objective: str,
            opt: Tuple[int, str, Dict[str, int]], witness_cost: Optional[int] = None) -> RatioReport:
    coloring = Coloring(feeder.history)
    cost = coloring.cost(objective)
    opt_cost, opt_kind, _ = opt
    ratio = Fraction(cost, opt_cost) if opt_cost else Fraction(1)
    return RatioReport(
        algorithm=algorithm.name,
        objective=objective,
        n=g.n,
        k=len(feeder.batch_colorings),
        algorithm_cost=cost,
        opt_cost=opt_cost,
        opt_kind=opt_kind,
        witness_cost=witness_cost,
        ratio=ratio,
        max_color=coloring.max_color,
        color_sum=coloring.color_sum,
        distinct_colors=len(coloring.distinct_colors),
        batch_colorings=feeder.batch_colorings,
        diagnostics=algorithm.diagnostics(),
    )


def _check_mode(algorithm: OnlineColorer, mode: str) -> None:
    if mode not in algorithm.modes:
        raise ParameterError(f"algorithm {algorithm.name} does not support {mode} instances")


def run_instance(algorithm: OnlineColorer, instance: BatchedGraphInstance, objective: str = "colors",
                 limit: Optional[int] = None, k: Optional[int] = None) -> RatioReport:
    """Feed a fixed instance batch by batch and measure the ratio against the optimum.

    k-aware algorithms are told k (default: the instance's batch count) before the first batch.
    """
    instance.validate()
    _check_mode(algorithm, instance.kind)
    algorithm.start(k or instance.k)
    logger.info(f"run: {algorithm.name} on {instance.kind} instance, k={instance.k}, objective={objective}")
    feeder = _Feeder(algorithm)
    for batch in instance.batches:
        feeder.feed(batch)
    g = instance.graph()
    intervals = instance.intervals() if instance.kind == "intervals" else None
    opt = optimum(g, objective, intervals, limit=limit)
    report = _report(algorithm, feeder, g, objective, opt)
    logger.info(f"run done: cost {report.algorithm_cost}, opt {report.opt_cost} ({report.opt_kind}), "
                f"ratio {report.ratio}")
    return report


def check_graph_class(adversary: Adversary, g: Graph) -> None:
    claimed = adversary.graph_class
    if claimed in ("forest", "tree") and g.n:
        nxg = g.to_networkx()
        ok = nx.is_forest(nxg) if claimed == "forest" else nx.is_tree(nxg)
        if not ok:
            raise InconsistentInstance(f"{adversary.name}: final instance is not a {claimed}")
    elif claimed == "interval":
        reps = adversary.representation()
        if reps is None:
            raise InconsistentInstance(f"{adversary.name}: no interval representation revealed")
        if sorted(iv.id for iv in reps) != sorted(g.vertices):
            raise InconsistentInstance(f"{adversary.name}: representation does not match the vertices")
        rep_edges = {frozenset(e) for e in interval_graph(reps).edges()}
        if rep_edges != {frozenset(e) for e in g.edges()}:
            raise InconsistentInstance(f"{adversary.name}: edges disagree with the interval representation")
        omega = adversary.claimed_omega()
        if omega is not None and max_clique_size(reps) != omega:
            raise InconsistentInstance(f"{adversary.name}: clique number is not the claimed {omega}")


def run_duel(algorithm: OnlineColorer, adversary: Adversary, objective: Optional[str] = None,
             limit: Optional[int] = None) -> Transcript:
    """Alternate adversary batches and algorithm answers until the adversary stops."""
    objective = objective or adversary.objective
    _check_mode(algorithm, adversary.mode)
    algorithm.start(adversary.k)
    logger.info(f"duel: {algorithm.name} vs {adversary.name} {adversary.params()}")
    feeder = _Feeder(algorithm)
    while True:
        batch = adversary.next_batch(Coloring(feeder.history))
        if batch is None:
            break
        feeder.feed(batch)

    instance = BatchedGraphInstance(tuple(adversary.batches))
    instance.validate()
    g = instance.graph()
    check_graph_class(adversary, g)
    witness = adversary.witness()
    result = validate_coloring(g, witness)
    if not result.ok:
        raise InconsistentInstance(f"{adversary.name}: witness coloring is not proper", result.as_dict())
    witness_cost = Coloring(witness).cost(objective)
    reps = adversary.representation()
    intervals = reps if (reps is not None and objective == "colors") else None
    opt = optimum(g, objective, intervals, witness=witness, limit=limit)
    if opt[0] > witness_cost:
        raise InconsistentInstance(f"{adversary.name}: witness cost {witness_cost} is below the optimum {opt[0]}")
    report = _report(algorithm, feeder, g, objective, opt, witness_cost)
    guarantee = adversary.guarantee(feeder.history)
    if not guarantee.passed:
        logger.warning(f"guarantee failed: {guarantee.statement} (observed {guarantee.observed})")
    logger.info(f"duel done: {report.algorithm_cost} vs opt {report.opt_cost} ({report.opt_kind}), "
                f"ratio {report.ratio}")
    return Transcript(
        adversary=adversary.name,
        params=adversary.params(),
        algorithm=algorithm.name,
        objective=objective,
        instance=InstanceFile.from_instance(instance),
        representation=[IntervalModel.from_interval(iv) for iv in reps] if reps is not None else None,
        witness=witness,
        report=report,
        guarantee=guarantee,
        placement=adversary.placement(),
    )


def _duel_worker(job: Tuple[str, Dict[str, Any], str, Dict[str, Any], Optional[str]]) -> Dict[str, Any]:
    from batchcolor.services.registry import build_adversary, build_algorithm

    adversary_name, params, algorithm_name, options, objective = job
    transcript = run_duel(build_algorithm(algorithm_name, **options), build_adversary(adversary_name, params),
                          objective)
    return transcript.model_dump(mode="json")


def run_trials(adversary_name: str, params: Dict[str, Any], algorithm_name: str, trials: int,
               options: Optional[Dict[str, Any]] = None, objective: Optional[str] = None,
               workers: Optional[int] = None) -> TrialSummary:
    """Independent duels with seeds 0..trials-1, fanned out over a process pool."""
    if trials < 1:
        raise ParameterError("trials must be positive")
    options = dict(options or {})
    base_seed = options.get("seed") or 0
    jobs = [(adversary_name, params, algorithm_name, {**options, "seed": base_seed + t}, objective)
            for t in range(trials)]
    workers = workers or get_settings().max_workers
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            dumps = list(pool.map(_duel_worker, jobs))
    else:
        dumps = [_duel_worker(job) for job in jobs]
    transcripts = [Transcript.model_validate(d) for d in dumps]
    ratios = [t.report.ratio for t in transcripts]
    return TrialSummary(
        trials=trials,
        passed=sum(t.guarantee.passed for t in transcripts),
        worst_ratio=max(ratios),
        best_ratio=min(ratios),
        transcripts=transcripts,
    )
