"""Sum-coloring adversaries for known and unknown batch counts."""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from batchcolor.core.config import get_settings
from batchcolor.core.errors import InvariantViolation, ParameterError
from batchcolor.core.graph import Batch, Graph, validate_coloring
from batchcolor.models.schemas import GuaranteeCheck
from batchcolor.services.engine import Adversary
from batchcolor.services.sum_coloring import ScheduleFunction, parse_schedule

logger = logging.getLogger(__name__)

CONNECTOR = "k_connect"


class SumKnownAdversary(Adversary):
    """Growing independent sets hanging off a clique of designated low-colored vertices."""

    name = "sum-known"
    objective = "sum"

    def __init__(self, k: int, M: int, connect: bool = False, max_k: Optional[int] = None,
                 max_vertices: Optional[int] = None):
        settings = get_settings()
        max_k = max_k if max_k is not None else settings.sum_known_max_k
        max_vertices = max_vertices if max_vertices is not None else settings.sum_known_max_vertices
        if not 1 <= k <= max_k:
            raise ParameterError(f"sum-known needs 1 <= k <= {max_k}, got {k}")
        if M <= 2 * k * k:
            raise ParameterError(f"sum-known needs M > 2k^2 = {2 * k * k}, got {M}")
        if M ** k > max_vertices:
            raise ParameterError(f"sum-known: M^k = {M ** k} exceeds {max_vertices} vertices")
        if connect and k != 2:
            raise ParameterError("sum-known connect needs k = 2")
        super().__init__(k)
        self.M = M
        self.connect = connect
        self.graph_class = "forest" if k <= 2 else "any"
        self.designated: List[str] = []
        self.stopped_early = False
        self.done = False

    def params(self) -> Dict[str, Any]:
        return {"k": self.k, "M": self.M, "connect": self.connect}

    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        if self.done:
            return None
        i = len(self.batches)
        if i:
            if i == self.k:
                self.done = True
                return None
            last = self.batches[-1].vertices
            cheap = [v for v in last if coloring[v] <= self.k - 1]
            if not cheap:
                logger.info(f"sum-known: every batch-{i} vertex got a color >= {self.k}, stopping")
                self.stopped_early = True
                self.done = True
                return None
            self.designated.append(min(cheap))
        i += 1
        vertices = [f"k{i}_{n:07d}" for n in range(self.M ** i)]
        edges = [(v, d) for v in vertices for d in self.designated]
        if self.connect and i == self.k:
            vertices.append(CONNECTOR)
            edges += [(CONNECTOR, v) for v in self.batches[0].vertices]
            self.graph_class = "tree"
        return self.emit(Batch(tuple(vertices), tuple(edges)))

    def witness(self) -> Dict[str, int]:
        colors = {v: 1 for b in self.batches for v in b.vertices}
        for i, v in enumerate(self.designated, start=1):
            colors[v] = i + 1
        if CONNECTOR in colors:
            colors[CONNECTOR] = 3
        return colors

    def bound(self) -> int:
        """Upper bound M^j + 2M^(j-1) on the optimum after j batches."""
        j = len(self.batches)
        return self.M ** j + 2 * self.M ** (j - 1)

    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        j = len(self.batches)
        required = self.k * self.M ** j
        observed = sum(coloring.values())
        return GuaranteeCheck(
            statement=f"color sum at least k*M^{j} = {required}",
            passed=observed >= required,
            observed=Fraction(observed),
            required=Fraction(required),
            early_stop=self.stopped_early,
        )

    def placement(self) -> Dict[str, Any]:
        return {"designated": list(self.designated), "optimum_bound": self.bound()}


class SumUnknownAdversary(Adversary):
    """Batches of disjoint cliques; cheaply colored vertices of one clique are wired to all later vertices.

    Runs at structural scale only: the witnessed optimum is checked against the
    19 M^(i+1) / f(i)^2 bound only when M exceeds 130 C^2 f(k)^2.
    """

    name = "sum-unknown"
    objective = "sum"

    def __init__(self, k: int, M: int, schedule: Optional[ScheduleFunction] = None, C: int = 10,
                 c: Optional[Fraction] = None, max_k: Optional[int] = None,
                 max_vertices: Optional[int] = None):
        settings = get_settings()
        max_k = max_k if max_k is not None else settings.sum_unknown_max_k
        max_vertices = max_vertices if max_vertices is not None else settings.sum_unknown_max_vertices
        self.schedule = schedule or parse_schedule()
        if not 1 <= k <= max_k:
            raise ParameterError(f"sum-unknown needs 1 <= k <= {max_k}, got {k}")
        if C < 1:
            raise ParameterError(f"sum-unknown needs C >= 1, got {C}")
        if M < self.schedule(k):
            raise ParameterError(f"sum-unknown needs M >= f(k) = {self.schedule(k)}, got {M}")
        super().__init__(k)
        self.M = M
        self.C = C
        self.c = c
        total = sum(M ** (i - 1) * self.clique_size(i) for i in range(1, k + 1))
        if total > max_vertices:
            raise ParameterError(f"sum-unknown: {total} vertices exceed {max_vertices}")
        self.cliques: List[List[List[str]]] = []
        self.special: List[str] = []
        self.special_by_batch: Dict[int, List[str]] = {}
        self.special_colors: Dict[str, int] = {}
        self.edges: List[Tuple[str, str]] = []
        self.stopped_early = False
        self.done = False

    def params(self) -> Dict[str, Any]:
        return {"k": self.k, "M": self.M, "f": self.schedule.describe(), "C": self.C,
                "c": [self.c.numerator, self.c.denominator] if self.c is not None else None}

    def clique_size(self, i: int) -> int:
        return 3 * (self.M // self.schedule(i))

    def small_limit(self) -> int:
        return 10 * self.C * self.M

    def next_batch(self, coloring: Mapping[str, int]) -> Optional[Batch]:
        if self.done:
            return None
        i = len(self.batches)
        if i:
            self._select_special(i, coloring)
            if i == self.k:
                self.done = True
                return None
            if self.c is not None and self._over_threshold(i, coloring):
                self.stopped_early = True
                self.done = True
                return None
        return self.emit(self._clique_batch(i + 1))

    def _clique_batch(self, i: int) -> Batch:
        size = self.clique_size(i)
        cliques = [[f"u{i}_{c:05d}_{m:03d}" for m in range(size)] for c in range(self.M ** (i - 1))]
        self.cliques.append(cliques)
        vertices = [v for ids in cliques for v in ids]
        edges = [(ids[a], ids[b]) for ids in cliques for a in range(size) for b in range(a + 1, size)]
        edges += [(v, s) for v in vertices for s in self.special]
        self.edges += edges
        logger.debug(f"sum-unknown: batch {i} = {len(cliques)} cliques of {size}")
        return Batch(tuple(vertices), tuple(edges))

    def _select_special(self, i: int, coloring: Mapping[str, int]) -> None:
        f_i = self.schedule(i)
        small = self.small_limit()
        for c, ids in enumerate(self.cliques[i - 1]):
            cheap = [v for v in ids if coloring[v] <= small]
            if len(cheap) * f_i >= self.M:
                self.special += cheap
                self.special_colors.update({v: coloring[v] for v in cheap})
                self.special_by_batch[i] = cheap
                logger.info(f"sum-unknown: batch {i} clique {c} gives {len(cheap)} special vertices")
                return

    def _over_threshold(self, i: int, coloring: Mapping[str, int]) -> bool:
        spent = sum(coloring.values())
        return spent > self.c * self.schedule(i) * sum(self.witness().values())

    def witness(self) -> Dict[str, int]:
        """Non-special clique members get 1..n_K; a special vertex gets 3M plus its color."""
        colors: Dict[str, int] = {}
        special = set(self.special)
        for cliques in self.cliques:
            for ids in cliques:
                plain = [v for v in ids if v not in special]
                colors.update({v: n for n, v in enumerate(plain, start=1)})
        colors.update({v: 3 * self.M + self.special_colors[v] for v in self.special})
        return colors

    def guarantee(self, coloring: Mapping[str, int]) -> GuaranteeCheck:
        problems = self.structural_problems(coloring)
        if problems:
            raise InvariantViolation("sum-unknown structure broken", {"problems": problems})
        j = len(self.batches)
        observed = Fraction(sum(self.witness().values()))
        required = Fraction(19 * self.M ** (j + 1), self.schedule(j) ** 2)
        applies = self.claim_applies()
        return GuaranteeCheck(
            statement=("witness sum within 19 M^(j+1)/f(j)^2" if applies else
                       "structural checks only; M is below 130 C^2 f(k)^2"),
            passed=observed <= required if applies else True,
            observed=observed,
            required=required,
            early_stop=self.stopped_early,
        )

    def claim_applies(self) -> bool:
        return self.M > 130 * self.C ** 2 * self.schedule(self.k) ** 2

    def structural_problems(self, coloring: Mapping[str, int]) -> List[str]:
        problems = []
        for i, cliques in enumerate(self.cliques, start=1):
            sizes = {len(ids) for ids in cliques}
            if len(cliques) != self.M ** (i - 1) or sizes - {self.clique_size(i)}:
                problems.append(f"batch {i} has {len(cliques)} cliques of sizes {sorted(sizes)}")
        small = [coloring[v] for v in self.special]
        if len(set(small)) != len(small) or any(c > self.small_limit() for c in small):
            problems.append("special vertices do not map injectively to small colors")
        later = {}
        for i, batch in enumerate(self.batches, start=1):
            for v in batch.vertices:
                later[v] = i
        wired = {frozenset(e) for e in self.edges}
        for i, specials in self.special_by_batch.items():
            for s in specials:
                for v, b in later.items():
                    if b > i and frozenset((s, v)) not in wired:
                        problems.append(f"special {s} is not wired to {v}")
                        break
        for u, v in self.edges:
            if later[u] != later[v] and min((u, v), key=later.__getitem__) not in self.special_colors:
                problems.append(f"edge ({u}, {v}) joins batches without a special endpoint")
                break
        g = Graph.from_edges(list(later), self.edges)
        result = validate_coloring(g, self.witness())
        if not result.ok:
            problems.append(f"witness coloring not proper: {result.as_dict()}")
        return problems

    def placement(self) -> Dict[str, Any]:
        return {
            "special": {str(i): ids for i, ids in self.special_by_batch.items()},
            "clique_sizes": [self.clique_size(i) for i in range(1, len(self.cliques) + 1)],
            "claim_applies": self.claim_applies(),
        }
