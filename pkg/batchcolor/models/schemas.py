from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, PlainSerializer, PlainValidator, model_validator

from batchcolor.core.graph import Batch, BatchedGraphInstance
from batchcolor.core.intervals import Interval, interval_instance
from batchcolor.utils.rationals import to_fraction, to_pair

# Rationals travel as [numerator, denominator] pairs
RationalPair = Annotated[
    Fraction,
    PlainValidator(to_fraction),
    PlainSerializer(to_pair, return_type=List[int]),
]


class IntervalModel(BaseModel):
    lo: RationalPair
    hi: RationalPair
    lo_closed: bool = True
    hi_closed: bool = True
    id: str

    def to_interval(self) -> Interval:
        return Interval(self.lo, self.hi, self.lo_closed, self.hi_closed, self.id)

    @classmethod
    def from_interval(cls, iv: Interval) -> "IntervalModel":
        return cls(lo=iv.lo, hi=iv.hi, lo_closed=iv.lo_closed, hi_closed=iv.hi_closed, id=iv.id)


class GraphBatchModel(BaseModel):
    vertices: List[str]
    edges: List[List[str]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _pairs(self):
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"edge {e!r} must have two endpoints")
        return self


class InstanceFile(BaseModel):
    """Graph or interval instance, one batch per list entry."""

    kind: Literal["graph", "intervals"]
    batches: List[Union[GraphBatchModel, List[IntervalModel]]]

    @model_validator(mode="after")
    def _batches_match_kind(self):
        for b in self.batches:
            if self.kind == "graph" and not isinstance(b, GraphBatchModel):
                raise ValueError("graph instances need {vertices, edges} batches")
            if self.kind == "intervals" and not isinstance(b, list):
                raise ValueError("interval instances need lists of intervals as batches")
        return self

    def to_instance(self) -> BatchedGraphInstance:
        if self.kind == "intervals":
            return interval_instance([[m.to_interval() for m in b] for b in self.batches])
        return BatchedGraphInstance(tuple(
            Batch(tuple(b.vertices), tuple((u, v) for u, v in b.edges)) for b in self.batches
        ))

    @classmethod
    def from_instance(cls, instance: BatchedGraphInstance) -> "InstanceFile":
        if instance.kind == "intervals":
            return cls(kind="intervals", batches=[
                [IntervalModel.from_interval(iv) for iv in b.intervals] for b in instance.batches
            ])
        return cls(kind="graph", batches=[
            GraphBatchModel(vertices=list(b.vertices), edges=[[u, v] for u, v in b.edges])
            for b in instance.batches
        ])


class ColoringFile(BaseModel):
    colors: Dict[str, int]


class RatioReport(BaseModel):
    algorithm: str
    objective: Literal["colors", "sum"]
    n: int
    k: int
    algorithm_cost: int
    opt_cost: int
    opt_kind: Literal["exact", "bound"]
    witness_cost: Optional[int] = None
    ratio: RationalPair
    max_color: int
    color_sum: int
    distinct_colors: int
    batch_colorings: List[Dict[str, int]] = Field(default_factory=list)
    diagnostics: List[Dict[str, Any]] = Field(default_factory=list)

    def coloring(self) -> Dict[str, int]:
        merged: Dict[str, int] = {}
        for colors in self.batch_colorings:
            merged.update(colors)
        return merged


class GuaranteeCheck(BaseModel):
    statement: str
    passed: bool
    observed: RationalPair
    required: RationalPair
    early_stop: bool = False


class Transcript(BaseModel):
    adversary: str
    params: Dict[str, Any] = Field(default_factory=dict)
    algorithm: str
    objective: Literal["colors", "sum"]
    instance: InstanceFile
    representation: Optional[List[IntervalModel]] = None
    witness: Dict[str, int]
    report: RatioReport
    guarantee: GuaranteeCheck
    placement: Dict[str, Any] = Field(default_factory=dict)


class TrialSummary(BaseModel):
    trials: int
    passed: int
    worst_ratio: RationalPair
    best_ratio: RationalPair
    transcripts: List[Transcript] = Field(default_factory=list)


class ErrorDocument(BaseModel):
    error: str
    type: str
    exit_code: int
    details: Dict[str, Any] = Field(default_factory=dict)


class SolveResult(BaseModel):
    colors: Dict[str, int]
    report: RatioReport


class OracleResult(BaseModel):
    objective: Literal["colors", "sum"]
    optimum: int
    colors: Dict[str, int]


class VerifyResult(BaseModel):
    ok: bool
    monochromatic_edges: List[List[str]] = Field(default_factory=list)
    uncolored: List[str] = Field(default_factory=list)
    invalid_colors: List[str] = Field(default_factory=list)
    unknown_vertices: List[str] = Field(default_factory=list)
