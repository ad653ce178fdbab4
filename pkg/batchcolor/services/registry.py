"""Name -> factory tables for the algorithm suite and the adversaries."""

import logging
from typing import Any, Callable, Dict, Mapping, Optional

from batchcolor.core.errors import ParameterError
from batchcolor.services.coloring import FirstFitColorer, GenericBatchColorer, RandomProperColorer
from batchcolor.services.engine import Adversary, OnlineColorer
from batchcolor.services.interval_adversaries import IntervalKTAdversary, IntervalNoRepAdversary
from batchcolor.services.sum_adversaries import SumKnownAdversary, SumUnknownAdversary
from batchcolor.services.sum_coloring import (BatchColorFColorer, FirstFitSumColorer, KBatchColorer,
                                              parse_schedule)
from batchcolor.services.tree_adversary import TreeAdversary
from batchcolor.services.two_batches import TwoBatchesColorer
from batchcolor.utils.rationals import to_fraction

logger = logging.getLogger(__name__)

ALGORITHMS: Dict[str, Callable[..., OnlineColorer]] = {
    "generic-batch": lambda **_: GenericBatchColorer(),
    "first-fit": lambda **_: FirstFitColorer(),
    "random-proper": lambda seed=0, **_: RandomProperColorer(int(seed)),
    "two-batches": lambda **_: TwoBatchesColorer(),
    "k-batch-color": lambda **_: KBatchColorer(),
    "batch-color-f": lambda schedule=None, **_: BatchColorFColorer(parse_schedule(schedule)),
    "first-fit-sum": lambda **_: FirstFitSumColorer(),
}


def _int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    return int(value)


def _flag(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{value!r} is not a flag")


# adversary name -> (class, {param: converter}, required params)
ADVERSARIES: Dict[str, Any] = {
    "tree": (TreeAdversary, {"k": _int, "connect": _flag}, ("k",)),
    "interval-norep": (IntervalNoRepAdversary, {"q": _int}, ("q",)),
    "interval-kt": (IntervalKTAdversary, {"q": _int}, ("q",)),
    "sum-known": (SumKnownAdversary, {"k": _int, "M": _int, "connect": _flag}, ("k", "M")),
    "sum-unknown": (SumUnknownAdversary, {"k": _int, "M": _int, "C": _int, "c": to_fraction, "f": str, "cf": str},
                    ("k", "M")),
}


def parse_params(text: Optional[str]) -> Dict[str, str]:
    """Split "k=2,q=1,M=9" into a dict of raw strings."""
    params: Dict[str, str] = {}
    for part in filter(None, (text or "").split(",")):
        key, sep, value = part.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"parameter {part!r} is not key=value")
        params[key.strip()] = value.strip()
    return params


def build_algorithm(name: str, **options: Any) -> OnlineColorer:
    if name not in ALGORITHMS:
        raise ParameterError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}")
    return ALGORITHMS[name](**{k: v for k, v in options.items() if v is not None})


def build_adversary(name: str, params: Mapping[str, Any]) -> Adversary:
    if name not in ADVERSARIES:
        raise ParameterError(f"unknown adversary {name!r}; choose from {sorted(ADVERSARIES)}")
    cls, converters, required = ADVERSARIES[name]
    missing = [p for p in required if p not in params]
    if missing:
        raise ParameterError(f"adversary {name} needs parameters {missing}")
    kwargs: Dict[str, Any] = {}
    for key, value in params.items():
        if key not in converters:
            logger.warning(f"adversary {name} ignores parameter {key}")
            continue
        try:
            kwargs[key] = converters[key](value)
        except (TypeError, ValueError) as e:
            raise ParameterError(f"bad value for {key}: {e}")
    if name == "sum-unknown":
        schedule = ",".join(f"{p}={kwargs.pop(p)}" for p in ("f", "cf") if p in kwargs)
        kwargs["schedule"] = parse_schedule(schedule or None)
    return cls(**kwargs)
