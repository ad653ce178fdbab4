from fractions import Fraction
from numbers import Rational
from typing import Any, List, Union

RationalLike = Union[int, Fraction, str, List[int], tuple]


def to_fraction(value: Any) -> Fraction:
    """Coerce ints, Fractions, "n/d" strings and [n, d] pairs; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            raise ValueError(f"rational pair must be two integers, got {value!r}")
        if value[1] == 0:
            raise ValueError("rational pair has a zero denominator")
        return Fraction(value[0], value[1])
    if isinstance(value, (Fraction, int)) or isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot read {value!r} as an exact rational")


def to_pair(value: Fraction) -> List[int]:
    value = Fraction(value)
    return [value.numerator, value.denominator]


def floor_fraction(value: Fraction) -> int:
    return value.numerator // value.denominator
