"""Number-kind handling: exact rationals when possible, floats otherwise."""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Number = Union[Fraction, float]

# Orientation predicates on floats treat |sin(angle)| below this as collinear.
GEOM_TOL = 1e-9


def is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def parse_number(text) -> Number:
    """Parse ``"3"``, ``"-1/2"``, ``"0.25"`` or a JSON number.

    Strings and ints become exact :class:`Fraction` values; JSON floats stay
    floats so that genuinely inexact input is not silently promoted.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a number: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        if not math.isfinite(text):
            raise ValueError(f"non-finite number: {text!r}")
        return text
    if isinstance(text, str):
        s = text.strip()
        low = s.lower()
        if low in {"nan", "inf", "+inf", "-inf", "infinity", "-infinity"}:
            raise ValueError(f"non-finite number: {text!r}")
        return Fraction(s)
    raise ValueError(f"not a number: {text!r}")


def unify(values: Iterable) -> list[Number]:
    """Convert a batch of coordinates to one number kind."""
    vals = list(values)
    if all_exact(vals):
        return [Fraction(v) for v in vals]
    return [float(v) for v in vals]


def fmt_sig(x, digits: int = 12) -> float:
    """Round ``x`` to ``digits`` significant digits (for printing)."""
    x = float(x)
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def exact_str(x) -> str | None:
    """``"p/q"`` for exact values, ``None`` for floats."""
    if is_exact(x):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    return None


def number_str(x) -> str:
    """Serialize a coordinate: rationals as ``p/q`` (or ``p``), floats via repr."""
    if is_exact(x):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return repr(float(x))
