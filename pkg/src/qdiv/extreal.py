"""Extended-real scalars: a finite float, plus infinity, or minus infinity.

Divergences genuinely take the value +inf (support violations), so the value
type is an explicit tri-state rather than a sentinel double. ``as_float`` maps
to ``math.inf`` for order comparisons; JSON serialization uses the strings
"inf" / "-inf" because JSON has no infinity literal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ExtendedReal:
    kind: str  # "finite" | "pos_inf" | "neg_inf"
    _value: float = field(default=0.0)

    def __post_init__(self) -> None:
        if self.kind not in ("finite", "pos_inf", "neg_inf"):
            raise ValueError(f"bad ExtendedReal kind: {self.kind!r}")
        if self.kind == "finite":
            v = float(self._value)
            if math.isnan(v) or math.isinf(v):
                raise ValueError(f"finite ExtendedReal must hold a finite float, got {v!r}")

    @staticmethod
    def finite(value: float) -> "ExtendedReal":
        return ExtendedReal("finite", float(value))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_pos_inf(self) -> bool:
        return self.kind == "pos_inf"

    @property
    def is_neg_inf(self) -> bool:
        return self.kind == "neg_inf"

    @property
    def value(self) -> float:
        """The finite value; raises on infinities."""
        if self.kind != "finite":
            raise ValueError(f"ExtendedReal is {self.kind}, has no finite value")
        return self._value

    def as_float(self) -> float:
        """Collapse to a float, mapping the infinite states to IEEE infinities."""
        if self.kind == "pos_inf":
            return math.inf
        if self.kind == "neg_inf":
            return -math.inf
        return self._value

    def to_json(self):
        """JSON-safe form: a number, or the string "inf" / "-inf"."""
        if self.kind == "pos_inf":
            return "inf"
        if self.kind == "neg_inf":
            return "-inf"
        return self._value

    @staticmethod
    def from_json(obj) -> "ExtendedReal":
        if obj == "inf":
            return POS_INF
        if obj == "-inf":
            return NEG_INF
        return ExtendedReal.finite(float(obj))

    @staticmethod
    def from_float(x: float) -> "ExtendedReal":
        """Classify an IEEE float (must not be NaN)."""
        if math.isnan(x):
            raise ValueError("NaN has no extended-real meaning")
        if math.isinf(x):
            return POS_INF if x > 0 else NEG_INF
        return ExtendedReal.finite(x)

    def __neg__(self) -> "ExtendedReal":
        if self.kind == "pos_inf":
            return NEG_INF
        if self.kind == "neg_inf":
            return POS_INF
        return ExtendedReal.finite(-self._value)

    def __repr__(self) -> str:
        if self.kind == "pos_inf":
            return "ExtendedReal(+inf)"
        if self.kind == "neg_inf":
            return "ExtendedReal(-inf)"
        return f"ExtendedReal({self._value!r})"


POS_INF = ExtendedReal("pos_inf")
NEG_INF = ExtendedReal("neg_inf")
