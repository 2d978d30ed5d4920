"""Result records shared by the checkers, the measure module and the CLI."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

#: Relative slack used to turn numerical ratios into pass/fail verdicts.
TOL = 1e-8


def verdict(ratio: float, strict: bool, tol: float = TOL) -> bool:
    """``ratio > 1 - tol`` for strict statements, ``ratio >= 1 - tol`` otherwise."""
    if math.isnan(ratio):
        return False
    return ratio > 1.0 - tol if strict else ratio >= 1.0 - tol


@dataclass(frozen=True)
class InequalityReport:
    inequality_id: str
    n: int
    p: float | None
    q: float | None
    lhs: float
    rhs: float
    ratio: float
    strict: bool
    passed: bool | None
    tol: float
    poly_digest: list
    class_tag: str
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d = {
            "inequality_id": self.inequality_id,
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "strict": self.strict,
            "pass": self.passed,
            "tol": self.tol,
            "poly_digest": self.poly_digest,
            "class_tag": self.class_tag,
        }
        if self.extra:
            d["extra"] = self.extra
        return d

    def same_outcome(self, other: "InequalityReport") -> bool:
        """Equal degree, sides, ratio, strictness, verdict and polynomial."""
        keys = ("n", "lhs", "rhs", "ratio", "strict", "pass", "poly_digest", "class_tag")
        a, b = self.to_dict(), other.to_dict()
        return all(a[k] == b[k] for k in keys)


@dataclass(frozen=True)
class MeasureEstimate:
    alpha_or_delta: float
    measure: float
    bound: float
    passed: bool
    resolution: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha_or_delta": self.alpha_or_delta,
            "measure": self.measure,
            "bound": self.bound,
            "pass": self.passed,
            "resolution": self.resolution,
        }
