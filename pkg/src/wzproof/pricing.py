"""Prices of results: operation counts plus an exact error-probability bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from ._meter import Meter

PROVED = "proved"
SEMI = "semi-rigorous"
UNPRICED = "unpriced"


@dataclass(frozen=True)
class Cost:
    mults: int = 0
    unknowns: int = 0
    equations: int = 0
    peak_terms: int = 0
    wall_ms: float = field(default=0.0, compare=False)

    def __post_init__(self):
        for name in ("mults", "unknowns", "equations", "peak_terms"):
            if getattr(self, name) < 0:
                raise ValueError(f"negative cost counter {name}")

    def __add__(self, other: "Cost") -> "Cost":
        return Cost(
            self.mults + other.mults,
            self.unknowns + other.unknowns,
            self.equations + other.equations,
            self.peak_terms + other.peak_terms,
            self.wall_ms + other.wall_ms,
        )

    @classmethod
    def from_meter(cls, m: Meter) -> "Cost":
        return cls(m.mults, m.unknowns, m.equations, m.peak_terms, m.elapsed_ms())

    def counters(self) -> dict[str, int]:
        """Deterministic counters only (wall time excluded)."""
        return {"mults": self.mults, "unknowns": self.unknowns, "equations": self.equations, "peak_terms": self.peak_terms}

    def strictly_below(self, other: "Cost", keys=("mults", "peak_terms")) -> bool:
        return all(getattr(self, k) < getattr(other, k) for k in keys)


def exponent_of(bound: Fraction) -> int:
    """floor(-log2(bound)), clamped at 0."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    inv = 1 / Fraction(bound)
    if inv < 1:
        return 0
    return (inv.numerator // inv.denominator).bit_length() - 1


@dataclass(frozen=True)
class PriceTag:
    rigor: str
    cost: Cost = Cost()
    error_bound: Fraction | None = None  # exact bound on error probability (semi-rigorous)

    @classmethod
    def proved(cls, cost: Cost = Cost()) -> "PriceTag":
        return cls(PROVED, cost, Fraction(0))

    @classmethod
    def semi(cls, exponent: int | None = None, cost: Cost = Cost(), bound: Fraction | None = None) -> "PriceTag":
        if bound is None:
            if exponent is None or exponent < 0:
                raise ValueError("need a nonnegative exponent or an explicit bound")
            bound = Fraction(1, 2 ** exponent)
        return cls(SEMI, cost, Fraction(bound))

    @classmethod
    def unpriced(cls, cost: Cost = Cost()) -> "PriceTag":
        return cls(UNPRICED, cost, None)

    @property
    def confidence_exponent(self) -> float | int | None:
        if self.rigor == PROVED:
            return math.inf
        if self.rigor == SEMI:
            return exponent_of(self.error_bound)
        return None

    def with_cost(self, cost: Cost) -> "PriceTag":
        return replace(self, cost=cost)

    def describe(self) -> str:
        if self.rigor == PROVED:
            return "proved (error probability 0)"
        if self.rigor == SEMI:
            return f"semi-rigorous (error probability <= 2^-{self.confidence_exponent})"
        return "unpriced"

    def to_json(self) -> dict:
        e = self.confidence_exponent
        return {
            "mode": self.rigor,
            "confidence_exponent": "inf" if e == math.inf else e,
            "cost": self.cost.counters(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PriceTag":
        cost = Cost(**data["cost"])
        mode = data["mode"]
        if mode == PROVED:
            return cls.proved(cost)
        if mode == SEMI:
            return cls.semi(int(data["confidence_exponent"]), cost)
        if mode == UNPRICED:
            return cls.unpriced(cost)
        raise ValueError(f"unknown price mode {mode!r}")


def compose(p: PriceTag, q: PriceTag) -> PriceTag:
    """Price of a deduction that uses both results: costs add, error bounds add."""
    cost = p.cost + q.cost
    if p.rigor == UNPRICED or q.rigor == UNPRICED:
        return PriceTag.unpriced(cost)
    if p.rigor == PROVED and q.rigor == PROVED:
        return PriceTag.proved(cost)
    return PriceTag(SEMI, cost, p.error_bound + q.error_bound)


@dataclass(frozen=True)
class CostEstimate:
    unknowns: int
    equations: int
    predicted_ops: int
    estimate: bool = True


def estimate_cost(F, L: int) -> CostEstimate:
    """Predicted size of the order-L system and a cubic elimination count."""
    from .telescope import build_linear_system

    system = build_linear_system(F, L)
    u, e = system.unknowns, system.equations
    return CostEstimate(u, e, u * u * max(u, e))
