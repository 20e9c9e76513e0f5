"""Scoring for the post-session instruments: the 10-item usability scale,
the six-dimension workload index, and custom 5-point Likert sections."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .core import ValidationError

#: Workload dimensions, rated 1..7.
TLX_DIMENSIONS = ("mental", "physical", "temporal", "performance", "effort", "frustration")


class UsabilityBand(Enum):
    NOT_ACCEPTABLE = "not_acceptable"
    MARGINAL = "marginal"
    ACCEPTABLE = "acceptable"


@dataclass(frozen=True)
class SusResponse:
    """Ten usability items, each rated 1 (strongly disagree) to 5 (strongly
    agree). Real values are accepted so that item-mean vectors can be scored
    as a pseudo-respondent."""

    items: tuple[float, ...]

    def __post_init__(self):
        problems = []
        if len(self.items) != 10:
            problems.append(f"expected 10 items, got {len(self.items)}")
        for i, v in enumerate(self.items, start=1):
            if not (isinstance(v, (int, float)) and math.isfinite(v)) or not 1 <= v <= 5:
                problems.append(f"item {i} value {v!r} outside 1..5")
        if problems:
            raise ValidationError(problems)


@dataclass(frozen=True)
class SusResult:
    score: float
    band: UsabilityBand


def score_sus(response: SusResponse | Sequence[float]) -> SusResult:
    """Standard scoring: odd items contribute (response - 1), even items
    (5 - response); the sum is multiplied by 2.5 for a 0..100 scale."""
    if not isinstance(response, SusResponse):
        response = SusResponse(tuple(response))
    total = 0.0
    for i, v in enumerate(response.items, start=1):
        total += (v - 1) if i % 2 == 1 else (5 - v)
    score = 2.5 * total
    return SusResult(score=score, band=band_sus(score))


def band_sus(score: float) -> UsabilityBand:
    """Interpretation bands: below 50 not acceptable, 50..70 marginal
    (inclusive), above 70 acceptable."""
    if not 0 <= score <= 100:
        raise ValidationError([f"score {score} outside 0..100"])
    if score < 50:
        return UsabilityBand.NOT_ACCEPTABLE
    if score <= 70:
        return UsabilityBand.MARGINAL
    return UsabilityBand.ACCEPTABLE


@dataclass(frozen=True)
class TlxResponse:
    """Six workload ratings on a 7-point scale, ordered as TLX_DIMENSIONS."""

    items: tuple[int, ...]

    def __post_init__(self):
        problems = []
        if len(self.items) != 6:
            problems.append(f"expected 6 items, got {len(self.items)}")
        for name, v in zip(TLX_DIMENSIONS, self.items):
            if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= 7:
                problems.append(f"{name} value {v!r} outside 1..7")
        if problems:
            raise ValidationError(problems)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(TLX_DIMENSIONS, self.items))


@dataclass(frozen=True)
class DimensionSummary:
    n: int
    mean: float
    sd: float | None  # None flags the undefined single-response case


def summarize_tlx(responses: Sequence[TlxResponse]) -> dict[str, DimensionSummary]:
    """Sample mean and sample SD (n-1 denominator) per workload dimension."""
    if not responses:
        raise ValidationError(["no workload responses to summarize"])
    out = {}
    n = len(responses)
    for idx, name in enumerate(TLX_DIMENSIONS):
        vals = [r.items[idx] for r in responses]
        mean = sum(vals) / n
        if n < 2:
            sd = None
        else:
            sd = math.sqrt(sum((v - mean) ** 2 for v in vals) / (n - 1))
        out[name] = DimensionSummary(n=n, mean=mean, sd=sd)
    return out


@dataclass(frozen=True)
class LikertSummary:
    n: int
    counts: dict[int, int]  # level -> count, levels 1..5
    percentages: dict[int, float]
    top2box_pct: float  # share of responses at 4 or 5


def likert_frequencies(ratings: Iterable[int]) -> LikertSummary:
    ratings = list(ratings)
    if not ratings:
        raise ValidationError(["no ratings to tabulate"])
    problems = [
        f"rating {v!r} outside 1..5"
        for v in ratings
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= 5
    ]
    if problems:
        raise ValidationError(problems)
    n = len(ratings)
    counts = {level: 0 for level in range(1, 6)}
    for v in ratings:
        counts[v] += 1
    percentages = {level: 100.0 * c / n for level, c in counts.items()}
    top2 = 100.0 * (counts[4] + counts[5]) / n
    return LikertSummary(n=n, counts=counts, percentages=percentages, top2box_pct=top2)


@dataclass(frozen=True)
class QuestionnaireBundle:
    """Everything one participant filled in after play. Likert sections map
    section name -> item name -> rating."""

    sus: SusResponse | None = None
    tlx: TlxResponse | None = None
    likert: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "sus": list(self.sus.items) if self.sus else None,
            "tlx": list(self.tlx.items) if self.tlx else None,
            "likert": {s: dict(items) for s, items in self.likert.items()},
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "QuestionnaireBundle":
        return cls(
            sus=SusResponse(tuple(d["sus"])) if d.get("sus") else None,
            tlx=TlxResponse(tuple(d["tlx"])) if d.get("tlx") else None,
            likert={s: dict(items) for s, items in d.get("likert", {}).items()},
        )
