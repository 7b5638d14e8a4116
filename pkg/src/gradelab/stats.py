"""Central tendency and chart-data analytics over class scores.

All operations are stateless pure functions on a floating-point view of
the exact rational totals. "below" a threshold means strictly <, "at or
above" means >= (documented boundary choice).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyDataset, MixedAssignments, UnknownStudent
from .grading import GradeRecord, latest_records
from .models import Rubric
from .numbers import Score, format_score


@dataclass(frozen=True)
class Dataset:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(not math.isfinite(v) for v in vals):
            raise ValueError("dataset values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_scores(cls, scores: Iterable[Score | float]) -> "Dataset":
        return cls(tuple(float(s) for s in scores))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class StatsSummary:
    n: int
    mean: float
    median: float
    modes: tuple[float, ...]  # ascending, all values with maximal frequency
    min: float
    max: float


@dataclass(frozen=True)
class ChartData:
    kind: str  # "bar" | "pie"
    title: str
    series: tuple[tuple[str, float], ...]


def mean(d: Dataset) -> float:
    if len(d) == 0:
        raise EmptyDataset("mean of empty dataset")
    # fsum: compensated summation
    return math.fsum(d.values) / len(d)


def median(d: Dataset) -> float:
    if len(d) == 0:
        raise EmptyDataset("median of empty dataset")
    ordered = sorted(d.values)
    n = len(ordered)
    if n % 2 == 1:
        return ordered[(n - 1) // 2]
    return (ordered[n // 2 - 1] + ordered[n // 2]) / 2


def mode(d: Dataset) -> list[float]:
    """All values with maximal frequency, ascending. A dataset of distinct
    values returns every value (each is a mode with frequency 1)."""
    if len(d) == 0:
        raise EmptyDataset("mode of empty dataset")
    counts = Counter(d.values)
    top = max(counts.values())
    return sorted(v for v, c in counts.items() if c == top)


def central_tendency(d: Dataset) -> StatsSummary:
    if len(d) == 0:
        raise EmptyDataset("summary of empty dataset")
    return StatsSummary(
        n=len(d),
        mean=mean(d),
        median=median(d),
        modes=tuple(mode(d)),
        min=min(d.values),
        max=max(d.values),
    )


def threshold_partition(d: Dataset, t: float) -> tuple[int, int]:
    """(count below t, count at or above t); empty datasets give (0, 0)."""
    below = sum(1 for v in d.values if v < t)
    return below, len(d) - below


def bar_chart_data(scores: list[tuple[str, Score]],
                   names: Mapping[str, str],
                   title: str = "Total marks") -> ChartData:
    series = []
    for student_id, total in scores:
        if student_id not in names:
            raise UnknownStudent(f"no name for student {student_id}")
        series.append((names[student_id], float(total)))
    return ChartData(kind="bar", title=title, series=tuple(series))


def pie_chart_data(d: Dataset, t: Score | float,
                   title: str = "Threshold marks") -> ChartData:
    shown = format_score(t) if not isinstance(t, float) else f"{t:g}"
    below, at_or_above = threshold_partition(d, float(t))
    return ChartData(
        kind="pie",
        title=title,
        series=(
            (f"below {shown}", float(below)),
            (f"at or above {shown}", float(at_or_above)),
        ),
    )


def criterion_breakdown(records: Iterable[GradeRecord],
                        rubric: Rubric) -> dict[str, StatsSummary]:
    """Per-criterion summary of selected-level points across records."""
    records = list(records)
    assignments = {r.assignment_id for r in records}
    if len(assignments) > 1:
        raise MixedAssignments(f"records span assignments {sorted(assignments)}")
    if not records:
        return {}
    current = latest_records(records)
    out = {}
    for criterion in rubric.criteria:
        points = [
            float(criterion.points_for(rec.selections[criterion.name]))
            for rec in current
        ]
        out[criterion.name] = central_tendency(Dataset.from_scores(points))
    return out
