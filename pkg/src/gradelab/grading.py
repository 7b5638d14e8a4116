"""Turns per-criterion level selections into immutable grade records."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Collection, Iterable, Mapping

from .errors import (
    MissingCriterion,
    MixedAssignments,
    StudentNotEnrolled,
    UnknownCriterion,
    UnknownLevel,
)
from .models import Assignment, Rubric, Student, fresh_id, rubric_max_score
from .numbers import Score, percentage_of, render_percentage


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class GradeRecord:
    id: str
    assignment_id: str
    student_id: str
    selections: Mapping[str, str]  # criterion name -> selected level label
    total: Score
    percentage: Score  # exact; render with percentage_display()
    graded_at: str
    comment: str = ""

    def __post_init__(self):
        object.__setattr__(self, "selections", dict(self.selections))

    def percentage_display(self) -> str:
        return render_percentage(self.percentage)


def grade_submission(rubric: Rubric, assignment: Assignment, student: Student,
                     selections: Mapping[str, str], comment: str = "", *,
                     roster: Collection[str] | None = None,
                     graded_at: str | None = None,
                     record_id: str | None = None) -> GradeRecord:
    """Validate selections against the rubric and derive total/percentage.

    `roster`, when provided, is the set of enrolled student ids; a student
    outside it raises StudentNotEnrolled. Replacement of a previous record
    for the same (assignment, student) is the persistence layer's job.
    """
    if roster is not None and student.id not in roster:
        raise StudentNotEnrolled(f"student {student.id} is not on the roster")

    known = {c.name for c in rubric.criteria}
    for name in selections:
        if name not in known:
            raise UnknownCriterion(f"rubric has no criterion {name!r}")

    total = Fraction(0)
    for criterion in rubric.criteria:
        if criterion.name not in selections:
            raise MissingCriterion(f"no selection for criterion {criterion.name!r}")
        label = selections[criterion.name]
        points = criterion.points_for(label)
        if points is None:
            raise UnknownLevel(
                f"criterion {criterion.name!r} has no level {label!r}"
            )
        total += points

    return GradeRecord(
        id=record_id or fresh_id(),
        assignment_id=assignment.id,
        student_id=student.id,
        selections=dict(selections),
        total=total,
        percentage=percentage_of(total, rubric_max_score(rubric)),
        graded_at=graded_at or now_iso(),
        comment=comment,
    )


def total_marks(record: GradeRecord) -> Score:
    return record.total


def latest_records(records: Iterable[GradeRecord]) -> list[GradeRecord]:
    """Collapse to one record per student, latest graded_at wins (list
    order breaks ties)."""
    current: dict[str, GradeRecord] = {}
    for rec in records:
        prev = current.get(rec.student_id)
        if prev is None or rec.graded_at >= prev.graded_at:
            current[rec.student_id] = rec
    return list(current.values())


def class_scores(records: Iterable[GradeRecord],
                 names: Mapping[str, str]) -> list[tuple[str, Score]]:
    """One (student id, total) per graded student, ordered by student name
    then id. Ungraded students are simply absent from `records`."""
    records = list(records)
    assignments = {r.assignment_id for r in records}
    if len(assignments) > 1:
        raise MixedAssignments(f"records span assignments {sorted(assignments)}")
    current = latest_records(records)
    current.sort(key=lambda r: (names.get(r.student_id, ""), r.student_id))
    return [(r.student_id, r.total) for r in current]
