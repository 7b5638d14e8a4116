"""Persistent domain entities and the rubric structure.

All types are frozen dataclasses: immutable value objects after
construction, safe to share between threads. Mutation happens only
through persistence-layer transactions.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

import yaml

from .errors import (
    DuplicateCriterion,
    DuplicateLevel,
    EmptyCriteria,
    InvalidPoints,
    InvalidRubricDefinition,
    NonMonotonicLevels,
    TooFewLevels,
)
from .numbers import Score, format_score, parse_score

ATTENDANCE_STATUSES = ("present", "absent")


def fresh_id() -> str:
    return uuid.uuid4().hex


@dataclass(frozen=True)
class PerformanceLevel:
    label: str
    points: Score

    def __post_init__(self):
        if not isinstance(self.points, Fraction):
            object.__setattr__(self, "points", parse_score(self.points))
        if self.points < 0:
            raise InvalidPoints(f"level {self.label!r} has negative points")


@dataclass(frozen=True)
class Criterion:
    name: str
    levels: tuple[PerformanceLevel, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if len(self.levels) < 2:
            raise TooFewLevels(f"criterion {self.name!r} has {len(self.levels)} levels")
        labels = [lv.label for lv in self.levels]
        if len(set(labels)) != len(labels):
            raise DuplicateLevel(f"criterion {self.name!r} repeats a level label")
        points = [lv.points for lv in self.levels]
        if any(b <= a for a, b in zip(points, points[1:])):
            raise NonMonotonicLevels(
                f"criterion {self.name!r} points must be strictly increasing"
            )

    @property
    def max_points(self) -> Score:
        return self.levels[-1].points

    def points_for(self, label: str) -> Score | None:
        for lv in self.levels:
            if lv.label == label:
                return lv.points
        return None


@dataclass(frozen=True)
class Rubric:
    id: str
    name: str
    description: str
    predefined: bool
    criteria: tuple[Criterion, ...]

    def __post_init__(self):
        object.__setattr__(self, "criteria", tuple(self.criteria))
        if not self.criteria:
            raise EmptyCriteria(f"rubric {self.name!r} has no criteria")
        names = [c.name for c in self.criteria]
        if len(set(names)) != len(names):
            raise DuplicateCriterion(f"rubric {self.name!r} repeats a criterion name")

    def criterion(self, name: str) -> Criterion | None:
        for c in self.criteria:
            if c.name == name:
                return c
        return None


def new_rubric(name: str, criteria: Iterable[Criterion], predefined: bool = False,
               description: str = "") -> Rubric:
    """Build a validated rubric with a fresh id.

    Raises EmptyCriteria, DuplicateCriterion, TooFewLevels,
    NonMonotonicLevels, DuplicateLevel, or InvalidPoints; never returns a
    malformed rubric.
    """
    return Rubric(
        id=fresh_id(),
        name=name,
        description=description,
        predefined=predefined,
        criteria=tuple(criteria),
    )


def rubric_max_score(rubric: Rubric) -> Score:
    """Sum over criteria of the highest level's points."""
    return sum((c.max_points for c in rubric.criteria), Fraction(0))


def _level_scale(labels: list[str], points: list[int]) -> tuple[PerformanceLevel, ...]:
    return tuple(
        PerformanceLevel(label, Fraction(p)) for label, p in zip(labels, points)
    )

_ASSIGNMENT_SCALE = _level_scale(
    ["Beginning", "Developing", "Proficient", "Exemplary"], [1, 2, 3, 4]
)
_EXAM_SCALE = _level_scale(
    ["Missing", "Poor", "Adequate", "Good", "Excellent"], [0, 1, 2, 3, 4]
)

# Release constants; ids are stable across processes so seed data stays
# consistent between store files.
_BUILTIN_RUBRICS = (
    Rubric(
        id="builtin-general-assignment",
        name="General Assignment",
        description="Four-criterion scale for written or practical assignments.",
        predefined=True,
        criteria=(
            Criterion("Understanding", _ASSIGNMENT_SCALE),
            Criterion("Correctness", _ASSIGNMENT_SCALE),
            Criterion("Presentation", _ASSIGNMENT_SCALE),
            Criterion("Timeliness", _ASSIGNMENT_SCALE),
        ),
    ),
    Rubric(
        id="builtin-exam",
        name="Exam",
        description="Three-criterion scale for written examinations.",
        predefined=True,
        criteria=(
            Criterion("Knowledge", _EXAM_SCALE),
            Criterion("Application", _EXAM_SCALE),
            Criterion("Reasoning", _EXAM_SCALE),
        ),
    ),
)


def builtin_rubrics() -> list[Rubric]:
    """The predefined rubric templates shipped with a release."""
    return list(_BUILTIN_RUBRICS)


# --- rubric definition files (YAML) ----------------------------------------

def rubric_from_definition(text: str) -> Rubric:
    """Parse the human-editable rubric definition format.

    See docs/rubric-file-format.md for the schema. The document mirrors
    the Rubric type one-to-one.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InvalidRubricDefinition(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise InvalidRubricDefinition("top level must be a mapping")
    try:
        name = str(doc["name"])
        raw_criteria = doc["criteria"]
    except KeyError as exc:
        raise InvalidRubricDefinition(f"missing key: {exc}") from exc
    if not isinstance(raw_criteria, list):
        raise InvalidRubricDefinition("'criteria' must be a list")
    criteria = []
    for rc in raw_criteria:
        try:
            levels = tuple(
                PerformanceLevel(str(lv["label"]), parse_score(str(lv["points"])))
                for lv in rc["levels"]
            )
            criteria.append(Criterion(str(rc["name"]), levels))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidRubricDefinition(f"bad criterion entry: {exc}") from exc
    return new_rubric(
        name,
        criteria,
        predefined=bool(doc.get("predefined", False)),
        description=str(doc.get("description", "")),
    )


def rubric_to_definition(rubric: Rubric) -> str:
    doc = {
        "name": rubric.name,
        "description": rubric.description,
        "predefined": rubric.predefined,
        "criteria": [
            {
                "name": c.name,
                "levels": [
                    {"label": lv.label, "points": format_score(lv.points)}
                    for lv in c.levels
                ],
            }
            for c in rubric.criteria
        ],
    }
    return yaml.safe_dump(doc, sort_keys=False, allow_unicode=True)


# --- roster entities --------------------------------------------------------

@dataclass(frozen=True)
class User:
    id: str
    email: str
    display_name: str
    credential: str  # salted slow-hash digest, never the password


@dataclass(frozen=True)
class Student:
    id: str
    name: str
    email: str


@dataclass(frozen=True)
class SchoolClass:
    id: str
    owner_user_id: str
    name: str
    student_ids: tuple[str, ...] = ()

    def __post_init__(self):
        ids = tuple(self.student_ids)
        if len(set(ids)) != len(ids):
            raise ValueError("a student appears more than once on the roster")
        object.__setattr__(self, "student_ids", ids)


@dataclass(frozen=True)
class Course:
    id: str
    class_id: str
    name: str


@dataclass(frozen=True)
class Assignment:
    id: str
    course_id: str
    name: str
    rubric_id: str
    threshold: Score | None = None

    def __post_init__(self):
        if self.threshold is not None and not isinstance(self.threshold, Fraction):
            object.__setattr__(self, "threshold", parse_score(self.threshold))


@dataclass(frozen=True)
class AttendanceRecord:
    class_id: str
    date: str  # ISO-8601 calendar date, no time zone
    statuses: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        statuses = dict(self.statuses)
        for sid, status in statuses.items():
            if status not in ATTENDANCE_STATUSES:
                raise ValueError(f"bad attendance status {status!r} for {sid}")
        object.__setattr__(self, "statuses", statuses)


@dataclass(frozen=True)
class Note:
    id: str
    owner_user_id: str
    title: str
    body: str
    created_at: str

    def __post_init__(self):
        if not self.title:
            raise ValueError("note title must be non-empty")


__all__ = [
    "ATTENDANCE_STATUSES",
    "Assignment",
    "AttendanceRecord",
    "Course",
    "Criterion",
    "Note",
    "PerformanceLevel",
    "Rubric",
    "SchoolClass",
    "Student",
    "User",
    "builtin_rubrics",
    "fresh_id",
    "new_rubric",
    "replace",
    "rubric_from_definition",
    "rubric_max_score",
    "rubric_to_definition",
]
