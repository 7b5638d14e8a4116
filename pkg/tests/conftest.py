import random
from fractions import Fraction

import pytest

from gradelab.grading import grade_submission
from gradelab.models import (
    Assignment,
    Criterion,
    PerformanceLevel,
    Student,
    new_rubric,
)


def make_levels(points, labels=None):
    labels = labels or [f"L{i}" for i in range(len(points))]
    return tuple(
        PerformanceLevel(label, Fraction(p)) for label, p in zip(labels, points)
    )


def make_rubric(criteria_points, name="R"):
    """criteria_points: list of point lists, one per criterion."""
    criteria = [
        Criterion(f"C{i}", make_levels(points))
        for i, points in enumerate(criteria_points)
    ]
    return new_rubric(name, criteria)


def random_rubric(rng: random.Random, max_criteria=10, max_levels=6):
    n_criteria = rng.randint(1, max_criteria)
    criteria_points = []
    for _ in range(n_criteria):
        n_levels = rng.randint(2, max_levels)
        # distinct non-negative rationals, strictly increasing once sorted
        pts = set()
        while len(pts) < n_levels:
            pts.add(Fraction(rng.randint(0, 40), rng.choice([1, 1, 2, 4])))
        criteria_points.append(sorted(pts))
    return make_rubric(criteria_points)


def random_selection(rng: random.Random, rubric):
    return {
        c.name: rng.choice(c.levels).label for c in rubric.criteria
    }


def make_roster(n):
    return [Student(id=f"s{i:03d}", name=f"Student {i:03d}",
                    email=f"s{i:03d}@example.edu") for i in range(n)]


def grade_roster(rng: random.Random, rubric, assignment, roster):
    records = []
    for student in roster:
        records.append(grade_submission(
            rubric, assignment, student, random_selection(rng, rubric),
            roster={s.id for s in roster}))
    return records


@pytest.fixture
def two_by_two_rubric():
    """Two criteria, each Poor=1 / Good=2; max score 4."""
    levels = make_levels([1, 2], labels=["Poor", "Good"])
    return new_rubric("R", [Criterion("C1", levels), Criterion("C2", levels)])


@pytest.fixture
def assignment_for(two_by_two_rubric):
    return Assignment(id="a1", course_id="crs1", name="HW1",
                      rubric_id=two_by_two_rubric.id)
