#!/usr/bin/env python3
"""Seed a database file with a demo grader, class, rubric, and grades.

Useful for poking at the API or the web UI without typing everything in
by hand. Prints the login credentials it created.
"""

import argparse
import random

from gradelab.api import hash_password
from gradelab.grading import grade_submission
from gradelab.models import (
    Assignment,
    Course,
    SchoolClass,
    Student,
    User,
    builtin_rubrics,
    fresh_id,
)
from gradelab.store import open_store

EMAIL = "demo@example.edu"
PASSWORD = "demo-password"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--db", default="gradelab.db")
    parser.add_argument("--students", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)

    store = open_store(args.db)
    user = User(id=fresh_id(), email=EMAIL, display_name="Demo Grader",
                credential=hash_password(PASSWORD))
    store.put(user)

    roster = [
        Student(id=fresh_id(), name=f"Student {i + 1:02d}",
                email=f"student{i + 1:02d}@example.edu")
        for i in range(args.students)
    ]
    for s in roster:
        store.put(s)
    cls = SchoolClass(id=fresh_id(), owner_user_id=user.id, name="Demo Class",
                      student_ids=tuple(s.id for s in roster))
    store.put(cls)
    course = Course(id=fresh_id(), class_id=cls.id, name="Demo Course")
    store.put(course)

    rubric = builtin_rubrics()[0]
    store.put(rubric)
    assignment = Assignment(id=fresh_id(), course_id=course.id,
                            name="Demo Assignment", rubric_id=rubric.id)
    store.put(assignment)
    for s in roster:
        selections = {c.name: rng.choice(c.levels).label
                      for c in rubric.criteria}
        store.put_grade(grade_submission(rubric, assignment, s, selections,
                                         roster={x.id for x in roster}),
                        actor=user.id)
    store.close()
    print(f"seeded {args.db}")
    print(f"login: {EMAIL} / {PASSWORD}")


if __name__ == "__main__":
    main()
