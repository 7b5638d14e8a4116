"""Acceptance suite: one test per release criterion, one printed
pass/fail line each (run with -s to see them)."""

import csv
import io
import random
import time
from collections import Counter
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    make_levels,
    make_roster,
    random_rubric,
    random_selection,
)
from gradelab import errors
from gradelab.api import ApiConfig, create_app
from gradelab.exporting import export_grades_csv, import_grades_csv
from gradelab.grading import GradeRecord, grade_submission
from gradelab.models import (
    Assignment,
    AttendanceRecord,
    Course,
    Criterion,
    Note,
    Rubric,
    SchoolClass,
    Student,
    User,
    fresh_id,
    new_rubric,
    rubric_max_score,
)
from gradelab.stats import (
    Dataset,
    bar_chart_data,
    central_tendency,
    mean,
    median,
    mode,
    pie_chart_data,
    threshold_partition,
)
from gradelab.store import open_store


def report(name, ok=True, extra=""):
    status = "PASS" if ok else "FAIL"
    print(f"\nACCEPTANCE {status}: {name}{'  (' + extra + ')' if extra else ''}")


def test_statistics_oracle_equivalence():
    """1,000 random datasets vs independent brute-force oracles, < 10 s."""
    rng = random.Random(20260823)
    start = time.perf_counter()
    for _ in range(1000):
        n = rng.randint(1, 1000)
        values = [rng.randint(0, 100) for _ in range(n)]
        d = Dataset.from_scores(values)

        exact_mean = Fraction(sum(values), n)  # exact-rational oracle
        assert abs(mean(d) - exact_mean) <= Fraction(1, 10 ** 9)

        ordered = sorted(values)  # full-sort selection oracle
        expect_median = (ordered[(n - 1) // 2] if n % 2
                         else (ordered[n // 2 - 1] + ordered[n // 2]) / 2)
        assert median(d) == expect_median

        counts = Counter(values)  # frequency-table oracle
        top = max(counts.values())
        assert mode(d) == sorted(float(v) for v, c in counts.items()
                                 if c == top)

        t = rng.uniform(-5, 105)  # linear-scan oracle
        below = 0
        for v in values:
            if v < t:
                below += 1
        assert threshold_partition(d, t) == (below, n - below)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    report("statistics oracle equivalence", extra=f"{elapsed:.2f}s")


def test_paper_worked_median_cases():
    """Odd dataset picks the middle value; even dataset averages the two
    middle values."""
    assert median(Dataset.from_scores([5, 1, 3])) == 3
    assert median(Dataset.from_scores([7, 1, 5, 3])) == 4
    report("median worked cases (odd picks middle, even averages)")


def test_runtime_bounds_for_sample_sizes():
    """Central tendency + both chart computations within 1 / 1.2 / 1.5 s
    for 50 / 100 / 150 samples (published upper bounds)."""
    rng = random.Random(7)
    measured = []
    for size, bound in ((50, 1.0), (100, 1.2), (150, 1.5)):
        scores = [(f"s{i:04d}", Fraction(rng.randint(0, 100)))
                  for i in range(size)]
        names = {sid: f"Student {sid}" for sid, _ in scores}
        d = Dataset.from_scores(t for _, t in scores)
        start = time.perf_counter()
        central_tendency(d)
        bar_chart_data(scores, names)
        pie_chart_data(d, Fraction(50))
        elapsed = time.perf_counter() - start
        measured.append(f"n={size}: {elapsed * 1000:.2f}ms (bound {bound}s)")
        assert elapsed < bound
    report("run-time bounds at 50/100/150 samples",
           extra="; ".join(measured))


@st.composite
def rubric_and_selection(draw):
    n_criteria = draw(st.integers(1, 10))
    criteria, selections = [], {}
    for i in range(n_criteria):
        n_levels = draw(st.integers(2, 6))
        points = draw(st.lists(
            st.fractions(min_value=0, max_value=50, max_denominator=4),
            min_size=n_levels, max_size=n_levels, unique=True))
        criterion = Criterion(f"C{i}", make_levels(sorted(points)))
        criteria.append(criterion)
        selections[criterion.name] = draw(
            st.sampled_from([lv.label for lv in criterion.levels]))
    return new_rubric("R", criteria), selections


@settings(max_examples=200, deadline=None)
@given(rubric_and_selection())
def test_grading_invariants(case):
    rubric, selections = case
    assignment = Assignment(id="a", course_id="c", name="X",
                            rubric_id=rubric.id)
    student = Student(id="s", name="S", email="s@x.co")
    rec = grade_submission(rubric, assignment, student, selections)
    resummed = sum(
        (c.points_for(selections[c.name]) for c in rubric.criteria),
        Fraction(0),
    )
    assert rec.total == resummed
    assert rec.percentage * rubric_max_score(rubric) == 100 * rec.total


def test_grading_invariants_reported():
    report("grading invariants (exact re-sum and percentage identity)")


def test_csv_round_trip_and_rfc4180():
    """200 random rubric/record sets: import(export(R)) preserves every
    grade; the bytes re-parse cleanly with an independent CSV reader."""
    rng = random.Random(99)
    for _ in range(200):
        rubric = random_rubric(rng, max_criteria=6)
        assignment = Assignment(id="a", course_id="c", name="HW",
                                rubric_id=rubric.id)
        roster = make_roster(rng.randint(0, 8))
        records = [
            grade_submission(rubric, assignment, s,
                             random_selection(rng, rubric))
            for s in roster
        ]
        data = export_grades_csv(assignment, records, rubric, roster)

        text = data.decode("utf-8")
        body = text
        assert body.endswith("\r\n")
        for line in body.split("\r\n")[:-1]:
            assert "\n" not in line  # CRLF-only record separators

        # independent reader: the stdlib csv module, strict mode
        parsed = list(csv.reader(io.StringIO(text, newline=""), strict=True))
        assert len(parsed) == len(records) + 1
        assert all(len(row) == len(rubric.criteria) + 4 for row in parsed)

        imported = import_grades_csv(data, assignment, rubric, roster)
        original = {r.student_id: r for r in records}
        assert len(imported) == len(records)
        for rec in imported:
            orig = original[rec.student_id]
            assert (rec.selections, rec.total, rec.percentage) == \
                (orig.selections, orig.total, orig.percentage)
    report("CSV round-trip + RFC 4180 compliance (200 random sets)")


def test_persistence_round_trip_integrity_and_replay(tmp_path):
    store = open_store(tmp_path / "acceptance.sqlite")
    rng = random.Random(4242)

    # round-trip equality for every entity kind
    user = User(id="u1", email="g@x.edu", display_name="G", credential="cr")
    store.put(user)
    roster = make_roster(6)
    for s in roster:
        store.put(s)
    cls = SchoolClass(id="cl1", owner_user_id="u1", name="Class",
                      student_ids=tuple(s.id for s in roster))
    store.put(cls)
    course = Course(id="crs1", class_id="cl1", name="Math")
    store.put(course)
    rubric = random_rubric(rng)
    store.put(rubric)
    assignment = Assignment(id="a1", course_id="crs1", name="HW",
                            rubric_id=rubric.id)
    store.put(assignment)
    note = Note(id="n1", owner_user_id="u1", title="T", body="B",
                created_at="2026-01-01")
    store.put(note)
    rec = grade_submission(rubric, assignment, roster[0],
                           random_selection(rng, rubric))
    store.put_grade(rec)
    att = store.record_attendance("cl1", "2026-01-05",
                                  {roster[0].id: "present"})
    assert store.get(User, "u1") == user
    assert store.get(Student, roster[0].id) == roster[0]
    assert store.get(SchoolClass, "cl1") == cls
    assert store.get(Course, "crs1") == course
    assert store.get(Rubric, rubric.id) == rubric
    assert store.get(Assignment, "a1") == assignment
    assert store.get(Note, "n1") == note
    assert store.get_grade("a1", roster[0].id) == rec
    assert store.get_attendance("cl1", "2026-01-05") == att

    # 500-operation random CRUD sequence
    rubrics, assignments = [rubric], [assignment]
    for _ in range(500):
        op = rng.random()
        try:
            if op < 0.2:
                r = random_rubric(rng, max_criteria=3)
                store.put(r)
                rubrics.append(r)
            elif op < 0.4:
                a = Assignment(id=fresh_id(), course_id="crs1", name="A",
                               rubric_id=rng.choice(rubrics).id)
                store.put(a)
                assignments.append(a)
            elif op < 0.65:
                a = rng.choice(assignments)
                r = store.get(Rubric, a.rubric_id)
                store.put_grade(grade_submission(
                    r, a, rng.choice(roster), random_selection(rng, r)))
            elif op < 0.75:
                victim = rng.choice(rubrics)
                store.delete(Rubric, victim.id)
                rubrics = [r for r in rubrics if r.id != victim.id]
                if not rubrics:
                    r = random_rubric(rng, max_criteria=3)
                    store.put(r)
                    rubrics.append(r)
            elif op < 0.85 and len(assignments) > 1:
                victim = rng.choice(assignments)
                store.delete(Assignment, victim.id)
                assignments = [a for a in assignments if a.id != victim.id]
            else:
                store.record_attendance(
                    "cl1", f"2026-02-{rng.randint(1, 28):02d}",
                    {s.id: rng.choice(["present", "absent"]) for s in roster})
        except (errors.ForeignKeyViolation, errors.UniqueViolation):
            pass
    store.validate_integrity()

    # audit-log replay reconstructs the grade table exactly
    assert store.replay_grades() == {
        (r.assignment_id, r.student_id): r for r in store.list(GradeRecord)
    }
    store.close()
    report("persistence round-trip, 500-op integrity, audit replay")


def test_end_to_end_api_workflow(tmp_path):
    store = open_store(tmp_path / "e2e.sqlite")
    outbox = tmp_path / "outbox"
    app = create_app(store, ApiConfig(outbox_dir=str(outbox)))
    with TestClient(app) as client:
        client.post("/api/v1/auth/register",
                    json={"email": "grader@x.edu", "password": "longenough",
                          "display_name": "Grader"})
        token = client.post("/api/v1/auth/login",
                            json={"email": "grader@x.edu",
                                  "password": "longenough"}).json()["token"]
        h = {"Authorization": f"Bearer {token}"}
        cls = client.post("/api/v1/classes", json={"name": "Class"},
                          headers=h).json()
        students = [
            client.post(f"/api/v1/classes/{cls['id']}/students",
                        json={"name": f"Student {i}", "email": f"s{i}@x.edu"},
                        headers=h).json()
            for i in range(4)
        ]
        course = client.post("/api/v1/courses",
                             json={"class_id": cls["id"], "name": "Math"},
                             headers=h).json()
        rubric_body = {
            "name": "R",
            "criteria": [
                {"name": name,
                 "levels": [{"label": "Poor", "points": "1"},
                            {"label": "Good", "points": "2"}]}
                for name in ("C1", "C2")
            ],
        }
        rub = client.post("/api/v1/rubrics", json=rubric_body,
                          headers=h).json()
        assignment = client.post(
            "/api/v1/assignments",
            json={"course_id": course["id"], "name": "HW1",
                  "rubric_id": rub["id"]}, headers=h).json()

        picks = [("Poor", "Poor"), ("Poor", "Good"), ("Good", "Poor"),
                 ("Good", "Good")]
        for student, (c1, c2) in zip(students, picks):
            r = client.put(
                f"/api/v1/assignments/{assignment['id']}/grades/{student['id']}",
                json={"selections": {"C1": c1, "C2": c2}}, headers=h)
            assert r.status_code == 200

        # direct core-engine computation on the same data
        totals = [2, 3, 3, 4]
        d = Dataset.from_scores(totals)
        expected_summary = central_tendency(d)
        api_stats = client.get(
            f"/api/v1/assignments/{assignment['id']}/stats",
            headers=h).json()
        got = api_stats["summary"]
        assert int(got["n"]) == expected_summary.n
        assert float(got["mean"]) == expected_summary.mean
        assert float(got["median"]) == expected_summary.median
        assert tuple(float(m) for m in got["modes"]) == expected_summary.modes

        graphs = client.get(
            f"/api/v1/assignments/{assignment['id']}/graphs?threshold=3",
            headers=h).json()
        below, at_or_above = threshold_partition(d, 3)
        pie = {s["label"]: float(s["value"])
               for s in graphs["pie"]["series"]}
        assert pie == {"below 3": below, "at or above 3": at_or_above}
        assert len(graphs["bar"]["series"]) == 4

        # lossless CSV re-import
        data = client.get(
            f"/api/v1/assignments/{assignment['id']}/export.csv",
            headers=h).content
        a = store.get(Assignment, assignment["id"])
        rubric = store.get(Rubric, rub["id"])
        roster = [store.get(Student, s["id"]) for s in students]
        imported = import_grades_csv(data, a, rubric, roster)
        current = {r.student_id: r for r in
                   store.grades_for_assignment(a.id)}
        assert len(imported) == 4
        for rec in imported:
            assert rec.selections == current[rec.student_id].selections
            assert rec.total == current[rec.student_id].total

        # feedback dispatch: exactly 4 outbox files
        fb = client.post(
            f"/api/v1/assignments/{assignment['id']}/feedback",
            headers=h).json()
        assert [x["status"] for x in fb["results"]] == ["sent"] * 4
        assert len(list(outbox.glob("*.eml"))) == 4
    store.close()
    report("end-to-end API workflow (register -> grade -> stats -> export -> feedback)")
