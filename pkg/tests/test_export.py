import csv
import io
import random

import pytest

from conftest import make_roster, random_rubric, random_selection
from gradelab import errors
from gradelab.exporting import (
    FeedbackDocument,
    FileOutboxTransport,
    bar_chart_svg,
    export_grades_csv,
    import_grades_csv,
    pie_chart_svg,
    render_report,
    send_feedback,
)
from gradelab.grading import class_scores, grade_submission
from gradelab.models import Assignment, Student
from gradelab.stats import Dataset, bar_chart_data, central_tendency, pie_chart_data


def graded_world(seed, n_students=4, rubric=None):
    rng = random.Random(seed)
    rubric = rubric or random_rubric(rng, max_criteria=4)
    assignment = Assignment(id="a1", course_id="c1", name="HW",
                            rubric_id=rubric.id)
    roster = make_roster(n_students)
    records = [
        grade_submission(rubric, assignment, s, random_selection(rng, rubric))
        for s in roster
    ]
    return rubric, assignment, roster, records


# --- CSV --------------------------------------------------------------------

def test_export_header_only_when_no_records(two_by_two_rubric):
    assignment = Assignment(id="a1", course_id="c1", name="HW",
                            rubric_id=two_by_two_rubric.id)
    data = export_grades_csv(assignment, [], two_by_two_rubric, [])
    assert data == b"student_id,student_name,C1,C2,total,percentage\r\n"


def test_export_row_contents(two_by_two_rubric, assignment_for):
    alice = Student(id="sA", name="Alice", email="a@x.co")
    rec = grade_submission(two_by_two_rubric, assignment_for, alice,
                           {"C1": "Good", "C2": "Poor"})
    data = export_grades_csv(assignment_for, [rec], two_by_two_rubric, [alice])
    lines = data.decode().split("\r\n")
    assert lines[1].endswith(",3,75.00")


def test_export_uses_crlf_and_utf8():
    rubric, assignment, roster, records = graded_world(1)
    roster[0] = Student(id=roster[0].id, name="Zoë, \"the\" first",
                        email=roster[0].email)
    data = export_grades_csv(assignment, records, rubric, roster)
    text = data.decode("utf-8")
    assert text.count("\r\n") == len(records) + 1
    assert '"Zoë, ""the"" first"' in text


def test_export_column_count():
    for seed in range(5):
        rubric, assignment, roster, records = graded_world(seed)
        reader = csv.reader(io.StringIO(
            export_grades_csv(assignment, records, rubric, roster).decode()))
        widths = {len(row) for row in reader}
        assert widths == {len(rubric.criteria) + 4}


def test_export_rejects_mixed_assignments(two_by_two_rubric, assignment_for):
    other = Assignment(id="a2", course_id="c1", name="HW2",
                       rubric_id=two_by_two_rubric.id)
    alice = Student(id="sA", name="Alice", email="a@x.co")
    rec = grade_submission(two_by_two_rubric, other, alice,
                           {"C1": "Good", "C2": "Poor"})
    with pytest.raises(errors.MixedAssignments):
        export_grades_csv(assignment_for, [rec], two_by_two_rubric, [alice])


def test_round_trip_preserves_grades():
    for seed in range(20):
        rubric, assignment, roster, records = graded_world(seed)
        data = export_grades_csv(assignment, records, rubric, roster)
        imported = import_grades_csv(data, assignment, rubric, roster)
        original = {r.student_id: r for r in records}
        assert len(imported) == len(records)
        for rec in imported:
            orig = original[rec.student_id]
            assert rec.selections == orig.selections
            assert rec.total == orig.total
            assert rec.percentage == orig.percentage


def test_import_empty_file_is_header_mismatch(two_by_two_rubric,
                                              assignment_for):
    with pytest.raises(errors.HeaderMismatch):
        import_grades_csv(b"", assignment_for, two_by_two_rubric, [])


def test_import_wrong_header(two_by_two_rubric, assignment_for):
    with pytest.raises(errors.HeaderMismatch):
        import_grades_csv(b"a,b,c\r\n", assignment_for, two_by_two_rubric, [])


def test_import_unknown_points_value_reports_row(two_by_two_rubric,
                                                 assignment_for):
    alice = Student(id="sA", name="Alice", email="a@x.co")
    data = (b"student_id,student_name,C1,C2,total,percentage\r\n"
            b"sA,Alice,7,2,9,225.00\r\n")
    with pytest.raises(errors.RowError) as exc:
        import_grades_csv(data, assignment_for, two_by_two_rubric, [alice])
    assert exc.value.row == 2


def test_import_unknown_student_reports_row(two_by_two_rubric, assignment_for):
    data = (b"student_id,student_name,C1,C2,total,percentage\r\n"
            b"ghost,Nobody,1,2,3,75.00\r\n")
    with pytest.raises(errors.RowError):
        import_grades_csv(data, assignment_for, two_by_two_rubric, [])


# --- reports ----------------------------------------------------------------

def report_inputs(seed):
    rubric, assignment, roster, records = graded_world(seed)
    names = {s.id: s.name for s in roster}
    scores = class_scores(records, names)
    dataset = Dataset.from_scores(t for _, t in scores)
    stats = central_tendency(dataset)
    charts = [bar_chart_data(scores, names), pie_chart_data(dataset, 2)]
    return rubric, assignment, roster, records, stats, charts


def test_render_one_doc_per_student_plus_class_report():
    rubric, assignment, roster, records, stats, charts = report_inputs(2)
    docs, class_report = render_report(assignment, records, rubric, stats,
                                       charts, roster, generated_at="T0")
    assert len(docs) == len(roster)
    assert "<svg" in class_report.body


def test_render_is_deterministic():
    rubric, assignment, roster, records, stats, charts = report_inputs(3)
    first = render_report(assignment, records, rubric, stats, charts, roster,
                          generated_at="2026-02-01T00:00:00+00:00")
    second = render_report(assignment, records, rubric, stats, charts, roster,
                           generated_at="2026-02-01T00:00:00+00:00")
    assert [d.body.encode() for d in first[0]] == \
        [d.body.encode() for d in second[0]]
    assert first[1].body.encode() == second[1].body.encode()


def test_report_contains_exact_percentage_string():
    rubric, assignment, roster, records, stats, charts = report_inputs(4)
    docs, _ = render_report(assignment, records, rubric, stats, charts,
                            roster, generated_at="T0")
    by_student = {r.student_id: r for r in records}
    for doc in docs:
        assert f"{by_student[doc.student_id].percentage_display()}%" in doc.body


def test_chart_svgs_are_valid_xmlish():
    import xml.etree.ElementTree as ET
    rubric, assignment, roster, records, stats, charts = report_inputs(5)
    for chart, renderer in zip(charts, (bar_chart_svg, pie_chart_svg)):
        ET.fromstring(renderer(chart))


# --- delivery ---------------------------------------------------------------

def docs_for(roster, bodies=None):
    return [
        FeedbackDocument(student_id=s.id, assignment_id="a1",
                         body=(bodies or {}).get(s.id, f"<p>{s.id}</p>"))
        for s in roster
    ]


def test_outbox_writes_one_file_per_student(tmp_path):
    roster = make_roster(2)
    transport = FileOutboxTransport(tmp_path / "outbox")
    results = send_feedback(transport, docs_for(roster), roster)
    assert [r.status for r in results] == ["sent", "sent"]
    assert len(list((tmp_path / "outbox").glob("*.eml"))) == 2


def test_missing_email_reported_per_student(tmp_path):
    roster = make_roster(3)
    roster[1] = Student(id=roster[1].id, name=roster[1].name, email="")
    transport = FileOutboxTransport(tmp_path / "outbox")
    results = send_feedback(transport, docs_for(roster), roster)
    assert [r.status for r in results] == ["sent", "error", "sent"]
    assert len(list((tmp_path / "outbox").glob("*.eml"))) == 2


def test_resend_same_batch_is_idempotent(tmp_path):
    roster = make_roster(4)
    transport = FileOutboxTransport(tmp_path / "outbox")
    send_feedback(transport, docs_for(roster), roster)
    results = send_feedback(transport, docs_for(roster), roster)
    assert all(r.status == "duplicate" for r in results)
    # outbox count oracle: still one file per student
    assert len(list((tmp_path / "outbox").glob("*.eml"))) == 4


def test_idempotency_survives_transport_restart(tmp_path):
    roster = make_roster(2)
    send_feedback(FileOutboxTransport(tmp_path / "outbox"),
                  docs_for(roster), roster)
    results = send_feedback(FileOutboxTransport(tmp_path / "outbox"),
                            docs_for(roster), roster)
    assert all(r.status == "duplicate" for r in results)
    assert len(list((tmp_path / "outbox").glob("*.eml"))) == 2


def test_results_come_back_in_roster_order(tmp_path):
    roster = make_roster(10)
    transport = FileOutboxTransport(tmp_path / "outbox")
    shuffled = docs_for(roster)
    random.Random(0).shuffle(shuffled)
    results = send_feedback(transport, shuffled, roster, max_in_flight=4)
    assert [r.student_id for r in results] == [s.id for s in roster]
