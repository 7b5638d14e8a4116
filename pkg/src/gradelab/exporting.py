"""Spreadsheet exports, per-student feedback documents, and mail delivery.

The CSV writer is hand-rolled against RFC 4180 (UTF-8, CRLF, minimal
quoting) so the import side can use the stdlib ``csv`` reader as an
independent check. Reports are self-contained printable HTML with the
charts embedded as static SVG; output is deterministic because the
generation timestamp is injected by the caller.
"""

from __future__ import annotations

import csv
import hashlib
import html
import io
import math
import smtplib
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from email.message import EmailMessage
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .errors import (
    GradelabError,
    HeaderMismatch,
    MissingEmail,
    MixedAssignments,
    RowError,
    TransportFailure,
)
from .grading import GradeRecord, class_scores, grade_submission
from .models import Assignment, Rubric, Student
from .numbers import format_score, parse_score, render_percentage
from .stats import ChartData, StatsSummary

# --- CSV -------------------------------------------------------------------

_NEEDS_QUOTING = (",", '"', "\r", "\n")


def _csv_field(value: str) -> str:
    if any(ch in value for ch in _NEEDS_QUOTING):
        return '"' + value.replace('"', '""') + '"'
    return value


def _csv_line(fields: Iterable[str]) -> str:
    return ",".join(_csv_field(f) for f in fields) + "\r\n"


def csv_header(rubric: Rubric) -> list[str]:
    return (["student_id", "student_name"]
            + [c.name for c in rubric.criteria]
            + ["total", "percentage"])


def export_grades_csv(assignment: Assignment, records: Iterable[GradeRecord],
                      rubric: Rubric, roster: Sequence[Student]) -> bytes:
    """One row per graded student in class-score order; |criteria| + 4
    columns; criterion cells hold the selected level's points."""
    records = [r for r in records]
    for rec in records:
        if rec.assignment_id != assignment.id:
            raise MixedAssignments(
                f"record {rec.id} belongs to assignment {rec.assignment_id}"
            )
    names = {s.id: s.name for s in roster}
    by_student = {r.student_id: r for r in records}
    out = io.StringIO()
    out.write(_csv_line(csv_header(rubric)))
    for student_id, _total in class_scores(records, names):
        rec = by_student[student_id]
        row = [student_id, names.get(student_id, "")]
        for criterion in rubric.criteria:
            row.append(format_score(criterion.points_for(
                rec.selections[criterion.name])))
        row.append(format_score(rec.total))
        row.append(rec.percentage_display())
        out.write(_csv_line(row))
    return out.getvalue().encode("utf-8")


def import_grades_csv(data: bytes, assignment: Assignment, rubric: Rubric,
                      roster: Sequence[Student]) -> list[GradeRecord]:
    """Inverse of export_grades_csv; each row goes through the same
    validation as interactive grading, errors reported with row numbers."""
    text = data.decode("utf-8")
    reader = csv.reader(io.StringIO(text, newline=""))
    rows = list(reader)
    if not rows or rows[0] != csv_header(rubric):
        raise HeaderMismatch(
            f"expected header {csv_header(rubric)}, got {rows[0] if rows else 'nothing'}"
        )
    students = {s.id: s for s in roster}
    label_by_points = {
        c.name: {format_score(lv.points): lv.label for lv in c.levels}
        for c in rubric.criteria
    }
    records = []
    for idx, row in enumerate(rows[1:], start=2):
        try:
            if len(row) != len(rubric.criteria) + 4:
                raise ValueError(f"expected {len(rubric.criteria) + 4} columns")
            student = students.get(row[0])
            if student is None:
                raise ValueError(f"unknown student id {row[0]!r}")
            selections = {}
            for criterion, cell in zip(rubric.criteria, row[2:]):
                try:
                    canonical = format_score(parse_score(cell))
                except (ValueError, ZeroDivisionError):
                    raise ValueError(
                        f"criterion {criterion.name!r}: not a score: {cell!r}")
                label = label_by_points[criterion.name].get(canonical)
                if label is None:
                    raise ValueError(
                        f"criterion {criterion.name!r} has no level worth {cell}")
                selections[criterion.name] = label
            record = grade_submission(rubric, assignment, student, selections,
                                      roster={s.id for s in roster})
            if format_score(record.total) != row[-2]:
                raise ValueError(
                    f"total column {row[-2]!r} does not match selections")
        except (ValueError, GradelabError) as exc:
            raise RowError(idx, exc) from exc
        records.append(record)
    return records


# --- charts as static SVG --------------------------------------------------

_PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948")


def bar_chart_svg(chart: ChartData, width: int = 640, height: int = 320) -> str:
    pad, axis = 30, 40
    plot_w, plot_h = width - axis - pad, height - 2 * pad
    n = len(chart.series)
    top = max((v for _, v in chart.series), default=0) or 1
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<text x="{width / 2:g}" y="18" text-anchor="middle" '
        f'font-size="14">{html.escape(chart.title)}</text>',
        f'<line x1="{axis}" y1="{pad}" x2="{axis}" y2="{height - pad}" '
        'stroke="#333"/>',
        f'<line x1="{axis}" y1="{height - pad}" x2="{width - pad}" '
        f'y2="{height - pad}" stroke="#333"/>',
    ]
    if n:
        slot = plot_w / n
        bar_w = slot * 0.7
        for i, (label, value) in enumerate(chart.series):
            bar_h = plot_h * value / top
            x = axis + i * slot + slot * 0.15
            y = height - pad - bar_h
            parts.append(
                f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar_w:.2f}" '
                f'height="{bar_h:.2f}" fill="{_PALETTE[i % len(_PALETTE)]}"/>'
            )
            parts.append(
                f'<text x="{x + bar_w / 2:.2f}" y="{height - pad + 14}" '
                f'text-anchor="middle" font-size="10">{html.escape(label)}</text>'
            )
            parts.append(
                f'<text x="{x + bar_w / 2:.2f}" y="{y - 4:.2f}" '
                f'text-anchor="middle" font-size="10">{value:g}</text>'
            )
    parts.append("</svg>")
    return "".join(parts)


def pie_chart_svg(chart: ChartData, size: int = 320) -> str:
    cx = cy = size / 2
    r = size / 2 - 40
    total = sum(v for _, v in chart.series)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size + 40}" viewBox="0 0 {size} {size + 40}">',
        f'<text x="{cx:g}" y="18" text-anchor="middle" font-size="14">'
        f'{html.escape(chart.title)}</text>',
    ]
    if total <= 0:
        parts.append(
            f'<circle cx="{cx:g}" cy="{cy:g}" r="{r:g}" fill="none" '
            'stroke="#999"/>'
        )
        parts.append(
            f'<text x="{cx:g}" y="{cy:g}" text-anchor="middle" '
            'font-size="12">no data</text>'
        )
    else:
        angle = -math.pi / 2
        for i, (label, value) in enumerate(chart.series):
            frac = value / total
            if frac <= 0:
                continue
            end = angle + 2 * math.pi * frac
            x1, y1 = cx + r * math.cos(angle), cy + r * math.sin(angle)
            x2, y2 = cx + r * math.cos(end), cy + r * math.sin(end)
            large = 1 if frac > 0.5 else 0
            if frac >= 1:
                parts.append(
                    f'<circle cx="{cx:g}" cy="{cy:g}" r="{r:g}" '
                    f'fill="{_PALETTE[i % len(_PALETTE)]}"/>'
                )
            else:
                parts.append(
                    f'<path d="M{cx:.2f},{cy:.2f} L{x1:.2f},{y1:.2f} '
                    f'A{r:.2f},{r:.2f} 0 {large} 1 {x2:.2f},{y2:.2f} Z" '
                    f'fill="{_PALETTE[i % len(_PALETTE)]}"/>'
                )
            angle = end
    for i, (label, value) in enumerate(chart.series):
        y = size + 12 + i * 14
        parts.append(
            f'<rect x="10" y="{y - 9}" width="10" height="10" '
            f'fill="{_PALETTE[i % len(_PALETTE)]}"/>'
        )
        parts.append(
            f'<text x="26" y="{y}" font-size="11">'
            f'{html.escape(label)}: {value:g}</text>'
        )
    parts.append("</svg>")
    return "".join(parts)


# --- feedback documents ----------------------------------------------------

@dataclass(frozen=True)
class FeedbackDocument:
    student_id: str
    assignment_id: str
    body: str  # self-contained printable HTML
    attachments: tuple[tuple[str, str, bytes], ...] = ()  # (name, media type, bytes)


def _fmt(value: float) -> str:
    return format(value, ".12g")


def render_report(assignment: Assignment, records: Sequence[GradeRecord],
                  rubric: Rubric, stats: StatsSummary | None,
                  charts: Sequence[ChartData], roster: Sequence[Student], *,
                  generated_at: str) -> tuple[list[FeedbackDocument], FeedbackDocument]:
    """Per-student feedback documents plus one class report.

    Deterministic: identical inputs (including `generated_at`) produce
    byte-identical bodies.
    """
    names = {s.id: s.name for s in roster}
    by_student = {r.student_id: r for r in records}
    docs = []
    for student_id, _total in class_scores(list(records), names):
        rec = by_student[student_id]
        rows = "".join(
            f"<tr><td>{html.escape(c.name)}</td>"
            f"<td>{html.escape(rec.selections[c.name])}</td>"
            f"<td>{format_score(c.points_for(rec.selections[c.name]))}"
            f" / {format_score(c.max_points)}</td></tr>"
            for c in rubric.criteria
        )
        context = ""
        if stats is not None:
            context = (f"<p>Class mean: {_fmt(stats.mean)} &middot; "
                       f"class median: {_fmt(stats.median)}</p>")
        comment = (f"<p><strong>Comment:</strong> {html.escape(rec.comment)}</p>"
                   if rec.comment else "")
        body = (
            "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
            f"<title>{html.escape(assignment.name)} feedback</title></head><body>"
            f"<h1>{html.escape(assignment.name)}</h1>"
            f"<p>Student: {html.escape(names[student_id])} ({student_id})</p>"
            f"<p>Generated: {html.escape(generated_at)}</p>"
            f"<table><tr><th>Criterion</th><th>Level</th><th>Points</th></tr>"
            f"{rows}</table>"
            f"<p>Total: {format_score(rec.total)} &middot; "
            f"Percentage: {rec.percentage_display()}%</p>"
            f"{context}{comment}</body></html>"
        )
        docs.append(FeedbackDocument(student_id=student_id,
                                     assignment_id=assignment.id, body=body))

    chart_svgs = "".join(
        bar_chart_svg(c) if c.kind == "bar" else pie_chart_svg(c) for c in charts
    )
    if stats is not None:
        modes = ", ".join(_fmt(m) for m in stats.modes)
        summary = (f"<p>n = {stats.n} &middot; mean {_fmt(stats.mean)} &middot; "
                   f"median {_fmt(stats.median)} &middot; mode(s) {modes}</p>")
    else:
        summary = "<p>No grades recorded yet.</p>"
    class_body = (
        "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
        f"<title>{html.escape(assignment.name)} class report</title></head><body>"
        f"<h1>{html.escape(assignment.name)}: class report</h1>"
        f"<p>Generated: {html.escape(generated_at)}</p>"
        f"{summary}{chart_svgs}</body></html>"
    )
    class_report = FeedbackDocument(student_id="", assignment_id=assignment.id,
                                    body=class_body)
    return docs, class_report


# --- mail transports -------------------------------------------------------

class MailTransport(Protocol):
    def send(self, recipient: str, subject: str, body: str,
             attachments: Sequence[tuple[str, str, bytes]],
             message_id: str) -> str:
        """Deliver one message; idempotent per (recipient, message_id).
        Returns "sent" or "duplicate"."""
        ...


class FileOutboxTransport:
    """Writes each message as a file into an outbox directory (the test
    default). Re-sends of an already delivered (recipient, message id)
    pair are skipped."""

    def __init__(self, outbox_dir: str | Path):
        self.outbox = Path(outbox_dir)
        self.outbox.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._delivered = self._scan_delivered()

    def _scan_delivered(self) -> set[tuple[str, str]]:
        seen = set()
        for path in sorted(self.outbox.glob("*.eml")):
            recipient = message_id = None
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.startswith("To: "):
                    recipient = line[4:]
                elif line.startswith("Message-ID: "):
                    message_id = line[12:]
                elif not line:
                    break
            if recipient and message_id:
                seen.add((recipient, message_id))
        return seen

    def send(self, recipient, subject, body, attachments, message_id) -> str:
        with self._lock:
            key = (recipient, message_id)
            if key in self._delivered:
                return "duplicate"
            stamp = time.strftime("%Y%m%dT%H%M%S")
            student_part = message_id.split("/")[-1]
            path = self.outbox / f"{stamp}-{len(self._delivered):04d}-{student_part}.eml"
            manifest = "".join(
                f"Attachment: {name} ({media})\n" for name, media, _ in attachments
            )
            path.write_text(
                f"To: {recipient}\n"
                f"Subject: {subject}\n"
                f"Message-ID: {message_id}\n"
                f"{manifest}\n"
                f"{body}\n",
                encoding="utf-8",
            )
            self._delivered.add(key)
            return "sent"


class SmtpTransport:
    """Real SMTP delivery (production option; excluded from the test
    suite)."""

    def __init__(self, host: str, port: int = 25, sender: str = "gradelab@localhost"):
        self.host, self.port, self.sender = host, port, sender
        self._lock = threading.Lock()
        self._delivered: set[tuple[str, str]] = set()

    def send(self, recipient, subject, body, attachments, message_id) -> str:
        with self._lock:
            if (recipient, message_id) in self._delivered:
                return "duplicate"
        msg = EmailMessage()
        msg["From"] = self.sender
        msg["To"] = recipient
        msg["Subject"] = subject
        msg["Message-ID"] = f"<{message_id}>"
        msg.set_content(body, subtype="html")
        for name, media, payload in attachments:
            maintype, _, subtype = media.partition("/")
            msg.add_attachment(payload, maintype=maintype,
                               subtype=subtype or "octet-stream", filename=name)
        try:
            with smtplib.SMTP(self.host, self.port) as smtp:
                smtp.send_message(msg)
        except (OSError, smtplib.SMTPException) as exc:
            raise TransportFailure(str(exc)) from exc
        with self._lock:
            self._delivered.add((recipient, message_id))
        return "sent"


@dataclass(frozen=True)
class DeliveryResult:
    student_id: str
    status: str  # "sent" | "duplicate" | "error"
    detail: str = ""


def feedback_message_id(doc: FeedbackDocument) -> str:
    digest = hashlib.sha256(doc.body.encode("utf-8")).hexdigest()[:16]
    return f"{doc.assignment_id}/{digest}/{doc.student_id}"


def send_feedback(transport: MailTransport, docs: Sequence[FeedbackDocument],
                  roster: Sequence[Student], *, subject: str = "Your feedback",
                  max_in_flight: int = 4) -> list[DeliveryResult]:
    """One send per student; partial failures reported per student and
    successes never rolled back. Results come back in roster order."""
    students = {s.id: s for s in roster}
    order = {s.id: i for i, s in enumerate(students.values())}
    docs = sorted(docs, key=lambda d: order.get(d.student_id, len(order)))

    def deliver(doc: FeedbackDocument) -> DeliveryResult:
        student = students.get(doc.student_id)
        if student is None or not student.email:
            return DeliveryResult(doc.student_id, "error",
                                  MissingEmail.__doc__ or "missing email")
        try:
            status = transport.send(student.email, subject, doc.body,
                                    doc.attachments, feedback_message_id(doc))
        except TransportFailure as exc:
            return DeliveryResult(doc.student_id, "error", str(exc))
        return DeliveryResult(doc.student_id, status)

    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        return list(pool.map(deliver, docs))
