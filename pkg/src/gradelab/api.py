"""HTTP/JSON service under /api/v1.

Every route delegates to exactly one core operation; core errors map to
stable machine codes and HTTP statuses (see _STATUS below and
docs/api.md). Totals and percentages travel as decimal/rational strings
so clients never see binary-float artifacts. Handlers are stateless; all
shared state lives in the store.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import logging
import re
import secrets
import time
from dataclasses import dataclass
from typing import Callable, Mapping

from fastapi import Body, Depends, FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import exporting, stats
from .errors import (
    AuthRequired,
    DuplicateEmail,
    GradelabError,
    InvalidCredentials,
    InvalidEmail,
    NotFound,
    WeakPassword,
)
from .grading import class_scores, grade_submission, now_iso
from .models import (
    Assignment,
    Course,
    Criterion,
    Note,
    PerformanceLevel,
    Rubric,
    SchoolClass,
    Student,
    User,
    builtin_rubrics,
    fresh_id,
    new_rubric,
    rubric_max_score,
)
from .numbers import format_score, parse_score
from .stats import Dataset, StatsSummary
from .store import Store, grade_to_dict, rubric_to_dict

log = logging.getLogger("gradelab.api")

_EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")
_MIN_PASSWORD = 8

_STATUS = {
    "not_found": 404,
    "unknown_class": 404,
    "auth_required": 401,
    "invalid_credentials": 401,
    "duplicate_email": 409,
    "unique_violation": 409,
    "foreign_key_violation": 409,
    "schema_too_new": 500,
    "io_failure": 500,
    "transport_failure": 502,
    "internal_error": 500,
}
_DEFAULT_STATUS = 400  # validation-style errors


@dataclass
class ApiConfig:
    token_ttl_seconds: int = 24 * 3600
    outbox_dir: str = "outbox"
    transport_factory: Callable[["ApiConfig"], exporting.MailTransport] | None = None

    def make_transport(self) -> exporting.MailTransport:
        if self.transport_factory is not None:
            return self.transport_factory(self)
        return exporting.FileOutboxTransport(self.outbox_dir)


# --- credentials ------------------------------------------------------------

def hash_password(password: str, *, salt: bytes | None = None) -> str:
    salt = salt if salt is not None else secrets.token_bytes(16)
    digest = hashlib.scrypt(password.encode("utf-8"), salt=salt,
                            n=2 ** 14, r=8, p=1)
    return f"scrypt${salt.hex()}${digest.hex()}"

_DUMMY_CREDENTIAL = hash_password("dummy-timing-equalizer", salt=b"\x00" * 16)


def verify_password(password: str, credential: str) -> bool:
    try:
        _, salt_hex, digest_hex = credential.split("$")
        digest = hashlib.scrypt(password.encode("utf-8"),
                                salt=bytes.fromhex(salt_hex), n=2 ** 14, r=8, p=1)
        return hmac.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


# --- json codecs ------------------------------------------------------------

def _fmt(value: float) -> str:
    return format(value, ".12g")


def rubric_json(r: Rubric) -> dict:
    out = rubric_to_dict(r)
    out["max_score"] = format_score(rubric_max_score(r))
    return out


def class_json(c: SchoolClass) -> dict:
    return {"id": c.id, "owner_user_id": c.owner_user_id, "name": c.name,
            "student_ids": list(c.student_ids)}


def course_json(c: Course) -> dict:
    return {"id": c.id, "class_id": c.class_id, "name": c.name}


def assignment_json(a: Assignment) -> dict:
    return {"id": a.id, "course_id": a.course_id, "name": a.name,
            "rubric_id": a.rubric_id,
            "threshold": None if a.threshold is None else format_score(a.threshold)}


def student_json(s: Student) -> dict:
    return {"id": s.id, "name": s.name, "email": s.email}


def note_json(n: Note) -> dict:
    return {"id": n.id, "owner_user_id": n.owner_user_id, "title": n.title,
            "body": n.body, "created_at": n.created_at}


def grade_json(record) -> dict:
    out = grade_to_dict(record)
    out["percentage_display"] = record.percentage_display()
    return out


def summary_json(s: StatsSummary) -> dict:
    return {"n": s.n, "mean": _fmt(s.mean), "median": _fmt(s.median),
            "modes": [_fmt(m) for m in s.modes], "min": _fmt(s.min),
            "max": _fmt(s.max)}


def chart_json(c: stats.ChartData) -> dict:
    return {"kind": c.kind, "title": c.title,
            "series": [{"label": label, "value": _fmt(value)}
                       for label, value in c.series]}


def _require(payload: Mapping, *keys: str) -> list:
    missing = [k for k in keys if k not in payload]
    if missing:
        raise GradelabError(f"missing fields: {', '.join(missing)}")
    return [payload[k] for k in keys]


def _parse_criteria(raw) -> list[Criterion]:
    if not isinstance(raw, list):
        raise GradelabError("'criteria' must be a list")
    out = []
    for rc in raw:
        levels = tuple(
            PerformanceLevel(str(lv["label"]), parse_score(str(lv["points"])))
            for lv in rc.get("levels", [])
        )
        out.append(Criterion(str(rc.get("name", "")), levels))
    return out


# --- app --------------------------------------------------------------------

def create_app(store: Store, config: ApiConfig | None = None) -> FastAPI:
    config = config or ApiConfig()
    app = FastAPI(title="gradelab", openapi_url=None)

    for rubric in builtin_rubrics():
        try:
            store.get(Rubric, rubric.id)
        except NotFound:
            store.put(rubric)

    @app.exception_handler(GradelabError)
    async def _handle_domain_error(request: Request, exc: GradelabError):
        status = _STATUS.get(exc.code, _DEFAULT_STATUS)
        body = {"code": exc.code, "message": exc.message}
        if exc.details:
            body["details"] = {k: v for k, v in exc.details.items()
                               if isinstance(v, (str, int, float, bool))}
        return JSONResponse(status_code=status, content=body)

    @app.middleware("http")
    async def _log_requests(request: Request, call_next):
        start = time.monotonic()
        response = await call_next(request)
        log.info(json.dumps({
            "method": request.method,
            "path": request.url.path,
            "status": response.status_code,
            "duration_ms": round((time.monotonic() - start) * 1000, 2),
        }))
        return response

    def current_user(request: Request) -> User:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise AuthRequired("missing bearer token")
        user_id = store.resolve_session(header[len("Bearer "):])
        if user_id is None:
            raise AuthRequired("unknown or expired token")
        return store.get(User, user_id)

    # ownership: entities are visible only through classes the caller owns;
    # anything else reads as NotFound so existence never leaks
    def owned_class(user: User, class_id: str) -> SchoolClass:
        cls = store.get(SchoolClass, class_id)
        if cls.owner_user_id != user.id:
            raise NotFound(f"no SchoolClass with id {class_id}")
        return cls

    def owned_course(user: User, course_id: str) -> Course:
        course = store.get(Course, course_id)
        owned_class(user, course.class_id)
        return course

    def owned_assignment(user: User, assignment_id: str):
        assignment = store.get(Assignment, assignment_id)
        course = owned_course(user, assignment.course_id)
        cls = store.get(SchoolClass, course.class_id)
        rubric = store.get(Rubric, assignment.rubric_id)
        roster = [store.get(Student, sid) for sid in cls.student_ids]
        return assignment, course, cls, rubric, roster

    # --- health -------------------------------------------------------------

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    # --- auth ---------------------------------------------------------------

    @app.post("/api/v1/auth/register", status_code=201)
    async def register(payload: dict = Body(...)):
        email, password, display_name = _require(
            payload, "email", "password", "display_name")
        if not _EMAIL_RE.match(str(email)):
            raise InvalidEmail(f"not a valid email: {email!r}")
        if len(str(password)) < _MIN_PASSWORD:
            raise WeakPassword(f"password must be at least {_MIN_PASSWORD} characters")
        if store.find_user_by_email(str(email)) is not None:
            raise DuplicateEmail(f"an account for {email} already exists")
        user = User(id=fresh_id(), email=str(email),
                    display_name=str(display_name),
                    credential=hash_password(str(password)))
        store.put(user, actor=user.id)
        return {"user_id": user.id}

    @app.post("/api/v1/auth/login")
    async def login(payload: dict = Body(...)):
        email, password = _require(payload, "email", "password")
        user = store.find_user_by_email(str(email))
        # unknown email still burns a hash so timing and body are identical
        credential = user.credential if user else _DUMMY_CREDENTIAL
        ok = verify_password(str(password), credential)
        if user is None or not ok:
            raise InvalidCredentials("invalid credentials")
        token = secrets.token_urlsafe(32)  # 256 bits
        expiry = time.time() + config.token_ttl_seconds
        store.put_session(token, user.id, expiry)
        return {"token": token, "user_id": user.id, "expires_at": expiry}

    # --- classes & students -------------------------------------------------

    @app.post("/api/v1/classes", status_code=201)
    async def create_class(payload: dict = Body(...),
                           user: User = Depends(current_user)):
        (name,) = _require(payload, "name")
        cls = SchoolClass(id=fresh_id(), owner_user_id=user.id, name=str(name))
        store.put(cls, actor=user.id)
        return class_json(cls)

    @app.get("/api/v1/classes")
    async def list_classes(user: User = Depends(current_user)):
        return [class_json(c) for c in store.list(SchoolClass)
                if c.owner_user_id == user.id]

    @app.get("/api/v1/classes/{class_id}")
    async def get_class(class_id: str, user: User = Depends(current_user)):
        return class_json(owned_class(user, class_id))

    @app.put("/api/v1/classes/{class_id}")
    async def update_class(class_id: str, payload: dict = Body(...),
                           user: User = Depends(current_user)):
        cls = owned_class(user, class_id)
        (name,) = _require(payload, "name")
        cls = SchoolClass(id=cls.id, owner_user_id=cls.owner_user_id,
                          name=str(name), student_ids=cls.student_ids)
        store.put(cls, actor=user.id)
        return class_json(cls)

    @app.delete("/api/v1/classes/{class_id}", status_code=204)
    async def delete_class(class_id: str, user: User = Depends(current_user)):
        owned_class(user, class_id)
        store.delete(SchoolClass, class_id, actor=user.id)
        return Response(status_code=204)

    @app.post("/api/v1/classes/{class_id}/students", status_code=201)
    async def add_student(class_id: str, payload: dict = Body(...),
                          user: User = Depends(current_user)):
        cls = owned_class(user, class_id)
        name, email = _require(payload, "name", "email")
        student = Student(id=fresh_id(), name=str(name), email=str(email))
        store.put(student, actor=user.id)
        store.put(SchoolClass(id=cls.id, owner_user_id=cls.owner_user_id,
                              name=cls.name,
                              student_ids=cls.student_ids + (student.id,)),
                  actor=user.id)
        return student_json(student)

    @app.get("/api/v1/classes/{class_id}/students")
    async def list_students(class_id: str, user: User = Depends(current_user)):
        cls = owned_class(user, class_id)
        return [student_json(store.get(Student, sid)) for sid in cls.student_ids]

    @app.delete("/api/v1/classes/{class_id}/students/{student_id}",
                status_code=204)
    async def remove_student(class_id: str, student_id: str,
                             user: User = Depends(current_user)):
        cls = owned_class(user, class_id)
        if student_id not in cls.student_ids:
            raise NotFound(f"no Student with id {student_id}")
        store.put(SchoolClass(
            id=cls.id, owner_user_id=cls.owner_user_id, name=cls.name,
            student_ids=tuple(s for s in cls.student_ids if s != student_id)),
            actor=user.id)
        return Response(status_code=204)

    # --- courses ------------------------------------------------------------

    @app.post("/api/v1/courses", status_code=201)
    async def create_course(payload: dict = Body(...),
                            user: User = Depends(current_user)):
        class_id, name = _require(payload, "class_id", "name")
        owned_class(user, str(class_id))
        course = Course(id=fresh_id(), class_id=str(class_id), name=str(name))
        store.put(course, actor=user.id)
        return course_json(course)

    @app.get("/api/v1/courses")
    async def list_courses(class_id: str | None = None,
                           user: User = Depends(current_user)):
        owned = {c.id for c in store.list(SchoolClass)
                 if c.owner_user_id == user.id}
        courses = [c for c in store.list(Course) if c.class_id in owned]
        if class_id is not None:
            courses = [c for c in courses if c.class_id == class_id]
        return [course_json(c) for c in courses]

    @app.get("/api/v1/courses/{course_id}")
    async def get_course(course_id: str, user: User = Depends(current_user)):
        return course_json(owned_course(user, course_id))

    @app.delete("/api/v1/courses/{course_id}", status_code=204)
    async def delete_course(course_id: str, user: User = Depends(current_user)):
        owned_course(user, course_id)
        store.delete(Course, course_id, actor=user.id)
        return Response(status_code=204)

    # --- rubrics ------------------------------------------------------------

    @app.post("/api/v1/rubrics", status_code=201)
    async def create_rubric(payload: dict = Body(...),
                            user: User = Depends(current_user)):
        name, criteria = _require(payload, "name", "criteria")
        rubric = new_rubric(str(name), _parse_criteria(criteria),
                            description=str(payload.get("description", "")))
        store.put(rubric, actor=user.id)
        return rubric_json(rubric)

    @app.get("/api/v1/rubrics")
    async def list_rubrics(user: User = Depends(current_user)):
        return [rubric_json(r) for r in store.list(Rubric)]

    @app.get("/api/v1/rubrics/predefined")
    async def list_predefined(user: User = Depends(current_user)):
        return [rubric_json(r) for r in store.list(Rubric) if r.predefined]

    @app.get("/api/v1/rubrics/{rubric_id}")
    async def get_rubric(rubric_id: str, user: User = Depends(current_user)):
        return rubric_json(store.get(Rubric, rubric_id))

    @app.delete("/api/v1/rubrics/{rubric_id}", status_code=204)
    async def delete_rubric(rubric_id: str, user: User = Depends(current_user)):
        store.delete(Rubric, rubric_id, actor=user.id)
        return Response(status_code=204)

    # --- assignments --------------------------------------------------------

    @app.post("/api/v1/assignments", status_code=201)
    async def create_assignment(payload: dict = Body(...),
                                user: User = Depends(current_user)):
        course_id, name, rubric_id = _require(
            payload, "course_id", "name", "rubric_id")
        owned_course(user, str(course_id))
        threshold = payload.get("threshold")
        assignment = Assignment(
            id=fresh_id(), course_id=str(course_id), name=str(name),
            rubric_id=str(rubric_id),
            threshold=None if threshold is None else parse_score(str(threshold)))
        store.put(assignment, actor=user.id)
        return assignment_json(assignment)

    @app.get("/api/v1/assignments")
    async def list_assignments(course_id: str | None = None,
                               user: User = Depends(current_user)):
        owned = {c.id for c in store.list(SchoolClass)
                 if c.owner_user_id == user.id}
        visible_courses = {c.id for c in store.list(Course)
                           if c.class_id in owned}
        assignments = [a for a in store.list(Assignment)
                       if a.course_id in visible_courses]
        if course_id is not None:
            assignments = [a for a in assignments if a.course_id == course_id]
        return [assignment_json(a) for a in assignments]

    @app.get("/api/v1/assignments/{assignment_id}")
    async def get_assignment(assignment_id: str,
                             user: User = Depends(current_user)):
        assignment, *_ = owned_assignment(user, assignment_id)
        return assignment_json(assignment)

    @app.delete("/api/v1/assignments/{assignment_id}", status_code=204)
    async def delete_assignment(assignment_id: str,
                                user: User = Depends(current_user)):
        owned_assignment(user, assignment_id)
        store.delete(Assignment, assignment_id, actor=user.id)
        return Response(status_code=204)

    # --- grading ------------------------------------------------------------

    @app.put("/api/v1/assignments/{assignment_id}/grades/{student_id}")
    async def put_grade(assignment_id: str, student_id: str,
                        payload: dict = Body(...),
                        user: User = Depends(current_user)):
        assignment, _course, cls, rubric, roster = owned_assignment(
            user, assignment_id)
        (selections,) = _require(payload, "selections")
        if not isinstance(selections, Mapping):
            raise GradelabError("'selections' must be an object")
        try:
            student = store.get(Student, student_id)
        except NotFound:
            raise NotFound(f"no Student with id {student_id}")
        record = grade_submission(
            rubric, assignment, student,
            {str(k): str(v) for k, v in selections.items()},
            comment=str(payload.get("comment", "")),
            roster=set(cls.student_ids))
        store.put_grade(record, actor=user.id)
        return grade_json(record)

    @app.get("/api/v1/assignments/{assignment_id}/grades")
    async def list_grades(assignment_id: str,
                          user: User = Depends(current_user)):
        owned_assignment(user, assignment_id)
        return [grade_json(r)
                for r in store.grades_for_assignment(assignment_id)]

    # --- analytics ----------------------------------------------------------

    def _assignment_dataset(user: User, assignment_id: str):
        assignment, _course, cls, rubric, roster = owned_assignment(
            user, assignment_id)
        records = store.grades_for_assignment(assignment_id)
        names = {s.id: s.name for s in roster}
        scores = class_scores(records, names)
        dataset = Dataset.from_scores(total for _, total in scores)
        return assignment, rubric, roster, records, names, scores, dataset

    @app.get("/api/v1/assignments/{assignment_id}/stats")
    async def assignment_stats(assignment_id: str,
                               user: User = Depends(current_user)):
        (_assignment, rubric, _roster, records, _names, _scores,
         dataset) = _assignment_dataset(user, assignment_id)
        if len(dataset) == 0:
            return {"no_data": True}
        return {
            "no_data": False,
            "summary": summary_json(stats.central_tendency(dataset)),
            "criteria": {
                name: summary_json(summary)
                for name, summary in
                stats.criterion_breakdown(records, rubric).items()
            },
        }

    @app.get("/api/v1/assignments/{assignment_id}/graphs")
    async def assignment_graphs(assignment_id: str, threshold: str | None = None,
                                user: User = Depends(current_user)):
        (assignment, rubric, _roster, _records, names, scores,
         dataset) = _assignment_dataset(user, assignment_id)
        if threshold is not None:
            t = parse_score(threshold)
        elif assignment.threshold is not None:
            t = assignment.threshold
        else:
            t = rubric_max_score(rubric) / 2
        if len(dataset) == 0:
            return {"no_data": True, "threshold": format_score(t)}
        return {
            "no_data": False,
            "threshold": format_score(t),
            "bar": chart_json(stats.bar_chart_data(scores, names)),
            "pie": chart_json(stats.pie_chart_data(dataset, t)),
        }

    # --- attendance ---------------------------------------------------------

    @app.put("/api/v1/classes/{class_id}/attendance/{date}")
    async def put_attendance(class_id: str, date: str,
                             payload: dict = Body(...),
                             user: User = Depends(current_user)):
        owned_class(user, class_id)
        (statuses,) = _require(payload, "statuses")
        if not isinstance(statuses, Mapping):
            raise GradelabError("'statuses' must be an object")
        try:
            record = store.record_attendance(
                class_id, date, {str(k): str(v) for k, v in statuses.items()},
                actor=user.id)
        except ValueError as exc:
            raise GradelabError(str(exc))
        return {"class_id": record.class_id, "date": record.date,
                "statuses": dict(record.statuses)}

    @app.get("/api/v1/classes/{class_id}/attendance/{date}")
    async def get_attendance(class_id: str, date: str,
                             user: User = Depends(current_user)):
        owned_class(user, class_id)
        record = store.get_attendance(class_id, date)
        return {"class_id": record.class_id, "date": record.date,
                "statuses": dict(record.statuses)}

    # --- notes --------------------------------------------------------------

    @app.post("/api/v1/notes", status_code=201)
    async def create_note(payload: dict = Body(...),
                          user: User = Depends(current_user)):
        title, body = _require(payload, "title", "body")
        if not str(title):
            raise GradelabError("note title must be non-empty")
        note = Note(id=fresh_id(), owner_user_id=user.id, title=str(title),
                    body=str(body), created_at=now_iso())
        store.put(note, actor=user.id)
        return note_json(note)

    @app.get("/api/v1/notes")
    async def list_notes(user: User = Depends(current_user)):
        return [note_json(n) for n in store.list(Note)
                if n.owner_user_id == user.id]

    def owned_note(user: User, note_id: str) -> Note:
        note = store.get(Note, note_id)
        if note.owner_user_id != user.id:
            raise NotFound(f"no Note with id {note_id}")
        return note

    @app.get("/api/v1/notes/{note_id}")
    async def get_note(note_id: str, user: User = Depends(current_user)):
        return note_json(owned_note(user, note_id))

    @app.put("/api/v1/notes/{note_id}")
    async def update_note(note_id: str, payload: dict = Body(...),
                          user: User = Depends(current_user)):
        note = owned_note(user, note_id)
        title = str(payload.get("title", note.title))
        if not title:
            raise GradelabError("note title must be non-empty")
        note = Note(id=note.id, owner_user_id=note.owner_user_id, title=title,
                    body=str(payload.get("body", note.body)),
                    created_at=note.created_at)
        store.put(note, actor=user.id)
        return note_json(note)

    @app.delete("/api/v1/notes/{note_id}", status_code=204)
    async def delete_note(note_id: str, user: User = Depends(current_user)):
        owned_note(user, note_id)
        store.delete(Note, note_id, actor=user.id)
        return Response(status_code=204)

    # --- export & feedback --------------------------------------------------

    @app.get("/api/v1/assignments/{assignment_id}/export.csv")
    async def export_csv(assignment_id: str,
                         user: User = Depends(current_user)):
        assignment, _course, _cls, rubric, roster = owned_assignment(
            user, assignment_id)
        records = store.grades_for_assignment(assignment_id)
        data = exporting.export_grades_csv(assignment, records, rubric, roster)
        return Response(content=data, media_type="text/csv; charset=utf-8")

    @app.post("/api/v1/assignments/{assignment_id}/feedback")
    async def send_assignment_feedback(assignment_id: str,
                                       user: User = Depends(current_user)):
        (assignment, rubric, roster, records, _names, scores,
         dataset) = _assignment_dataset(user, assignment_id)
        summary = stats.central_tendency(dataset) if len(dataset) else None
        t = assignment.threshold if assignment.threshold is not None \
            else rubric_max_score(rubric) / 2
        charts = []
        if len(dataset):
            charts = [stats.bar_chart_data(scores, _names),
                      stats.pie_chart_data(dataset, t)]
        docs, _class_report = exporting.render_report(
            assignment, records, rubric, summary, charts, roster,
            generated_at=now_iso())
        results = exporting.send_feedback(config.make_transport(), docs, roster)
        return {"results": [
            {"student_id": r.student_id, "status": r.status, "detail": r.detail}
            for r in results
        ]}

    return app
