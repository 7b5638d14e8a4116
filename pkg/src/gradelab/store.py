"""Embedded single-file relational store (sqlite) for all domain entities.

Schema is documented in docs/storage-schema.md. Rational scores are
persisted in their canonical exact string form ("3", "7/2") so round
trips are field-exact. Concurrency contract: many readers, one writer at
a time; one shared connection, writes serialized behind a lock.

Every mutation appends to an immutable audit log; replaying the grade
events reconstructs the current grade table exactly.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import time
from contextlib import contextmanager
from typing import Any, Iterable, Mapping

from .errors import (
    ForeignKeyViolation,
    InvalidThreshold,
    IoFailure,
    NotFound,
    SchemaTooNew,
    StudentNotEnrolled,
    UniqueViolation,
    UnknownClass,
)
from .grading import GradeRecord, now_iso
from .models import (
    Assignment,
    AttendanceRecord,
    Course,
    Criterion,
    Note,
    PerformanceLevel,
    Rubric,
    SchoolClass,
    Student,
    User,
    rubric_max_score,
)
from .numbers import format_score, parse_score

SCHEMA_VERSION = 1

_SCHEMA = """
CREATE TABLE IF NOT EXISTS users (
    id TEXT PRIMARY KEY,
    email TEXT NOT NULL UNIQUE,
    display_name TEXT NOT NULL,
    credential TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS students (
    id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    email TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS rubrics (
    id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    description TEXT NOT NULL,
    predefined INTEGER NOT NULL,
    criteria TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS classes (
    id TEXT PRIMARY KEY,
    owner_user_id TEXT NOT NULL REFERENCES users(id),
    name TEXT NOT NULL,
    student_ids TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS courses (
    id TEXT PRIMARY KEY,
    class_id TEXT NOT NULL REFERENCES classes(id),
    name TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS assignments (
    id TEXT PRIMARY KEY,
    course_id TEXT NOT NULL REFERENCES courses(id),
    name TEXT NOT NULL,
    rubric_id TEXT NOT NULL REFERENCES rubrics(id),
    threshold TEXT
);
CREATE TABLE IF NOT EXISTS grades (
    id TEXT PRIMARY KEY,
    assignment_id TEXT NOT NULL REFERENCES assignments(id),
    student_id TEXT NOT NULL REFERENCES students(id),
    payload TEXT NOT NULL,
    UNIQUE (assignment_id, student_id)
);
CREATE TABLE IF NOT EXISTS attendance (
    class_id TEXT NOT NULL REFERENCES classes(id),
    date TEXT NOT NULL,
    statuses TEXT NOT NULL,
    PRIMARY KEY (class_id, date)
);
CREATE TABLE IF NOT EXISTS notes (
    id TEXT PRIMARY KEY,
    owner_user_id TEXT NOT NULL REFERENCES users(id),
    title TEXT NOT NULL,
    body TEXT NOT NULL,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY,
    user_id TEXT NOT NULL REFERENCES users(id),
    expiry REAL NOT NULL
);
CREATE TABLE IF NOT EXISTS audit (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    ts TEXT NOT NULL,
    actor TEXT NOT NULL,
    kind TEXT NOT NULL,
    payload TEXT NOT NULL
);
"""


# --- entity <-> json -------------------------------------------------------

def rubric_to_dict(r: Rubric) -> dict:
    return {
        "id": r.id,
        "name": r.name,
        "description": r.description,
        "predefined": r.predefined,
        "criteria": [
            {
                "name": c.name,
                "levels": [
                    {"label": lv.label, "points": format_score(lv.points)}
                    for lv in c.levels
                ],
            }
            for c in r.criteria
        ],
    }


def rubric_from_dict(d: Mapping) -> Rubric:
    return Rubric(
        id=d["id"],
        name=d["name"],
        description=d["description"],
        predefined=bool(d["predefined"]),
        criteria=tuple(
            Criterion(
                c["name"],
                tuple(
                    PerformanceLevel(lv["label"], parse_score(lv["points"]))
                    for lv in c["levels"]
                ),
            )
            for c in d["criteria"]
        ),
    )


def grade_to_dict(g: GradeRecord) -> dict:
    return {
        "id": g.id,
        "assignment_id": g.assignment_id,
        "student_id": g.student_id,
        "selections": dict(g.selections),
        "total": format_score(g.total),
        "percentage": format_score(g.percentage),
        "graded_at": g.graded_at,
        "comment": g.comment,
    }


def grade_from_dict(d: Mapping) -> GradeRecord:
    return GradeRecord(
        id=d["id"],
        assignment_id=d["assignment_id"],
        student_id=d["student_id"],
        selections=dict(d["selections"]),
        total=parse_score(d["total"]),
        percentage=parse_score(d["percentage"]),
        graded_at=d["graded_at"],
        comment=d["comment"],
    )


class Store:
    """Handle to one database file; shareable across threads."""

    def __init__(self, path: str):
        self.path = str(path)
        self._lock = threading.RLock()
        try:
            self._db = sqlite3.connect(self.path, check_same_thread=False)
        except sqlite3.Error as exc:
            raise IoFailure(f"cannot open {path}: {exc}") from exc
        self._db.row_factory = sqlite3.Row
        self._db.execute("PRAGMA foreign_keys = ON")
        try:
            version = self._db.execute("PRAGMA user_version").fetchone()[0]
            if version > SCHEMA_VERSION:
                raise SchemaTooNew(
                    f"file schema v{version} is newer than supported v{SCHEMA_VERSION}"
                )
            with self._write():
                self._db.executescript(_SCHEMA)
                self._db.execute(f"PRAGMA user_version = {SCHEMA_VERSION}")
        except sqlite3.Error as exc:
            raise IoFailure(f"cannot initialize {path}: {exc}") from exc

    @property
    def schema_version(self) -> int:
        return self._db.execute("PRAGMA user_version").fetchone()[0]

    def close(self):
        self._db.close()

    @contextmanager
    def _write(self):
        with self._lock:
            try:
                yield self._db
            except BaseException:
                self._db.rollback()
                raise
            else:
                self._db.commit()

    def _audit(self, actor: str, kind: str, payload: dict):
        self._db.execute(
            "INSERT INTO audit (ts, actor, kind, payload) VALUES (?, ?, ?, ?)",
            (now_iso(), actor, kind, json.dumps(payload, sort_keys=True)),
        )

    # --- generic CRUD ------------------------------------------------------

    def put(self, entity, actor: str = "system"):
        if isinstance(entity, GradeRecord):
            return self.put_grade(entity, actor)
        kind = type(entity).__name__
        handler = getattr(self, f"_put_{kind}", None)
        if handler is None:
            raise TypeError(f"unknown entity kind {kind}")
        with self._write():
            try:
                handler(entity)
            except sqlite3.IntegrityError as exc:
                raise _map_integrity_error(exc) from exc
            self._audit(actor, "entity_created",
                        {"kind": kind, "snapshot": _snapshot(entity)})
        return entity

    def get(self, cls: type, entity_id: str):
        row = self._db.execute(
            f"SELECT * FROM {_TABLES[cls.__name__]} WHERE id = ?", (entity_id,)
        ).fetchone()
        if row is None:
            raise NotFound(f"no {cls.__name__} with id {entity_id}")
        return _from_row(cls, row)

    def list(self, cls: type) -> list:
        rows = self._db.execute(
            f"SELECT * FROM {_TABLES[cls.__name__]} ORDER BY id"
        ).fetchall()
        return [_from_row(cls, row) for row in rows]

    def delete(self, cls: type, entity_id: str, actor: str = "system"):
        kind = cls.__name__
        entity = self.get(cls, entity_id)  # raises NotFound
        with self._write():
            if kind == "Student":
                for row in self._db.execute("SELECT id, student_ids FROM classes"):
                    if entity_id in json.loads(row["student_ids"]):
                        raise ForeignKeyViolation(
                            f"student {entity_id} is on roster of class {row['id']}"
                        )
            try:
                self._db.execute(
                    f"DELETE FROM {_TABLES[kind]} WHERE id = ?", (entity_id,)
                )
            except sqlite3.IntegrityError as exc:
                raise ForeignKeyViolation(
                    f"{kind} {entity_id} is still referenced"
                ) from exc
            self._audit(actor, "entity_deleted",
                        {"kind": kind, "id": entity_id,
                         "snapshot": _snapshot(entity)})

    # --- per-kind writers (called inside a _write transaction) --------------

    def _put_User(self, u: User):
        self._db.execute(
            "INSERT INTO users (id, email, display_name, credential) "
            "VALUES (?, ?, ?, ?) ON CONFLICT(id) DO UPDATE SET email=excluded.email,"
            " display_name=excluded.display_name, credential=excluded.credential",
            (u.id, u.email, u.display_name, u.credential),
        )

    def _put_Student(self, s: Student):
        self._db.execute(
            "INSERT INTO students (id, name, email) VALUES (?, ?, ?) "
            "ON CONFLICT(id) DO UPDATE SET name=excluded.name, email=excluded.email",
            (s.id, s.name, s.email),
        )

    def _put_Rubric(self, r: Rubric):
        self._db.execute(
            "INSERT INTO rubrics (id, name, description, predefined, criteria) "
            "VALUES (?, ?, ?, ?, ?) ON CONFLICT(id) DO UPDATE SET "
            "name=excluded.name, description=excluded.description, "
            "predefined=excluded.predefined, criteria=excluded.criteria",
            (r.id, r.name, r.description, int(r.predefined),
             json.dumps(rubric_to_dict(r)["criteria"])),
        )

    def _put_SchoolClass(self, c: SchoolClass):
        for sid in c.student_ids:
            if self._db.execute(
                "SELECT 1 FROM students WHERE id = ?", (sid,)
            ).fetchone() is None:
                raise ForeignKeyViolation(f"roster references unknown student {sid}")
        self._db.execute(
            "INSERT INTO classes (id, owner_user_id, name, student_ids) "
            "VALUES (?, ?, ?, ?) ON CONFLICT(id) DO UPDATE SET "
            "owner_user_id=excluded.owner_user_id, name=excluded.name, "
            "student_ids=excluded.student_ids",
            (c.id, c.owner_user_id, c.name, json.dumps(list(c.student_ids))),
        )

    def _put_Course(self, c: Course):
        self._db.execute(
            "INSERT INTO courses (id, class_id, name) VALUES (?, ?, ?) "
            "ON CONFLICT(id) DO UPDATE SET class_id=excluded.class_id, "
            "name=excluded.name",
            (c.id, c.class_id, c.name),
        )

    def _put_Assignment(self, a: Assignment):
        if a.threshold is not None:
            row = self._db.execute(
                "SELECT criteria FROM rubrics WHERE id = ?", (a.rubric_id,)
            ).fetchone()
            if row is not None:
                rubric = rubric_from_dict(
                    {"id": a.rubric_id, "name": "", "description": "",
                     "predefined": False, "criteria": json.loads(row["criteria"])}
                )
                if not (0 <= a.threshold <= rubric_max_score(rubric)):
                    raise InvalidThreshold(
                        f"threshold {format_score(a.threshold)} outside "
                        f"[0, {format_score(rubric_max_score(rubric))}]"
                    )
        self._db.execute(
            "INSERT INTO assignments (id, course_id, name, rubric_id, threshold) "
            "VALUES (?, ?, ?, ?, ?) ON CONFLICT(id) DO UPDATE SET "
            "course_id=excluded.course_id, name=excluded.name, "
            "rubric_id=excluded.rubric_id, threshold=excluded.threshold",
            (a.id, a.course_id, a.name, a.rubric_id,
             None if a.threshold is None else format_score(a.threshold)),
        )

    def _put_Note(self, n: Note):
        self._db.execute(
            "INSERT INTO notes (id, owner_user_id, title, body, created_at) "
            "VALUES (?, ?, ?, ?, ?) ON CONFLICT(id) DO UPDATE SET "
            "title=excluded.title, body=excluded.body",
            (n.id, n.owner_user_id, n.title, n.body, n.created_at),
        )

    # --- grades (latest-wins upsert + audit trail) --------------------------

    def put_grade(self, record: GradeRecord, actor: str = "system") -> GradeRecord:
        with self._write():
            prior = self._db.execute(
                "SELECT id FROM grades WHERE assignment_id = ? AND student_id = ?",
                (record.assignment_id, record.student_id),
            ).fetchone()
            try:
                if prior is None:
                    self._db.execute(
                        "INSERT INTO grades (id, assignment_id, student_id, payload)"
                        " VALUES (?, ?, ?, ?)",
                        (record.id, record.assignment_id, record.student_id,
                         json.dumps(grade_to_dict(record))),
                    )
                    kind = "grade_created"
                else:
                    self._db.execute(
                        "UPDATE grades SET id = ?, payload = ? "
                        "WHERE assignment_id = ? AND student_id = ?",
                        (record.id, json.dumps(grade_to_dict(record)),
                         record.assignment_id, record.student_id),
                    )
                    kind = "grade_replaced"
            except sqlite3.IntegrityError as exc:
                raise _map_integrity_error(exc) from exc
            self._audit(actor, kind, grade_to_dict(record))
        return record

    def grades_for_assignment(self, assignment_id: str) -> list[GradeRecord]:
        rows = self._db.execute(
            "SELECT payload FROM grades WHERE assignment_id = ?", (assignment_id,)
        ).fetchall()
        return [grade_from_dict(json.loads(r["payload"])) for r in rows]

    def get_grade(self, assignment_id: str, student_id: str) -> GradeRecord:
        row = self._db.execute(
            "SELECT payload FROM grades WHERE assignment_id = ? AND student_id = ?",
            (assignment_id, student_id),
        ).fetchone()
        if row is None:
            raise NotFound(f"no grade for ({assignment_id}, {student_id})")
        return grade_from_dict(json.loads(row["payload"]))

    # --- attendance ---------------------------------------------------------

    def record_attendance(self, class_id: str, date: str,
                          statuses: Mapping[str, str],
                          actor: str = "system") -> AttendanceRecord:
        record = AttendanceRecord(class_id=class_id, date=date, statuses=statuses)
        with self._write():
            row = self._db.execute(
                "SELECT student_ids FROM classes WHERE id = ?", (class_id,)
            ).fetchone()
            if row is None:
                raise UnknownClass(f"no class {class_id}")
            roster = set(json.loads(row["student_ids"]))
            outsiders = set(record.statuses) - roster
            if outsiders:
                raise StudentNotEnrolled(
                    f"not on roster of {class_id}: {sorted(outsiders)}"
                )
            self._db.execute(
                "INSERT INTO attendance (class_id, date, statuses) VALUES (?, ?, ?)"
                " ON CONFLICT(class_id, date) DO UPDATE SET statuses=excluded.statuses",
                (class_id, date, json.dumps(dict(record.statuses), sort_keys=True)),
            )
            self._audit(actor, "attendance_recorded",
                        {"class_id": class_id, "date": date,
                         "statuses": dict(record.statuses)})
        return record

    def get_attendance(self, class_id: str, date: str) -> AttendanceRecord:
        row = self._db.execute(
            "SELECT * FROM attendance WHERE class_id = ? AND date = ?",
            (class_id, date),
        ).fetchone()
        if row is None:
            raise NotFound(f"no attendance for ({class_id}, {date})")
        return AttendanceRecord(class_id=row["class_id"], date=row["date"],
                                statuses=json.loads(row["statuses"]))

    def list_attendance(self, class_id: str) -> list[AttendanceRecord]:
        rows = self._db.execute(
            "SELECT * FROM attendance WHERE class_id = ? ORDER BY date", (class_id,)
        ).fetchall()
        return [
            AttendanceRecord(class_id=r["class_id"], date=r["date"],
                             statuses=json.loads(r["statuses"]))
            for r in rows
        ]

    # --- sessions -----------------------------------------------------------

    def put_session(self, token: str, user_id: str, expiry: float):
        with self._write():
            self._db.execute(
                "INSERT OR REPLACE INTO sessions (token, user_id, expiry) "
                "VALUES (?, ?, ?)", (token, user_id, expiry),
            )

    def resolve_session(self, token: str) -> str | None:
        """User id for a live token, else None."""
        row = self._db.execute(
            "SELECT user_id, expiry FROM sessions WHERE token = ?", (token,)
        ).fetchone()
        if row is None or row["expiry"] < time.time():
            return None
        return row["user_id"]

    def find_user_by_email(self, email: str) -> User | None:
        row = self._db.execute(
            "SELECT * FROM users WHERE email = ?", (email,)
        ).fetchone()
        return None if row is None else _from_row(User, row)

    # --- audit --------------------------------------------------------------

    def audit_events(self) -> list[dict]:
        rows = self._db.execute("SELECT * FROM audit ORDER BY seq").fetchall()
        return [
            {"seq": r["seq"], "ts": r["ts"], "actor": r["actor"],
             "kind": r["kind"], "payload": json.loads(r["payload"])}
            for r in rows
        ]

    def replay_grades(self) -> dict[tuple[str, str], GradeRecord]:
        """Reconstruct the current grade table from the audit log alone."""
        current: dict[tuple[str, str], GradeRecord] = {}
        for event in self.audit_events():
            if event["kind"] in ("grade_created", "grade_replaced"):
                rec = grade_from_dict(event["payload"])
                current[(rec.assignment_id, rec.student_id)] = rec
            elif (event["kind"] == "entity_deleted"
                  and event["payload"].get("kind") == "GradeRecord"):
                snap = event["payload"]["snapshot"]
                current.pop((snap["assignment_id"], snap["student_id"]), None)
        return current

    # --- integrity ----------------------------------------------------------

    def validate_integrity(self):
        """Full-scan referential integrity check; raises on any violation."""
        db = self._db

        def exists(table, entity_id):
            return db.execute(
                f"SELECT 1 FROM {table} WHERE id = ?", (entity_id,)
            ).fetchone() is not None

        for row in db.execute("SELECT * FROM classes"):
            if not exists("users", row["owner_user_id"]):
                raise ForeignKeyViolation(f"class {row['id']}: missing owner")
            roster = json.loads(row["student_ids"])
            if len(set(roster)) != len(roster):
                raise UniqueViolation(f"class {row['id']}: duplicate roster entry")
            for sid in roster:
                if not exists("students", sid):
                    raise ForeignKeyViolation(f"class {row['id']}: missing {sid}")
        for row in db.execute("SELECT * FROM courses"):
            if not exists("classes", row["class_id"]):
                raise ForeignKeyViolation(f"course {row['id']}: missing class")
        for row in db.execute("SELECT * FROM assignments"):
            if not exists("courses", row["course_id"]):
                raise ForeignKeyViolation(f"assignment {row['id']}: missing course")
            if not exists("rubrics", row["rubric_id"]):
                raise ForeignKeyViolation(f"assignment {row['id']}: missing rubric")
        for row in db.execute("SELECT * FROM grades"):
            if not exists("assignments", row["assignment_id"]):
                raise ForeignKeyViolation(f"grade {row['id']}: missing assignment")
            if not exists("students", row["student_id"]):
                raise ForeignKeyViolation(f"grade {row['id']}: missing student")
        for row in db.execute("SELECT * FROM attendance"):
            if not exists("classes", row["class_id"]):
                raise ForeignKeyViolation("attendance record: missing class")
        for row in db.execute("SELECT * FROM notes"):
            if not exists("users", row["owner_user_id"]):
                raise ForeignKeyViolation(f"note {row['id']}: missing owner")
        emails = [r["email"] for r in db.execute("SELECT email FROM users")]
        if len(set(emails)) != len(emails):
            raise UniqueViolation("duplicate user email")


def open_store(path: str) -> Store:
    """Open (creating on first use) the single-file store at `path`."""
    return Store(path)


_TABLES = {
    "User": "users",
    "Student": "students",
    "Rubric": "rubrics",
    "SchoolClass": "classes",
    "Course": "courses",
    "Assignment": "assignments",
    "Note": "notes",
    "GradeRecord": "grades",
}


def _from_row(cls: type, row: sqlite3.Row):
    name = cls.__name__
    if name == "User":
        return User(id=row["id"], email=row["email"],
                    display_name=row["display_name"], credential=row["credential"])
    if name == "Student":
        return Student(id=row["id"], name=row["name"], email=row["email"])
    if name == "Rubric":
        return rubric_from_dict(
            {"id": row["id"], "name": row["name"], "description": row["description"],
             "predefined": row["predefined"], "criteria": json.loads(row["criteria"])}
        )
    if name == "SchoolClass":
        return SchoolClass(id=row["id"], owner_user_id=row["owner_user_id"],
                           name=row["name"],
                           student_ids=tuple(json.loads(row["student_ids"])))
    if name == "Course":
        return Course(id=row["id"], class_id=row["class_id"], name=row["name"])
    if name == "Assignment":
        return Assignment(
            id=row["id"], course_id=row["course_id"], name=row["name"],
            rubric_id=row["rubric_id"],
            threshold=None if row["threshold"] is None
            else parse_score(row["threshold"]),
        )
    if name == "Note":
        return Note(id=row["id"], owner_user_id=row["owner_user_id"],
                    title=row["title"], body=row["body"],
                    created_at=row["created_at"])
    if name == "GradeRecord":
        return grade_from_dict(json.loads(row["payload"]))
    raise TypeError(f"unknown entity kind {name}")


def _snapshot(entity) -> Any:
    if isinstance(entity, Rubric):
        return rubric_to_dict(entity)
    if isinstance(entity, GradeRecord):
        return grade_to_dict(entity)
    if isinstance(entity, Assignment):
        return {
            "id": entity.id, "course_id": entity.course_id, "name": entity.name,
            "rubric_id": entity.rubric_id,
            "threshold": None if entity.threshold is None
            else format_score(entity.threshold),
        }
    if isinstance(entity, SchoolClass):
        return {"id": entity.id, "owner_user_id": entity.owner_user_id,
                "name": entity.name, "student_ids": list(entity.student_ids)}
    out = dict(entity.__dict__)
    out.pop("credential", None)  # never write secrets to the audit log
    return out


def _map_integrity_error(exc: sqlite3.IntegrityError):
    text = str(exc)
    if "FOREIGN KEY" in text:
        return ForeignKeyViolation(text)
    return UniqueViolation(text)
