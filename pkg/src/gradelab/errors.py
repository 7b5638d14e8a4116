"""Exception hierarchy shared by all gradelab modules.

Every error carries a stable machine ``code`` so the HTTP layer can map it
to a wire-level error body without string matching on messages.
"""

from __future__ import annotations


class GradelabError(Exception):
    code = "internal_error"

    def __init__(self, message: str = "", **details):
        super().__init__(message or self.__doc__ or self.code)
        self.message = message or (self.__doc__ or self.code)
        self.details = details


# --- rubric construction ---------------------------------------------------

class EmptyCriteria(GradelabError):
    """Rubric has no criteria."""
    code = "empty_criteria"


class DuplicateCriterion(GradelabError):
    """Two criteria in the rubric share a name."""
    code = "duplicate_criterion"


class TooFewLevels(GradelabError):
    """A criterion has fewer than two performance levels."""
    code = "too_few_levels"


class NonMonotonicLevels(GradelabError):
    """Level point values are not strictly increasing."""
    code = "non_monotonic_levels"


class DuplicateLevel(GradelabError):
    """Two levels in one criterion share a label."""
    code = "duplicate_level"


class InvalidPoints(GradelabError):
    """A level's point value is negative or not a finite rational."""
    code = "invalid_points"


class InvalidRubricDefinition(GradelabError):
    """A rubric definition file is malformed."""
    code = "invalid_rubric_definition"


# --- grading ---------------------------------------------------------------

class MissingCriterion(GradelabError):
    """A rubric criterion has no selected level."""
    code = "missing_criterion"


class UnknownCriterion(GradelabError):
    """A selection names a criterion not in the rubric."""
    code = "unknown_criterion"


class UnknownLevel(GradelabError):
    """A selection names a level label the criterion does not define."""
    code = "unknown_level"


class StudentNotEnrolled(GradelabError):
    """The student is not on the class roster."""
    code = "student_not_enrolled"


class MixedAssignments(GradelabError):
    """Grade records do not all belong to one assignment."""
    code = "mixed_assignments"


class InvalidThreshold(GradelabError):
    """Assignment threshold is outside [0, rubric max score]."""
    code = "invalid_threshold"


# --- statistics ------------------------------------------------------------

class EmptyDataset(GradelabError):
    """The operation is undefined on an empty dataset."""
    code = "empty_dataset"


class UnknownStudent(GradelabError):
    """A student id has no known name/record."""
    code = "unknown_student"


# --- persistence -----------------------------------------------------------

class NotFound(GradelabError):
    """No entity with that id exists (or it is not visible to the caller)."""
    code = "not_found"


class ForeignKeyViolation(GradelabError):
    """A referenced entity does not exist, or the target is still referenced."""
    code = "foreign_key_violation"


class UniqueViolation(GradelabError):
    """A uniqueness constraint (email, class/date, ...) would be broken."""
    code = "unique_violation"


class SchemaTooNew(GradelabError):
    """The database file was written by a newer schema version."""
    code = "schema_too_new"


class IoFailure(GradelabError):
    """The database file could not be opened or written."""
    code = "io_failure"


class UnknownClass(GradelabError):
    """No class with that id exists."""
    code = "unknown_class"


# --- export / feedback -----------------------------------------------------

class HeaderMismatch(GradelabError):
    """CSV header does not match the rubric's criteria."""
    code = "header_mismatch"


class RowError(GradelabError):
    """A CSV data row failed grade validation."""
    code = "row_error"

    def __init__(self, row: int, cause: Exception):
        super().__init__(f"row {row}: {cause}", row=row, cause=type(cause).__name__)
        self.row = row
        self.cause = cause


class MissingEmail(GradelabError):
    """The student has no stored email address."""
    code = "missing_email"


class TransportFailure(GradelabError):
    """The mail transport failed to deliver a message."""
    code = "transport_failure"


# --- auth / api ------------------------------------------------------------

class DuplicateEmail(GradelabError):
    """A user with that email already exists."""
    code = "duplicate_email"


class WeakPassword(GradelabError):
    """Password is shorter than 8 characters."""
    code = "weak_password"


class InvalidEmail(GradelabError):
    """Email address is not syntactically valid."""
    code = "invalid_email"


class InvalidCredentials(GradelabError):
    """Email/password pair does not match any account."""
    code = "invalid_credentials"


class AuthRequired(GradelabError):
    """Missing, unknown, or expired session token."""
    code = "auth_required"
