"""Domain errors shared by every module.

Each error carries a stable machine-readable ``code`` and the HTTP status
the API layer maps it to, so the error contract lives in one place.
"""

from __future__ import annotations


class GutboardError(Exception):
    code = "ERROR"
    http_status = 400

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class EmptyText(GutboardError):
    code = "EMPTY_TEXT"
    http_status = 400


class NoTags(GutboardError):
    code = "NO_TAGS"
    http_status = 400


class UnknownUser(GutboardError):
    code = "UNKNOWN_USER"
    http_status = 404


class UnknownQuestion(GutboardError):
    code = "UNKNOWN_QUESTION"
    http_status = 404


class NotAuthorized(GutboardError):
    code = "NOT_AUTHORIZED"
    http_status = 403


class NotQualified(GutboardError):
    code = "NOT_QUALIFIED"
    http_status = 409


class UnknownParent(GutboardError):
    code = "UNKNOWN_PARENT"
    http_status = 404


class CrossQuestionParent(GutboardError):
    code = "CROSS_QUESTION_PARENT"
    http_status = 409


class UnknownTopic(GutboardError):
    code = "UNKNOWN_TOPIC"
    http_status = 404


class UnknownSection(GutboardError):
    code = "UNKNOWN_SECTION"
    http_status = 404


class UnknownItem(GutboardError):
    code = "UNKNOWN_ITEM"
    http_status = 404


class IndexOutOfRange(GutboardError):
    code = "INDEX_OUT_OF_RANGE"
    http_status = 400


class UnknownKind(GutboardError):
    code = "UNKNOWN_KIND"
    http_status = 400


class UnknownExperiment(GutboardError):
    code = "UNKNOWN_EXPERIMENT"
    http_status = 404


class EmptyCorpus(GutboardError):
    code = "EMPTY_CORPUS"
    http_status = 400


class ModelNotBuilt(GutboardError):
    code = "MODEL_NOT_BUILT"
    http_status = 409


class DuplicateName(GutboardError):
    code = "DUPLICATE_NAME"
    http_status = 409


class InvalidCredentials(GutboardError):
    code = "INVALID_CREDENTIALS"
    http_status = 401


class ConfigInvalid(GutboardError):
    code = "CONFIG_INVALID"
    http_status = 400


class SeedParseError(GutboardError):
    code = "SEED_PARSE_ERROR"
    http_status = 400


class SchemaError(GutboardError):
    code = "SCHEMA_ERROR"
    http_status = 500


class StoreIoError(GutboardError):
    code = "IO_ERROR"
    http_status = 500
