"""Exception hierarchy shared across the package.

Every domain error derives from OakError so callers (CLI, HTTP layer)
can map failures to exit codes / status codes in one place.
"""


class OakError(Exception):
    """Base class for all domain errors."""


# --- graph ---------------------------------------------------------------

class EmptyId(OakError):
    pass


class KindConflict(OakError):
    pass


class MissingEndpoint(OakError):
    pass


class UnknownNode(OakError):
    pass


class EmptyField(OakError):
    pass


# --- media store ---------------------------------------------------------

class EmptyMime(OakError):
    pass


class NotFound(OakError):
    pass


class MalformedId(OakError):
    pass


# --- embedding / index ---------------------------------------------------

class EmptyText(OakError):
    pass


class AllStopTokens(OakError):
    pass


class DimMismatch(OakError):
    pass


class ZeroVector(OakError):
    pass


class NonFiniteVector(OakError):
    pass


class EmptyIndex(OakError):
    pass


# --- workflow / rules ----------------------------------------------------

class EmptyProductId(OakError):
    pass


class UnknownSession(OakError):
    pass


class IllegalTransition(OakError):
    pass


class UnknownDefect(OakError):
    pass


class NonFiniteValue(OakError):
    pass


class UnknownMedia(OakError):
    pass


class OverrideCommentRequired(OakError):
    pass


class ScoreOutOfRange(OakError):
    pass


class InvalidRule(OakError):
    pass


class DuplicatePriority(OakError):
    pass


# --- classification ------------------------------------------------------

class EmptyImage(OakError):
    pass


class NoExemplars(OakError):
    pass


class UnknownLabel(OakError):
    pass


class EmptyMatrix(OakError):
    pass


# --- evaluation ----------------------------------------------------------

class EmptyCases(OakError):
    pass


# --- ingestion -----------------------------------------------------------

class ParseError(OakError):
    pass


class MissingImageFile(OakError):
    pass


# --- service -------------------------------------------------------------

class NoModality(OakError):
    pass


class VersionMismatch(OakError):
    pass


class CorruptSnapshot(OakError):
    pass


class ProviderUnavailable(OakError):
    pass
