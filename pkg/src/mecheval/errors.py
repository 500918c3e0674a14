"""Exception types and the validation-violation record shared across the package."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable


class ErrorCode(str, Enum):
    MALFORMED_DOCUMENT = "malformed_document"
    MISSING_FIELD = "missing_field"
    BAD_ENUM_VALUE = "bad_enum_value"
    INVARIANT = "invariant_violation"
    # model-graph codes
    DANGLING_ENDPOINT = "dangling_endpoint"
    MISSING_PROVENANCE = "missing_provenance"
    DUPLICATE_ID = "duplicate_id"
    SIGN_MISMATCH = "sign_mismatch"
    # warning-severity codes
    SUSPECT_GROUNDING = "suspect_grounding"
    UNPARSED_POSITION = "unparsed_position"
    UNSIGNED_DEFAULT = "unsigned_default"


@dataclass(frozen=True)
class ValidationError:
    code: ErrorCode
    path: str
    message: str
    value: Any = None
    severity: str = "error"

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def missing(path: str) -> ValidationError:
    return ValidationError(ErrorCode.MISSING_FIELD, path, "required field is missing")


def bad_enum(path: str, value: Any, allowed: Iterable[str]) -> ValidationError:
    return ValidationError(
        ErrorCode.BAD_ENUM_VALUE,
        path,
        f"value {value!r} not one of {sorted(allowed)}",
        value=value,
    )


class MechEvalError(Exception):
    """Base class for all package errors."""


class CardValidationError(MechEvalError):
    """Raised when an index-card document fails validation.

    Carries the complete list of violations, not just the first one.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        summary = "; ".join(str(e) for e in self.errors[:5])
        if len(self.errors) > 5:
            summary += f"; ... ({len(self.errors)} total)"
        super().__init__(f"invalid index card: {summary}")


class ModelValidationError(MechEvalError):
    """Raised when a mechanistic-model document fails to resolve.

    Carries the complete list of violations.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        summary = "; ".join(str(e) for e in self.errors[:5])
        if len(self.errors) > 5:
            summary += f"; ... ({len(self.errors)} total)"
        super().__init__(f"invalid model: {summary}")


class EmptyDenominatorError(MechEvalError):
    """Precision is undefined: no largely-correct or incorrect verdicts."""


class EmptyScoredSampleError(MechEvalError):
    """Throughput is undefined: the scored sample is empty."""


class NonpositiveDaysError(MechEvalError):
    """Throughput requires a positive number of days."""


class NonpositiveFoldError(MechEvalError):
    """Fold changes are ratios of abundances and must be positive."""


class MissingAssessmentError(MechEvalError):
    """A required human evidence assessment was not supplied."""

    def __init__(self, field: str):
        self.field = field
        super().__init__(f"missing assessment: {field}")


class UnknownCardError(MechEvalError):
    """Judgment refers to a card id the store has never seen."""


class StaleRevisionError(MechEvalError):
    """Optimistic-concurrency conflict: another judgment landed first."""

    def __init__(self, card_id: str, expected: int, current: int):
        self.card_id = card_id
        self.expected = expected
        self.current = current
        super().__init__(
            f"stale revision for {card_id}: tried to write rev {expected}, store is at rev {current}"
        )


class TooFewCuratorsError(MechEvalError):
    """Consensus needs at least two independent curator sets."""


class MissingProvenanceError(MechEvalError):
    """A model interaction cites no information source."""


class UnknownEntityError(MechEvalError):
    """Entity id not present in the model."""


class UnknownEdgeError(MechEvalError):
    """Edge id not present in the model."""


class UnknownObservationError(MechEvalError):
    """Explanation refers to a different observation than the one being checked."""


class UnsignedEdgeError(MechEvalError):
    """Sign propagation crossed an edge that carries no sign (translocation)."""

    def __init__(self, edge_id: str):
        self.edge_id = edge_id
        super().__init__(f"edge {edge_id} carries no sign")


class DisconnectedPathError(MechEvalError):
    """Consecutive edges in an explanation path do not share an endpoint."""


class PendingVerdictsError(MechEvalError):
    """Results grid requested while human reviews are still unresolved."""


class MissingInputError(MechEvalError):
    """A run input path does not exist."""


class ParseFailuresError(MechEvalError):
    """One or more submission documents failed to parse."""

    def __init__(self, failures):
        # failures: list of (path, [ValidationError]) pairs
        self.failures = list(failures)
        super().__init__(f"{len(self.failures)} document(s) failed to parse")


class DuplicateRunError(MechEvalError):
    """A run with this id already exists in the data root."""


class UnknownItemError(MechEvalError):
    """Review item id not found."""


class AlreadyClaimedError(MechEvalError):
    """Review item is actively claimed by another reviewer."""


class NotClaimantError(MechEvalError):
    """Only the reviewer holding the claim may resolve an item."""
