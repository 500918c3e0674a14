"""Verdicts, the scoring rubric, and the append-only judgment log.

A card is *largely correct* when both participants, the interaction type,
and the negative-information indicator are consistent with the card's own
evidence text. Grounding correctness and phosphorylation-site correctness
never change the verdict; they are recorded as field flags only.

Cards whose evidence is background or methods material are skipped
outright in the phase-one rubric. The phase-two rubric differs in exactly
one cell: a non-results card that is also wrong counts as incorrect
instead of skipped. Evidence-consistency booleans come from a human
reviewer (a machine cannot read the evidence); the rubric itself is a
deterministic function of those inputs, so judgments can be re-derived if
the rubric ever changes.

The store is an append-only log with optimistic concurrency: each new
judgment for a card must name the next revision, and the latest revision
wins in metrics.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Union

from .cards import AMOUNT_KINDS, Blank, IndexCard
from .errors import MissingAssessmentError, StaleRevisionError, UnknownCardError
from .matching import FieldFlag


class VerdictKind(str, Enum):
    LARGELY_CORRECT = "LargelyCorrect"
    INCORRECT = "Incorrect"
    SKIPPED = "Skipped"


class SkipReason(str, Enum):
    BACKGROUND_OR_METHODS = "BackgroundOrMethods"
    DUPLICATE = "Duplicate"
    BLANK_INCREASES_AMOUNT = "BlankIncreasesAmount"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    skip_reason: Optional[SkipReason] = None

    def __post_init__(self):
        if (self.kind is VerdictKind.SKIPPED) != (self.skip_reason is not None):
            raise ValueError("skipped verdicts carry exactly one reason")

    def to_dict(self) -> dict:
        doc = {"kind": self.kind.value}
        if self.skip_reason is not None:
            doc["skip_reason"] = self.skip_reason.value
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Verdict":
        reason = doc.get("skip_reason")
        return cls(
            kind=VerdictKind(doc["kind"]),
            skip_reason=SkipReason(reason) if reason else None,
        )


LARGELY_CORRECT = Verdict(VerdictKind.LARGELY_CORRECT)
INCORRECT = Verdict(VerdictKind.INCORRECT)


def skipped(reason: SkipReason) -> Verdict:
    return Verdict(VerdictKind.SKIPPED, reason)


class Dialect(str, Enum):
    PHASE_I = "PhaseI"
    PHASE_II = "PhaseII"


@dataclass(frozen=True)
class Judge:
    kind: str  # "Rule" | "Human"
    reviewer: Optional[str] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "reviewer": self.reviewer}

    @classmethod
    def from_dict(cls, doc: dict) -> "Judge":
        return cls(kind=doc["kind"], reviewer=doc.get("reviewer"))


RULE_JUDGE = Judge(kind="Rule")


def human_judge(reviewer: str) -> Judge:
    return Judge(kind="Human", reviewer=reviewer)


@dataclass(frozen=True)
class FieldAssessment:
    """Raw evidence-consistency answers from a reviewer.

    The four booleans are required by the rubric; the rest refine the
    field flags without ever touching the verdict.
    """

    evidence_is_results: Optional[bool] = None
    participants_consistent: Optional[bool] = None
    interaction_consistent: Optional[bool] = None
    negative_flag_consistent: Optional[bool] = None
    grounding_correct_a: Optional[bool] = None
    grounding_correct_b: Optional[bool] = None
    in_model_correct_a: Optional[bool] = None
    in_model_correct_b: Optional[bool] = None

    REQUIRED = (
        "evidence_is_results",
        "participants_consistent",
        "interaction_consistent",
        "negative_flag_consistent",
    )

    @classmethod
    def from_dict(cls, doc: dict) -> "FieldAssessment":
        known = {f: doc.get(f) for f in cls.REQUIRED}
        for opt in (
            "grounding_correct_a",
            "grounding_correct_b",
            "in_model_correct_a",
            "in_model_correct_b",
        ):
            known[opt] = doc.get(opt)
        return cls(**known)


@dataclass(frozen=True)
class Judgment:
    card_id: str
    verdict: Verdict
    field_flags: frozenset[FieldFlag] = frozenset()
    judge: Judge = RULE_JUDGE
    revision: int = 1
    dialect: Dialect = Dialect.PHASE_I
    timestamp: str = ""

    def to_dict(self) -> dict:
        return {
            "card_id": self.card_id,
            "revision": self.revision,
            "verdict": self.verdict.to_dict(),
            "flags": sorted(f.value for f in self.field_flags),
            "judge": self.judge.to_dict(),
            "dialect": self.dialect.value,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Judgment":
        return cls(
            card_id=doc["card_id"],
            verdict=Verdict.from_dict(doc["verdict"]),
            field_flags=frozenset(FieldFlag(f) for f in doc.get("flags", [])),
            judge=Judge.from_dict(doc.get("judge", {"kind": "Rule"})),
            revision=int(doc["revision"]),
            dialect=Dialect(doc.get("dialect", "PhaseI")),
            timestamp=doc.get("timestamp", ""),
        )


def _assessment_flags(a: FieldAssessment) -> frozenset[FieldFlag]:
    flags = set()
    if a.grounding_correct_a is False:
        flags.add(FieldFlag.GROUNDING_ERROR_A)
    if a.grounding_correct_b is False:
        flags.add(FieldFlag.GROUNDING_ERROR_B)
    if a.in_model_correct_a is False:
        flags.add(FieldFlag.IN_MODEL_ERROR_A)
    if a.in_model_correct_b is False:
        flags.add(FieldFlag.IN_MODEL_ERROR_B)
    if a.participants_consistent is False:
        flags.add(FieldFlag.PARTICIPANT_A_ERROR)
        flags.add(FieldFlag.PARTICIPANT_B_ERROR)
    if a.interaction_consistent is False:
        flags.add(FieldFlag.INTERACTION_TYPE_ERROR)
    return frozenset(flags)


def is_blank_amount_card(card: IndexCard) -> bool:
    """"<blank> increases/decreases amount of X" carries no information."""
    return card.interaction.kind in AMOUNT_KINDS and isinstance(
        card.interaction.participant_a, Blank
    )


def apply_rubric(
    card: IndexCard,
    human_inputs: Union[FieldAssessment, dict],
    dialect: Dialect,
    judge: Judge = RULE_JUDGE,
    revision: int = 1,
) -> Judgment:
    """Turn reviewer assessments into a verdict under the given dialect."""
    if isinstance(human_inputs, dict):
        human_inputs = FieldAssessment.from_dict(human_inputs)

    # Card-intrinsic phase-one skip: no reviewer input can rescue it.
    if dialect is Dialect.PHASE_I and is_blank_amount_card(card):
        return Judgment(
            card_id=card.card_id or "",
            verdict=skipped(SkipReason.BLANK_INCREASES_AMOUNT),
            judge=judge,
            revision=revision,
            dialect=dialect,
        )

    for name in FieldAssessment.REQUIRED:
        if getattr(human_inputs, name) is None:
            raise MissingAssessmentError(name)

    consistent = (
        human_inputs.participants_consistent
        and human_inputs.interaction_consistent
        and human_inputs.negative_flag_consistent
    )
    flags = _assessment_flags(human_inputs)

    if not human_inputs.evidence_is_results:
        if dialect is Dialect.PHASE_I or consistent:
            verdict = skipped(SkipReason.BACKGROUND_OR_METHODS)
        else:
            verdict = INCORRECT
    else:
        verdict = LARGELY_CORRECT if consistent else INCORRECT

    return Judgment(
        card_id=card.card_id or "",
        verdict=verdict,
        field_flags=flags,
        judge=judge,
        revision=revision,
        dialect=dialect,
    )


class JudgmentStore:
    """Append-only judgment log with latest-revision reads.

    Writes to one card are serialized; a writer must name revision
    current+1, so two reviewers racing from the same base revision cannot
    silently overwrite each other. With a path, every accepted record is
    appended to a JSON-lines log that replays on load.
    """

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self._path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._known: set[str] = set()
        self._history: dict[str, list[Judgment]] = {}
        if self._path is not None and self._path.exists():
            for line in self._path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                judgment = Judgment.from_dict(json.loads(line))
                self._known.add(judgment.card_id)
                self._history.setdefault(judgment.card_id, []).append(judgment)

    def register(self, card_ids: Iterable[str]) -> None:
        with self._lock:
            self._known.update(card_ids)

    def known_cards(self) -> frozenset[str]:
        return frozenset(self._known)

    def current_revision(self, card_id: str) -> int:
        history = self._history.get(card_id)
        return history[-1].revision if history else 0

    def record(self, judgment: Judgment) -> int:
        """Append a judgment; returns the stored revision."""
        with self._lock:
            if judgment.card_id not in self._known:
                raise UnknownCardError(judgment.card_id)
            current = self.current_revision(judgment.card_id)
            if judgment.revision != current + 1:
                raise StaleRevisionError(judgment.card_id, judgment.revision, current)
            if not judgment.timestamp:
                judgment = replace(judgment, timestamp=datetime.now(timezone.utc).isoformat())
            self._history.setdefault(judgment.card_id, []).append(judgment)
            if self._path is not None:
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(judgment.to_dict(), sort_keys=True) + "\n")
            return judgment.revision

    def latest(self, card_id: str) -> Optional[Judgment]:
        history = self._history.get(card_id)
        return history[-1] if history else None

    def latest_all(self) -> dict[str, Judgment]:
        """Snapshot of the latest judgment per card."""
        return {card_id: history[-1] for card_id, history in self._history.items() if history}

    def history(self, card_id: str) -> list[Judgment]:
        return list(self._history.get(card_id, []))


def record_judgment(store: JudgmentStore, judgment: Judgment) -> int:
    """Module-level alias for the store's append operation."""
    return store.record(judgment)
