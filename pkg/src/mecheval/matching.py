"""Matching candidate cards against gold/reference interactions.

A candidate is a *full* match when its interaction family and both
participants line up with the gold interaction (participants may swap
sides only for binding and translocation). It is a *partial* match when
the family and participant B line up but the candidate left participant A
blank. Participant comparison is case-insensitive surface text; grounding
never affects match classification (grounding discrepancies are scored
separately and flow through human review).

Within a family, an exact-kind mismatch (e.g. adds_modification offered
for increases-phosphorylated-form, or a polarity flip like decreases
against increases) still matches but is flagged as an interaction-type
error for the detailed scoring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Union

from .cards import (
    Blank,
    ComplexParticipant,
    EmbeddedInteraction,
    EntityRef,
    GenericParticipant,
    IndexCard,
    Interaction,
    Participant,
    card_signature,
    is_modified_form,
    normalize_text,
)
from .families import DEFAULT_TABLE, EquivalenceTable


class MatchClass(str, Enum):
    FULL = "Full"
    PARTIAL = "Partial"
    NONE = "None"


class FieldFlag(str, Enum):
    INTERACTION_TYPE_ERROR = "InteractionTypeError"
    PARTICIPANT_A_ERROR = "ParticipantAError"
    PARTICIPANT_B_ERROR = "ParticipantBError"
    GROUNDING_ERROR_A = "GroundingErrorA"
    GROUNDING_ERROR_B = "GroundingErrorB"
    IN_MODEL_ERROR_A = "InModelErrorA"
    IN_MODEL_ERROR_B = "InModelErrorB"


@dataclass(frozen=True)
class MatchRecord:
    gold_id: str
    candidate_card_id: str
    match_class: MatchClass
    field_flags: frozenset[FieldFlag] = frozenset()
    auto_flagged: bool = False

    def __post_init__(self):
        if self.match_class is MatchClass.NONE and self.field_flags:
            raise ValueError("a non-match carries no field flags")


def _entity_texts(p: Participant) -> frozenset[str]:
    if isinstance(p, EntityRef):
        return frozenset([normalize_text(p.text)])
    if isinstance(p, ComplexParticipant):
        return frozenset(normalize_text(m.text) for m in p.members)
    if isinstance(p, GenericParticipant):
        return frozenset([normalize_text(p.label)])
    if isinstance(p, EmbeddedInteraction):
        return _entity_texts(p.interaction.participant_a) | _entity_texts(
            p.interaction.participant_b
        )
    return frozenset()


def participants_match(candidate: Participant, gold: Participant) -> bool:
    """Surface-text participant equality.

    Node kinds must agree: a generic participant is only permitted where
    the gold participant is generic. Complexes and embedded interactions
    compare by their component entity sets, order-free.
    """
    if isinstance(candidate, Blank) or isinstance(gold, Blank):
        return isinstance(candidate, Blank) and isinstance(gold, Blank)
    if isinstance(candidate, EntityRef) and isinstance(gold, EntityRef):
        return normalize_text(candidate.text) == normalize_text(gold.text)
    if isinstance(candidate, GenericParticipant) and isinstance(gold, GenericParticipant):
        return normalize_text(candidate.label) == normalize_text(gold.label)
    if isinstance(candidate, ComplexParticipant) and isinstance(gold, ComplexParticipant):
        return _entity_texts(candidate) == _entity_texts(gold)
    if isinstance(candidate, EmbeddedInteraction) and isinstance(gold, EmbeddedInteraction):
        return _entity_texts(candidate) == _entity_texts(gold)
    return False


def interaction_family(
    kind, modified_form: bool = False, table: EquivalenceTable = DEFAULT_TABLE
) -> str:
    """Family id for an interaction kind (see the equivalence table)."""
    kind_value = kind.value if hasattr(kind, "value") else str(kind)
    return table.family_of(kind_value, modified_form).name


GoldLike = Union[IndexCard, Interaction]


def _interaction_of(gold: GoldLike) -> Interaction:
    return gold.interaction if isinstance(gold, IndexCard) else gold


def match_interactions(
    candidate: Interaction, gold: Interaction, table: EquivalenceTable = DEFAULT_TABLE
) -> tuple[MatchClass, frozenset[FieldFlag]]:
    """Classify a candidate interaction against a gold interaction."""
    cand_family = table.family_of(candidate.kind.value, is_modified_form(candidate))
    gold_family = table.family_of(gold.kind.value, is_modified_form(gold))
    if cand_family.name != gold_family.name:
        return MatchClass.NONE, frozenset()

    flags: set[FieldFlag] = set()
    if candidate.kind is not gold.kind:
        # Near-equivalence within the family: match, but wrong exact type.
        flags.add(FieldFlag.INTERACTION_TYPE_ERROR)

    a_ok = participants_match(candidate.participant_a, gold.participant_a)
    b_ok = participants_match(candidate.participant_b, gold.participant_b)
    if a_ok and b_ok:
        return MatchClass.FULL, frozenset(flags)
    if cand_family.symmetric and participants_match(
        candidate.participant_a, gold.participant_b
    ) and participants_match(candidate.participant_b, gold.participant_a):
        return MatchClass.FULL, frozenset(flags)
    if (
        isinstance(candidate.participant_a, Blank)
        and not isinstance(gold.participant_a, Blank)
        and b_ok
    ):
        flags.add(FieldFlag.PARTICIPANT_A_ERROR)
        return MatchClass.PARTIAL, frozenset(flags)
    return MatchClass.NONE, frozenset()


def match_cards(
    candidate: IndexCard,
    gold: GoldLike,
    gold_id: Optional[str] = None,
    table: EquivalenceTable = DEFAULT_TABLE,
) -> MatchRecord:
    """Match one candidate card against one gold interaction.

    Every full or partial match is auto-flagged for human confirmation;
    the matcher proposes, a reviewer disposes.
    """
    klass, flags = match_interactions(candidate.interaction, _interaction_of(gold), table)
    resolved_gold_id = gold_id or (gold.card_id if isinstance(gold, IndexCard) else None) or "gold"
    return MatchRecord(
        gold_id=resolved_gold_id,
        candidate_card_id=candidate.card_id or "candidate",
        match_class=klass,
        field_flags=flags,
        auto_flagged=klass is not MatchClass.NONE,
    )


def grounding_flags(candidate: IndexCard, gold: GoldLike) -> frozenset[FieldFlag]:
    """Grounding/in-model discrepancies against a gold card.

    Computed per side for entity participants whose surface text matched;
    used to prefill judgment flags, never for match classification.
    """
    flags: set[FieldFlag] = set()
    cand = candidate.interaction
    gold_i = _interaction_of(gold)
    sides = (
        (cand.participant_a, gold_i.participant_a, FieldFlag.GROUNDING_ERROR_A, FieldFlag.IN_MODEL_ERROR_A),
        (cand.participant_b, gold_i.participant_b, FieldFlag.GROUNDING_ERROR_B, FieldFlag.IN_MODEL_ERROR_B),
    )
    for cand_p, gold_p, g_flag, m_flag in sides:
        if not (isinstance(cand_p, EntityRef) and isinstance(gold_p, EntityRef)):
            continue
        if not participants_match(cand_p, gold_p):
            continue
        if gold_p.grounding is not None:
            if cand_p.grounding is None or (
                cand_p.grounding.namespace,
                cand_p.grounding.identifier,
            ) != (gold_p.grounding.namespace, gold_p.grounding.identifier):
                flags.add(g_flag)
        if cand_p.in_model != gold_p.in_model:
            flags.add(m_flag)
    return frozenset(flags)


_CLASS_ORDER = {MatchClass.FULL: 0, MatchClass.PARTIAL: 1}


def best_match(
    candidates: Sequence[IndexCard],
    gold: GoldLike,
    gold_id: Optional[str] = None,
    table: EquivalenceTable = DEFAULT_TABLE,
) -> Optional[MatchRecord]:
    """Best matching candidate for one gold interaction, or None.

    Full beats partial; fewer field flags beat more; ties break on lowest
    rank then lowest card id, so the result does not depend on input order.
    """
    best: Optional[tuple] = None
    best_record: Optional[MatchRecord] = None
    for card in candidates:
        record = match_cards(card, gold, gold_id=gold_id, table=table)
        if record.match_class is MatchClass.NONE:
            continue
        sort_key = (
            _CLASS_ORDER[record.match_class],
            len(record.field_flags),
            card.rank if card.rank is not None else 10**9,
            record.candidate_card_id,
        )
        if best is None or sort_key < best:
            best = sort_key
            best_record = record
    return best_record


def dedup_submission(
    cards: Iterable[IndexCard], table: EquivalenceTable = DEFAULT_TABLE
) -> tuple[list[IndexCard], list[IndexCard]]:
    """Split cards into (unique, duplicates) by canonical signature.

    The first occurrence by (rank, input order) represents each
    interaction; the rest are returned so they can be given the
    skipped-as-duplicate verdict.
    """
    indexed = sorted(
        enumerate(cards), key=lambda pair: (pair[1].rank if pair[1].rank is not None else 10**9, pair[0])
    )
    seen: dict = {}
    keep_order: dict[int, IndexCard] = {}
    duplicates_order: dict[int, IndexCard] = {}
    for idx, card in indexed:
        key = card_signature(card, table)
        if key in seen:
            duplicates_order[idx] = card
        else:
            seen[key] = idx
            keep_order[idx] = card
    unique = [keep_order[i] for i in sorted(keep_order)]
    duplicates = [duplicates_order[i] for i in sorted(duplicates_order)]
    return unique, duplicates
