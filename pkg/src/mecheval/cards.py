"""Index-card domain types, parsing, validation, and canonical signatures.

An index card is a standardized record of one extracted molecular
interaction: two participants, an interaction type, text evidence from the
source paper, and the card's relation to a given signaling model. Cards
arrive as JSON documents (one per card, UTF-8, snake_case keys); a
submission is a directory tree ``team/paper_id/*.card.json``.

Parsing is strict about required structure but collects *all* violations
rather than stopping at the first. Two classes of oddity never fail a
parse: unknown extra fields are preserved verbatim and ignored (the format
is deliberately extensible), and soft violations such as a protein
grounded to a GO id or an unparseable modification position are recorded
as warnings on the card.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Union

from .errors import CardValidationError, ErrorCode, ValidationError, bad_enum, missing
from .families import DEFAULT_TABLE, EquivalenceTable


class EntityType(str, Enum):
    PROTEIN = "Protein"
    CHEMICAL = "Chemical"
    GENE = "Gene"
    PROTEIN_FAMILY = "ProteinFamily"
    COMPLEX_MEMBER = "Complex-member"


class Namespace(str, Enum):
    UNIPROT = "UniProt"
    HGNC = "HGNC"
    PUBCHEM = "PubChem"
    GO = "GO"
    NONE = "None"


class SourceType(str, Enum):
    HUMAN = "Human"
    MACHINE = "Machine"
    HUMAN_MACHINE = "HumanMachine"


class ModelRelationType(str, Enum):
    EXTENSION = "Extension"
    SPECIFICATION = "Specification"
    CORROBORATION = "Corroboration"
    CONFLICTING = "Conflicting"


class InteractionKind(str, Enum):
    BINDS = "binds"
    ADDS_MODIFICATION = "adds_modification"
    INHIBITS_MODIFICATION = "inhibits_modification"
    TRANSLOCATES = "translocates"
    INCREASES_AMOUNT = "increases_amount"
    DECREASES_AMOUNT = "decreases_amount"
    INCREASES_ACTIVITY = "increases_activity"
    DECREASES_ACTIVITY = "decreases_activity"


# Accepted spellings seen in the wild for interaction types.
_KIND_ALIASES = {
    "increases": InteractionKind.INCREASES_AMOUNT,
    "decreases": InteractionKind.DECREASES_AMOUNT,
    "modifies": InteractionKind.ADDS_MODIFICATION,
}

MODIFICATION_KINDS = frozenset(
    {InteractionKind.ADDS_MODIFICATION, InteractionKind.INHIBITS_MODIFICATION}
)
AMOUNT_KINDS = frozenset(
    {InteractionKind.INCREASES_AMOUNT, InteractionKind.DECREASES_AMOUNT}
)


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class Grounding:
    namespace: Namespace
    identifier: str = ""


@dataclass(frozen=True)
class Position:
    """A modification site: residue letter (optional) plus positive index."""

    site: int
    residue: Optional[str] = None

    def __str__(self) -> str:
        return f"{self.residue or ''}{self.site}"


@dataclass(frozen=True)
class Feature:
    """Protein feature: a modification (with sites), isoform, or mutant tag."""

    modification: Optional[str] = None
    positions: tuple[Union[Position, str], ...] = ()
    isoform: Optional[str] = None
    mutant: Optional[str] = None


@dataclass(frozen=True)
class EntityRef:
    text: str
    entity_type: EntityType
    grounding: Optional[Grounding] = None
    features: tuple[Feature, ...] = ()
    in_model: bool = False


@dataclass(frozen=True)
class ComplexParticipant:
    members: tuple[EntityRef, ...]


@dataclass(frozen=True)
class GenericParticipant:
    """A non-specific participant such as "histone" or "RTK".

    Kept distinct from EntityRef so the rule that a generic candidate only
    matches a generic gold participant stays checkable.
    """

    label: str


@dataclass(frozen=True)
class Blank:
    """Unknown / unstated participant-A."""


BLANK = Blank()


@dataclass(frozen=True)
class EmbeddedInteraction:
    """A participant that is itself a direct interaction (one level deep)."""

    interaction: "Interaction"


Participant = Union[EntityRef, ComplexParticipant, GenericParticipant, Blank, EmbeddedInteraction]


@dataclass(frozen=True)
class Interaction:
    kind: InteractionKind
    participant_a: Participant
    participant_b: Participant
    negative_information: bool = False
    modification: Optional[Feature] = None  # adds/inhibits modification
    binding_site: Optional[str] = None  # binds
    from_location: Optional[str] = None  # translocates (GO location)
    to_location: Optional[str] = None


@dataclass(frozen=True)
class ModelRelation:
    relation: ModelRelationType
    model_element_id: Optional[str] = None


@dataclass(frozen=True)
class EvidenceSpan:
    text: str
    section: Optional[str] = None
    figure_ref: Optional[str] = None


@dataclass(frozen=True)
class IndexCard:
    paper_id: str
    source: str
    source_type: SourceType
    timestamp: str
    interaction: Interaction
    model_relation: ModelRelation
    evidence: tuple[EvidenceSpan, ...]
    rank: Optional[int] = None
    card_id: Optional[str] = None
    extra: tuple[tuple[str, Any], ...] = ()  # unknown top-level fields, preserved
    warnings: tuple[ValidationError, ...] = ()

    def with_id(self, card_id: str) -> "IndexCard":
        return replace(self, card_id=card_id)


class SubmissionCondition(str, Enum):
    MACHINE_ONLY = "MachineOnly"
    HUMAN_MACHINE = "HumanMachine"
    HUMAN_ONLY = "HumanOnly"


@dataclass
class Submission:
    team_id: str
    condition: SubmissionCondition
    cards_by_paper: dict[str, list[IndexCard]]

    @property
    def cards(self) -> list[IndexCard]:
        return [c for cards in self.cards_by_paper.values() for c in cards]


# ---------------------------------------------------------------------------
# Text normalization

_SUPERSCRIPT_MARKERS = re.compile(r"[\^{}]")
_WS = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Canonical form for participant surface-text comparison.

    Unicode NFC, casefold, superscript markers stripped ("p52^Shc" and
    "p52Shc" compare equal), whitespace collapsed.
    """
    s = unicodedata.normalize("NFC", text)
    s = _SUPERSCRIPT_MARKERS.sub("", s)
    s = _WS.sub(" ", s).strip()
    return s.casefold()


_POSITION_RE = re.compile(r"^([A-Za-z]?)(\d+)$")


def parse_position(raw) -> Union[Position, str]:
    """Parse "Y63" / "63" style sites; anything else stays an opaque string."""
    if isinstance(raw, int):
        return Position(site=raw) if raw > 0 else str(raw)
    s = str(raw).strip()
    m = _POSITION_RE.match(s)
    if not m:
        return s
    site = int(m.group(2))
    if site <= 0:
        return s
    return Position(site=site, residue=m.group(1).upper() or None)


# ---------------------------------------------------------------------------
# Parsing

_CARD_FIELDS = {
    "paper_id",
    "source",
    "source_type",
    "timestamp",
    "interaction",
    "model_relation",
    "evidence",
    "rank",
    "card_id",
}


class _Collector:
    def __init__(self):
        self.errors: list[ValidationError] = []
        self.warnings: list[ValidationError] = []

    def error(self, err: ValidationError):
        self.errors.append(err)

    def warn(self, code: ErrorCode, path: str, message: str, value=None):
        self.warnings.append(ValidationError(code, path, message, value, severity="warning"))


def _parse_enum(enum_cls, raw, path: str, col: _Collector, aliases=None):
    if raw is None:
        col.error(missing(path))
        return None
    if aliases and raw in aliases:
        return aliases[raw]
    try:
        return enum_cls(raw)
    except ValueError:
        col.error(bad_enum(path, raw, [e.value for e in enum_cls]))
        return None


def _parse_feature(doc, path: str, col: _Collector) -> Optional[Feature]:
    if not isinstance(doc, dict):
        col.error(ValidationError(ErrorCode.MALFORMED_DOCUMENT, path, "feature must be an object"))
        return None
    raw_positions = doc.get("positions")
    if raw_positions is None and doc.get("position") is not None:
        raw_positions = [doc["position"]]
    positions = []
    for i, raw in enumerate(raw_positions or []):
        # "63;68;200" style compound positions split here
        parts = str(raw).split(";") if isinstance(raw, str) and ";" in str(raw) else [raw]
        for part in parts:
            parsed = parse_position(part)
            if isinstance(parsed, str):
                col.warn(
                    ErrorCode.UNPARSED_POSITION,
                    f"{path}.positions[{i}]",
                    f"position {parsed!r} kept as opaque string",
                    value=parsed,
                )
            positions.append(parsed)
    return Feature(
        modification=doc.get("modification"),
        positions=tuple(positions),
        isoform=doc.get("isoform"),
        mutant=doc.get("mutant"),
    )


def _parse_entity(doc: dict, path: str, col: _Collector) -> Optional[EntityRef]:
    text = doc.get("entity_text")
    if not text:
        col.error(missing(f"{path}.entity_text"))
    entity_type = _parse_enum(EntityType, doc.get("entity_type"), f"{path}.entity_type", col)
    grounding = None
    raw_grounding = doc.get("grounding")
    if raw_grounding is not None:
        if not isinstance(raw_grounding, dict):
            col.error(
                ValidationError(
                    ErrorCode.MALFORMED_DOCUMENT, f"{path}.grounding", "grounding must be an object"
                )
            )
        else:
            ns = _parse_enum(
                Namespace, raw_grounding.get("namespace"), f"{path}.grounding.namespace", col
            )
            if ns is not None:
                grounding = Grounding(namespace=ns, identifier=str(raw_grounding.get("identifier", "")))
    features = []
    for i, raw in enumerate(doc.get("features") or []):
        feat = _parse_feature(raw, f"{path}.features[{i}]", col)
        if feat is not None:
            features.append(feat)
    if text is None or entity_type is None:
        return None
    entity = EntityRef(
        text=str(text),
        entity_type=entity_type,
        grounding=grounding,
        features=tuple(features),
        in_model=bool(doc.get("in_model", False)),
    )
    # Recordable violation, not a parse failure: proteins should carry
    # UniProt or HGNC ids.
    if (
        entity.entity_type is EntityType.PROTEIN
        and grounding is not None
        and grounding.namespace not in (Namespace.UNIPROT, Namespace.HGNC, Namespace.NONE)
    ):
        col.warn(
            ErrorCode.SUSPECT_GROUNDING,
            f"{path}.grounding.namespace",
            f"protein grounded to {grounding.namespace.value}, expected UniProt or HGNC",
            value=grounding.namespace.value,
        )
    return entity


def _parse_participant(doc, path: str, col: _Collector, depth: int = 0) -> Optional[Participant]:
    if doc is None:
        return BLANK
    if not isinstance(doc, dict):
        col.error(
            ValidationError(
                ErrorCode.MALFORMED_DOCUMENT, path, "participant must be an object or null"
            )
        )
        return None
    if "generic" in doc:
        label = doc["generic"]
        if not label:
            col.error(missing(f"{path}.generic"))
            return None
        return GenericParticipant(label=str(label))
    if "entities" in doc:
        members = []
        for i, raw in enumerate(doc["entities"]):
            if not isinstance(raw, dict):
                col.error(
                    ValidationError(
                        ErrorCode.MALFORMED_DOCUMENT,
                        f"{path}.entities[{i}]",
                        "complex member must be an entity object",
                    )
                )
                continue
            member = _parse_entity(raw, f"{path}.entities[{i}]", col)
            if member is not None:
                members.append(member)
        if len(members) < 2:
            col.error(
                ValidationError(
                    ErrorCode.INVARIANT, f"{path}.entities", "a complex needs at least two members"
                )
            )
            return None
        return ComplexParticipant(members=tuple(members))
    if "interaction" in doc:
        if depth >= 1:
            col.error(
                ValidationError(
                    ErrorCode.INVARIANT, path, "embedded interactions may nest at most one level"
                )
            )
            return None
        inner = _parse_interaction(doc["interaction"], f"{path}.interaction", col, depth=depth + 1)
        if inner is None:
            return None
        return EmbeddedInteraction(interaction=inner)
    return _parse_entity(doc, path, col)


def _parse_interaction(doc, path: str, col: _Collector, depth: int = 0) -> Optional[Interaction]:
    if not isinstance(doc, dict):
        col.error(
            ValidationError(ErrorCode.MALFORMED_DOCUMENT, path, "interaction must be an object")
        )
        return None
    kind = _parse_enum(
        InteractionKind, doc.get("interaction_type"), f"{path}.interaction_type", col,
        aliases=_KIND_ALIASES,
    )
    a = _parse_participant(doc.get("participant_a"), f"{path}.participant_a", col, depth=depth)
    b = _parse_participant(doc.get("participant_b"), f"{path}.participant_b", col, depth=depth)
    if isinstance(b, Blank):
        col.error(
            ValidationError(
                ErrorCode.INVARIANT, f"{path}.participant_b", "participant B is never blank"
            )
        )

    modification = None
    if doc.get("modification") is not None:
        modification = _parse_feature(doc["modification"], f"{path}.modification", col)

    if kind is InteractionKind.TRANSLOCATES:
        if doc.get("from_location") is None and doc.get("to_location") is None:
            col.error(
                ValidationError(
                    ErrorCode.INVARIANT,
                    f"{path}.from_location",
                    "translocation needs at least one of from_location/to_location",
                )
            )
    if kind is None or a is None or b is None or isinstance(b, Blank):
        return None
    return Interaction(
        kind=kind,
        participant_a=a,
        participant_b=b,
        negative_information=bool(doc.get("negative_information", False)),
        modification=modification,
        binding_site=doc.get("binding_site"),
        from_location=doc.get("from_location"),
        to_location=doc.get("to_location"),
    )


def validate_card_document(doc: Any) -> list[ValidationError]:
    """Validate a raw card document; returns the complete violation list."""
    result = _parse_card_inner(doc)
    return result if isinstance(result, list) else []


def _parse_card_inner(doc: Any) -> Union[IndexCard, list[ValidationError]]:
    if not isinstance(doc, dict):
        return [
            ValidationError(
                ErrorCode.MALFORMED_DOCUMENT, "$", "card document must be a JSON object"
            )
        ]
    col = _Collector()

    paper_id = doc.get("paper_id")
    if not paper_id:
        col.error(missing("paper_id"))
    source = doc.get("source")
    if not source:
        col.error(missing("source"))
    source_type = _parse_enum(SourceType, doc.get("source_type"), "source_type", col)
    timestamp = doc.get("timestamp")
    if timestamp is None:
        col.error(missing("timestamp"))

    interaction = _parse_interaction(doc.get("interaction"), "interaction", col)
    if doc.get("interaction") is None:
        col.error(missing("interaction"))

    relation = None
    raw_relation = doc.get("model_relation")
    if raw_relation is None:
        col.error(missing("model_relation"))
    elif not isinstance(raw_relation, dict):
        col.error(
            ValidationError(
                ErrorCode.MALFORMED_DOCUMENT, "model_relation", "model_relation must be an object"
            )
        )
    else:
        rel_type = _parse_enum(
            ModelRelationType, raw_relation.get("type"), "model_relation.type", col
        )
        element = raw_relation.get("model_element_id")
        if rel_type is ModelRelationType.EXTENSION and element is not None:
            col.error(
                ValidationError(
                    ErrorCode.INVARIANT,
                    "model_relation.model_element_id",
                    "an Extension has no model element by definition",
                )
            )
        if rel_type is not None:
            relation = ModelRelation(relation=rel_type, model_element_id=element)

    evidence: list[EvidenceSpan] = []
    raw_evidence = doc.get("evidence")
    if not raw_evidence:
        col.error(missing("evidence"))
    elif not isinstance(raw_evidence, list):
        col.error(
            ValidationError(ErrorCode.MALFORMED_DOCUMENT, "evidence", "evidence must be a list")
        )
    else:
        for i, raw in enumerate(raw_evidence):
            if isinstance(raw, str):
                raw = {"text": raw}
            if not isinstance(raw, dict):
                col.error(
                    ValidationError(
                        ErrorCode.MALFORMED_DOCUMENT,
                        f"evidence[{i}]",
                        "evidence entry must be an object or string",
                    )
                )
                continue
            text = raw.get("text")
            if not text:
                col.error(missing(f"evidence[{i}].text"))
                continue
            evidence.append(
                EvidenceSpan(
                    text=str(text), section=raw.get("section"), figure_ref=raw.get("figure_ref")
                )
            )

    rank = doc.get("rank")
    if rank is not None:
        if not isinstance(rank, int) or isinstance(rank, bool) or not (1 <= rank <= 10):
            col.error(bad_enum("rank", rank, ["1..10"]))
            rank = None

    extra = tuple(sorted((k, v) for k, v in doc.items() if k not in _CARD_FIELDS))

    if col.errors:
        return col.errors
    assert interaction is not None and relation is not None and source_type is not None
    return IndexCard(
        paper_id=str(paper_id),
        source=str(source),
        source_type=source_type,
        timestamp=str(timestamp),
        interaction=interaction,
        model_relation=relation,
        evidence=tuple(evidence),
        rank=rank,
        card_id=doc.get("card_id"),
        extra=extra,
        warnings=tuple(col.warnings),
    )


def parse_card(raw: Union[str, bytes, dict]) -> IndexCard:
    """Parse one card document (JSON text or already-decoded object).

    Raises CardValidationError carrying the complete list of violations.
    """
    if isinstance(raw, (str, bytes)):
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CardValidationError(
                [ValidationError(ErrorCode.MALFORMED_DOCUMENT, "$", f"not valid JSON: {exc}")]
            ) from exc
    else:
        doc = raw
    result = _parse_card_inner(doc)
    if isinstance(result, list):
        raise CardValidationError(result)
    return result


# ---------------------------------------------------------------------------
# Serialization (round-trips with parse_card)


def _feature_to_dict(feat: Feature) -> dict:
    return {
        "modification": feat.modification,
        "positions": [str(p) for p in feat.positions],
        "isoform": feat.isoform,
        "mutant": feat.mutant,
    }


def _entity_to_dict(entity: EntityRef) -> dict:
    doc: dict[str, Any] = {
        "entity_text": entity.text,
        "entity_type": entity.entity_type.value,
        "in_model": entity.in_model,
    }
    if entity.grounding is not None:
        doc["grounding"] = {
            "namespace": entity.grounding.namespace.value,
            "identifier": entity.grounding.identifier,
        }
    if entity.features:
        doc["features"] = [_feature_to_dict(f) for f in entity.features]
    return doc


def participant_to_dict(p: Participant) -> Optional[dict]:
    if isinstance(p, Blank):
        return None
    if isinstance(p, GenericParticipant):
        return {"generic": p.label}
    if isinstance(p, ComplexParticipant):
        return {"entities": [_entity_to_dict(m) for m in p.members]}
    if isinstance(p, EmbeddedInteraction):
        return {"interaction": interaction_to_dict(p.interaction)}
    return _entity_to_dict(p)


def interaction_to_dict(interaction: Interaction) -> dict:
    doc: dict[str, Any] = {
        "interaction_type": interaction.kind.value,
        "participant_a": participant_to_dict(interaction.participant_a),
        "participant_b": participant_to_dict(interaction.participant_b),
        "negative_information": interaction.negative_information,
    }
    if interaction.modification is not None:
        doc["modification"] = _feature_to_dict(interaction.modification)
    if interaction.binding_site is not None:
        doc["binding_site"] = interaction.binding_site
    if interaction.from_location is not None:
        doc["from_location"] = interaction.from_location
    if interaction.to_location is not None:
        doc["to_location"] = interaction.to_location
    return doc


def card_to_dict(card: IndexCard) -> dict:
    doc: dict[str, Any] = {
        "paper_id": card.paper_id,
        "source": card.source,
        "source_type": card.source_type.value,
        "timestamp": card.timestamp,
        "model_relation": {"type": card.model_relation.relation.value},
        "interaction": interaction_to_dict(card.interaction),
        "evidence": [
            {"text": ev.text, "section": ev.section, "figure_ref": ev.figure_ref}
            for ev in card.evidence
        ],
    }
    if card.model_relation.model_element_id is not None:
        doc["model_relation"]["model_element_id"] = card.model_relation.model_element_id
    if card.rank is not None:
        doc["rank"] = card.rank
    if card.card_id is not None:
        doc["card_id"] = card.card_id
    for key, value in card.extra:
        doc[key] = value
    return doc


# ---------------------------------------------------------------------------
# Canonical signatures (dedup keys)


def is_modified_form(interaction: Interaction) -> bool:
    """True for increases/decreases-amount of a modified form of B.

    "A increases phosphorylated ERK" is encoded as increases_amount with a
    phosphorylation feature on participant B; that shape belongs to the
    modification family, not the plain amount family.
    """
    if interaction.kind not in AMOUNT_KINDS:
        return False
    b = interaction.participant_b
    entities: tuple[EntityRef, ...]
    if isinstance(b, EntityRef):
        entities = (b,)
    elif isinstance(b, ComplexParticipant):
        entities = b.members
    else:
        return False
    return any(f.modification for e in entities for f in e.features)


def signature_modification(interaction: Interaction) -> str:
    """Modification type that distinguishes interactions within a family."""
    if interaction.kind in MODIFICATION_KINDS and interaction.modification is not None:
        return (interaction.modification.modification or "").casefold()
    if is_modified_form(interaction):
        b = interaction.participant_b
        entities = (b,) if isinstance(b, EntityRef) else b.members
        for e in entities:
            for f in e.features:
                if f.modification:
                    return f.modification.casefold()
    return ""


def participant_key(p: Participant):
    if isinstance(p, Blank):
        return ("blank",)
    if isinstance(p, EntityRef):
        return ("entity", normalize_text(p.text))
    if isinstance(p, GenericParticipant):
        return ("generic", normalize_text(p.label))
    if isinstance(p, ComplexParticipant):
        return ("complex", tuple(sorted(normalize_text(m.text) for m in p.members)))
    if isinstance(p, EmbeddedInteraction):
        return ("embedded", interaction_signature(p.interaction))
    raise TypeError(f"unknown participant: {p!r}")


def interaction_signature(interaction: Interaction, table: EquivalenceTable = DEFAULT_TABLE):
    """Canonical key over (family, participants, modification type).

    Participant order is ignored exactly for the symmetric families (binds,
    translocates); evidence never enters the key, so two cards asserting
    the same interaction from different sentences collide.
    """
    family = table.family_of(interaction.kind.value, is_modified_form(interaction))
    key_a = participant_key(interaction.participant_a)
    key_b = participant_key(interaction.participant_b)
    pair = tuple(sorted((key_a, key_b))) if family.symmetric else (key_a, key_b)
    return (family.name, pair, signature_modification(interaction))


def card_signature(card: IndexCard, table: EquivalenceTable = DEFAULT_TABLE):
    """Dedup key for a card; equal keys mean "the same interaction"."""
    return interaction_signature(card.interaction, table)


# ---------------------------------------------------------------------------
# Submission loading


def load_submission(
    path: str | Path,
    team_id: Optional[str] = None,
    condition: Optional[SubmissionCondition] = None,
) -> Submission:
    """Load a submission directory tree ``team/paper_id/*.card.json``.

    Optional ``submission.json`` metadata at the root supplies team_id and
    condition; card ids are derived from file paths. Any card that fails
    validation aborts the load with CardValidationError listing every
    violation across all files.
    """
    root = Path(path)
    meta = {}
    meta_path = root / "submission.json"
    if meta_path.exists():
        meta = json.loads(meta_path.read_text("utf-8"))
    team = team_id or meta.get("team_id") or root.name
    cond = condition or SubmissionCondition(meta.get("condition", "MachineOnly"))

    all_errors: list[ValidationError] = []
    cards_by_paper: dict[str, list[IndexCard]] = {}
    for card_path in sorted(root.glob("*/*.card.json")):
        paper_dir = card_path.parent.name
        try:
            card = parse_card(card_path.read_text("utf-8"))
        except CardValidationError as exc:
            all_errors.extend(
                replace(e, path=f"{card_path.relative_to(root)}:{e.path}") for e in exc.errors
            )
            continue
        card = card.with_id(f"{team}/{paper_dir}/{card_path.name.removesuffix('.card.json')}")
        if card.paper_id != paper_dir:
            all_errors.append(
                ValidationError(
                    ErrorCode.INVARIANT,
                    str(card_path.relative_to(root)),
                    f"card paper_id {card.paper_id!r} does not match directory {paper_dir!r}",
                )
            )
            continue
        cards_by_paper.setdefault(paper_dir, []).append(card)

    # Per (paper, rank) at most one card when ranks are used.
    for paper, cards in cards_by_paper.items():
        seen: dict[int, str] = {}
        for card in cards:
            if card.rank is None:
                continue
            if card.rank in seen:
                all_errors.append(
                    ValidationError(
                        ErrorCode.INVARIANT,
                        f"{paper}",
                        f"rank {card.rank} used by both {seen[card.rank]} and {card.card_id}",
                    )
                )
            else:
                seen[card.rank] = card.card_id or "?"

    if all_errors:
        raise CardValidationError(all_errors)
    return Submission(team_id=team, condition=cond, cards_by_paper=cards_by_paper)


def write_card(card: IndexCard, path: str | Path) -> None:
    Path(path).write_text(json.dumps(card_to_dict(card), indent=2, sort_keys=True), "utf-8")
