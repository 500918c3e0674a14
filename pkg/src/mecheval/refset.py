"""Consensus reference sets of a paper's major mechanistic findings.

Multiple curators independently list the interactions they consider the
paper's salient findings; only interactions found by at least two curators
(full-match semantics, grounding ignored - humans ground poorly) enter the
reference set. Complex and indirect entries additionally contribute their
embedded component interactions as separate reference entries.

Saliency ("mentioned in at least three passages") is curator-supplied
metadata on the input entries, never computed here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .cards import (
    BLANK,
    ComplexParticipant,
    EmbeddedInteraction,
    EntityRef,
    Interaction,
    InteractionKind,
    interaction_signature,
    interaction_to_dict,
)
from .cards import _parse_interaction, _Collector  # shared wire format
from .errors import CardValidationError, TooFewCuratorsError
from .families import DEFAULT_TABLE, EquivalenceTable


class ReferenceCategory(str, Enum):
    DIRECT_PHOSPHO_BIND = "direct_phospho_bind"
    OTHER_DIRECT = "other_direct"
    INDIRECT = "indirect"
    COMPLEX_COMPOSITE = "complex_composite"


def category_bucket(category: ReferenceCategory) -> str:
    """Reporting bucket: direct phospho/bind vs indirect-plus-composite."""
    if category is ReferenceCategory.DIRECT_PHOSPHO_BIND:
        return "direct_phospho_bind"
    if category is ReferenceCategory.OTHER_DIRECT:
        return "other_direct"
    return "indirect_complex"


@dataclass(frozen=True)
class ReferenceInteraction:
    ref_id: str
    paper_id: str
    interaction: Interaction
    category: ReferenceCategory
    found_by: frozenset[str] = frozenset()
    components: tuple[str, ...] = ()  # ref_ids of embedded component entries


@dataclass(frozen=True)
class CuratorEntry:
    """One interaction as listed by one curator."""

    paper_id: str
    interaction: Interaction
    category: ReferenceCategory
    salient: bool = True  # curator attests the >=3-passages criterion


def _representative(
    entries: Sequence[CuratorEntry],
) -> tuple[Interaction, ReferenceCategory]:
    """Deterministic representative for a cluster of equivalent entries.

    Independent of curator-set order: pick the interaction whose wire
    serialization sorts first, and the most common category (ties sort).
    """
    best = min(entries, key=lambda e: json.dumps(interaction_to_dict(e.interaction), sort_keys=True))
    category_votes: dict[ReferenceCategory, int] = {}
    for e in entries:
        category_votes[e.category] = category_votes.get(e.category, 0) + 1
    category = min(category_votes, key=lambda c: (-category_votes[c], c.value))
    return best.interaction, category


def merge_consensus(
    curator_sets: dict[str, Sequence[CuratorEntry]],
    min_agreement: int = 2,
    table: EquivalenceTable = DEFAULT_TABLE,
) -> list[ReferenceInteraction]:
    """Build the consensus reference set from per-curator interaction lists.

    An interaction is included when curators from at least ``min_agreement``
    distinct sets listed an equivalent interaction (same family, same
    participants up to the symmetric swap, same modification). Output order
    is deterministic: by paper, then canonical key.
    """
    if len(curator_sets) < 2:
        raise TooFewCuratorsError(f"need >=2 curator sets, got {len(curator_sets)}")

    clusters: dict[tuple, list[tuple[str, CuratorEntry]]] = {}
    for curator_id in sorted(curator_sets):
        for entry in curator_sets[curator_id]:
            if not entry.salient:
                continue
            key = (entry.paper_id, interaction_signature(entry.interaction, table))
            clusters.setdefault(key, []).append((curator_id, entry))

    refs: list[ReferenceInteraction] = []
    for key in sorted(clusters, key=lambda k: (k[0], repr(k[1]))):
        members = clusters[key]
        found_by = frozenset(curator_id for curator_id, _ in members)
        if len(found_by) < min_agreement:
            continue
        interaction, category = _representative([e for _, e in members])
        refs.append(
            ReferenceInteraction(
                ref_id="",  # assigned below, after ordering is fixed
                paper_id=key[0],
                interaction=interaction,
                category=category,
                found_by=found_by,
            )
        )
    return [replace(ref, ref_id=f"{ref.paper_id}-ref{i + 1}") for i, ref in enumerate(refs)]


# ---------------------------------------------------------------------------
# Embedded-component expansion

_PHOSPHO_BIND = frozenset(
    {InteractionKind.BINDS, InteractionKind.ADDS_MODIFICATION, InteractionKind.INHIBITS_MODIFICATION}
)


def _component_category(interaction: Interaction) -> ReferenceCategory:
    if interaction.kind in _PHOSPHO_BIND:
        return ReferenceCategory.DIRECT_PHOSPHO_BIND
    return ReferenceCategory.OTHER_DIRECT


def _component_interactions(interaction: Interaction) -> list[Interaction]:
    """Direct interactions embedded in a composite one.

    "A increases [B phosphorylates C]" contributes "B phosphorylates C".
    "A-when-bound-to-B phosphorylates C" (a complex participant)
    contributes "A binds B" and "A phosphorylates C", the lead complex
    member standing in as the actor.
    """
    components: list[Interaction] = []
    for participant in (interaction.participant_a, interaction.participant_b):
        if isinstance(participant, EmbeddedInteraction):
            components.append(participant.interaction)
    a = interaction.participant_a
    if isinstance(a, ComplexParticipant):
        lead, *rest = a.members
        for member in rest:
            components.append(
                Interaction(kind=InteractionKind.BINDS, participant_a=lead, participant_b=member)
            )
        components.append(replace(interaction, participant_a=lead))
    return components


def expand_embedded(
    ref: ReferenceInteraction, table: EquivalenceTable = DEFAULT_TABLE
) -> list[ReferenceInteraction]:
    """A composite reference entry plus its embedded direct components.

    Direct entries pass through unchanged. Component entries get derived
    ids and the composite records them in ``components``.
    """
    inner = _component_interactions(ref.interaction)
    if not inner:
        return [ref]
    seen = {interaction_signature(ref.interaction, table)}
    components: list[ReferenceInteraction] = []
    for i, interaction in enumerate(inner):
        sig = interaction_signature(interaction, table)
        if sig in seen:
            continue
        seen.add(sig)
        components.append(
            ReferenceInteraction(
                ref_id=f"{ref.ref_id}.c{i + 1}",
                paper_id=ref.paper_id,
                interaction=interaction,
                category=_component_category(interaction),
                found_by=ref.found_by,
            )
        )
    composite = replace(ref, components=tuple(c.ref_id for c in components))
    return [composite] + components


def expand_all(
    refs: Iterable[ReferenceInteraction], table: EquivalenceTable = DEFAULT_TABLE
) -> list[ReferenceInteraction]:
    """Expand every entry, dropping components that duplicate existing entries."""
    out: list[ReferenceInteraction] = []
    seen: set = set()
    for ref in refs:
        for entry in expand_embedded(ref, table):
            key = (entry.paper_id, interaction_signature(entry.interaction, table))
            if key in seen:
                continue
            seen.add(key)
            out.append(entry)
    return out


# ---------------------------------------------------------------------------
# File format


def reference_to_dict(ref: ReferenceInteraction) -> dict:
    return {
        "ref_id": ref.ref_id,
        "paper_id": ref.paper_id,
        "category": ref.category.value,
        "found_by": sorted(ref.found_by),
        "components": list(ref.components),
        "interaction": interaction_to_dict(ref.interaction),
    }


def reference_from_dict(doc: dict) -> ReferenceInteraction:
    col = _Collector()
    interaction = _parse_interaction(doc.get("interaction"), "interaction", col)
    if col.errors or interaction is None:
        raise CardValidationError(col.errors)
    return ReferenceInteraction(
        ref_id=str(doc["ref_id"]),
        paper_id=str(doc["paper_id"]),
        interaction=interaction,
        category=ReferenceCategory(doc["category"]),
        found_by=frozenset(doc.get("found_by", [])),
        components=tuple(doc.get("components", [])),
    )


def load_refset(path: str | Path) -> list[ReferenceInteraction]:
    doc = json.loads(Path(path).read_text("utf-8"))
    return [reference_from_dict(entry) for entry in doc["interactions"]]


def write_refset(refs: Sequence[ReferenceInteraction], path: str | Path) -> None:
    doc = {"interactions": [reference_to_dict(r) for r in refs]}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True), "utf-8")


def found_by_all_fraction(refs: Sequence[ReferenceInteraction], n_curators: int) -> Fraction:
    """Share of entries found independently by every curator (reported, not asserted)."""
    if not refs:
        return Fraction(0)
    unanimous = sum(1 for r in refs if len(r.found_by) == n_curators)
    return Fraction(unanimous, len(refs))


def refset_table(refs: Sequence[ReferenceInteraction]) -> list[list[str]]:
    """Plain tabular export (one interaction per row)."""
    from .matching import _entity_texts

    rows = [["ref_id", "paper_id", "category", "participant_a", "interaction", "participant_b", "found_by"]]
    for ref in refs:
        i = ref.interaction
        rows.append(
            [
                ref.ref_id,
                ref.paper_id,
                ref.category.value,
                "/".join(sorted(_entity_texts(i.participant_a))) or "(blank)",
                i.kind.value,
                "/".join(sorted(_entity_texts(i.participant_b))),
                ",".join(sorted(ref.found_by)),
            ]
        )
    return rows
