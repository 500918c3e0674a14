"""Consensus reference sets and the overlap measure.

Three curators independently list a paper's major findings; interactions
found by at least two make the reference set. Composite findings ("A when
bound to B phosphorylates C") also contribute their embedded direct
interactions as separate entries. Overlap then measures how many
reference interactions a submission's largely-correct top-ranked cards
match.

Run:  python3 demos/03_reference_sets.py
"""

from mecheval import reference_overlap
from mecheval.cards import (
    ComplexParticipant,
    EntityRef,
    EntityType,
    EvidenceSpan,
    Feature,
    IndexCard,
    Interaction,
    InteractionKind,
    ModelRelation,
    ModelRelationType,
    SourceType,
)
from mecheval.judgments import Judgment, LARGELY_CORRECT
from mecheval.refset import CuratorEntry, ReferenceCategory, expand_all, merge_consensus, refset_table


def entity(text):
    return EntityRef(text=text, entity_type=EntityType.PROTEIN)


def interaction(a, kind, b, modification=None):
    return Interaction(kind=kind, participant_a=a, participant_b=b, modification=modification)


phospho = Feature(modification="phosphorylation")

grb7_ephb1 = interaction(entity("Grb7"), InteractionKind.BINDS, entity("EphB1"))
composite = interaction(  # A when bound to B phosphorylates C
    ComplexParticipant(members=(entity("RAF"), entity("14-3-3"))),
    InteractionKind.ADDS_MODIFICATION,
    entity("MEK1"),
    modification=phospho,
)

entry = lambda i, cat: CuratorEntry(paper_id="PMC0000001", interaction=i, category=cat)
curator_sets = {
    "mp": [
        entry(grb7_ephb1, ReferenceCategory.DIRECT_PHOSPHO_BIND),
        entry(composite, ReferenceCategory.COMPLEX_COMPOSITE),
    ],
    "tk": [
        entry(interaction(entity("EphB1"), InteractionKind.BINDS, entity("Grb7")),
              ReferenceCategory.DIRECT_PHOSPHO_BIND),  # same finding, swapped
        entry(composite, ReferenceCategory.COMPLEX_COMPOSITE),
    ],
    "cg": [
        entry(interaction(entity("LoneWolf"), InteractionKind.BINDS, entity("Nobody")),
              ReferenceCategory.DIRECT_PHOSPHO_BIND),  # found once: excluded
    ],
}

refs = merge_consensus(curator_sets)
print(f"consensus kept {len(refs)} of 3 distinct curated interactions")

expanded = expand_all(refs)
print("\nafter embedded-component expansion:")
for row in refset_table(expanded):
    print(" ", " | ".join(row))

# Score a one-card submission against it.
submission_card = IndexCard(
    paper_id="PMC0000001",
    source="demo",
    source_type=SourceType.MACHINE,
    timestamp="2016-01-01T00:00:00Z",
    interaction=grb7_ephb1,
    model_relation=ModelRelation(ModelRelationType.EXTENSION),
    evidence=(EvidenceSpan(text="Grb7 bound EphB1 in pulldown assays."),),
    rank=1,
    card_id="team/PMC0000001/c1",
)
judgments = {"team/PMC0000001/c1": Judgment(card_id="team/PMC0000001/c1", verdict=LARGELY_CORRECT, revision=1)}
overlap = reference_overlap(expanded, {"PMC0000001": [submission_card]}, judgments)
print("\noverlap by category:")
for bucket, o in sorted(overlap.items()):
    print(f"  {bucket}: {o.matches}/{o.reference_total} = {o.percent}%")
