"""Matching candidates against gold cards and scoring the verdicts.

A candidate fully matches a gold interaction when the interaction family
and both participants line up (sides may swap for binding); leaving
participant A blank gives a partial match. Near-equivalent types within a
family match with an interaction-type error flag. Human evidence
assessments then drive the verdict rubric, and precision / throughput
fall out of the verdict tallies.

Run:  python3 demos/02_matching_and_scoring.py
"""

from fractions import Fraction

from mecheval import (
    Dialect,
    FieldAssessment,
    apply_rubric,
    cards_per_day,
    match_cards,
    precision,
)
from mecheval.cards import (
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


def entity(text, features=()):
    return EntityRef(text=text, entity_type=EntityType.PROTEIN, features=tuple(features))


def make_card(card_id, a, kind, b, modification=None):
    return IndexCard(
        paper_id="PMC0000001",
        source="demo",
        source_type=SourceType.MACHINE,
        timestamp="2016-01-01T00:00:00Z",
        interaction=Interaction(
            kind=kind, participant_a=a, participant_b=b, modification=modification
        ),
        model_relation=ModelRelation(ModelRelationType.EXTENSION),
        evidence=(EvidenceSpan(text="demo evidence"),),
        card_id=card_id,
    )


phospho = Feature(modification="phosphorylation")

# Gold: "ligand-stimulated EphB1 induces tyrosine phosphorylation of p52Shc"
# captured as EphB1 increasing the phosphorylated form of p52Shc.
gold = make_card(
    "gold",
    entity("EphB1"),
    InteractionKind.INCREASES_AMOUNT,
    entity("p52^Shc", features=[phospho]),
)

# A reader that asserted direct phosphorylation still matches, with an
# interaction-type error recorded for the detailed scoring.
direct = make_card(
    "sys-1", entity("EphB1"), InteractionKind.ADDS_MODIFICATION, entity("p52Shc"), modification=phospho
)
record = match_cards(direct, gold)
print("direct-phosphorylation card vs increases-phospho-form gold:")
print("  class:", record.match_class.value, "| flags:", sorted(f.value for f in record.field_flags))

# Verdicts come from human evidence assessments; grounding never changes them.
assessment = FieldAssessment(
    evidence_is_results=True,
    participants_consistent=True,
    interaction_consistent=True,
    negative_flag_consistent=True,
    grounding_correct_b=False,
)
judgment = apply_rubric(direct, assessment, Dialect.PHASE_I)
print("\nrubric verdict:", judgment.verdict.kind.value,
      "| flags:", sorted(f.value for f in judgment.field_flags))

# Precision over a verdict multiset, and the throughput estimate.
verdicts = [judgment.verdict] * 19
from mecheval.judgments import INCORRECT, SkipReason, skipped

verdicts += [INCORRECT] * 13 + [skipped(SkipReason.BACKGROUND_OR_METHODS)] * 6
p = precision(verdicts)
rate = cards_per_day(verdicts, total_submitted=1400, days=7)
print(f"\nprecision over 19/13/6 sample: {p} = {float(p):.3f}")
print(f"estimated correct cards per day (1400 submitted, 7 days): {rate} = {float(rate):.1f}")
assert p == Fraction(19, 32)
