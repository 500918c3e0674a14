"""Index cards: parsing, validation, canonical signatures, dedup.

An index card is one extracted molecular interaction in a standardized
JSON shape. This walkthrough parses a well-formed card, shows how a bad
one fails with the complete violation list, and demonstrates why two
cards describing the same interaction collide on their canonical key.

Run:  python3 demos/01_cards_and_validation.py
"""

import json

from mecheval import CardValidationError, card_signature, parse_card
from mecheval.matching import dedup_submission

GOOD_CARD = {
    "paper_id": "PMC3902907",
    "source": "demo-reader",
    "source_type": "Machine",
    "timestamp": "2016-04-11T09:00:00Z",
    "model_relation": {"type": "Corroboration", "model_element_id": "rxn-17"},
    "interaction": {
        "interaction_type": "adds_modification",
        "participant_a": {
            "entity_text": "JAK3",
            "entity_type": "Protein",
            "grounding": {"namespace": "UniProt", "identifier": "JAK3_HUMAN"},
            "in_model": True,
        },
        "participant_b": {
            "entity_text": "HuR",
            "entity_type": "Protein",
            "grounding": {"namespace": "UniProt", "identifier": "ELAV1_HUMAN"},
            "in_model": True,
        },
        "negative_information": False,
        "modification": {"modification": "phosphorylation", "positions": ["Y63", "Y68", "Y200"]},
    },
    "evidence": [
        {
            "text": "As identified by mass spec analysis, JAK3 phosphorylates three HuR residues (Y63, Y68, Y200).",
            "section": "Results",
        }
    ],
}

card = parse_card(GOOD_CARD)
print("parsed:", card.interaction.participant_a.text, "-[phosphorylates]->",
      card.interaction.participant_b.text)
print("sites:", [str(p) for p in card.interaction.modification.positions])

# Validation collects every problem, not just the first.
bad = json.loads(json.dumps(GOOD_CARD))
bad["evidence"] = []
bad["rank"] = 99
bad["source_type"] = "Robot"
try:
    parse_card(bad)
except CardValidationError as exc:
    print(f"\nbad card rejected with {len(exc.errors)} violations:")
    for err in exc.errors:
        print("  -", err)

# Binding is symmetric, so swapped participants share a signature; the
# evidence sentence never enters the key.
swapped = json.loads(json.dumps(GOOD_CARD))
swapped["interaction"]["interaction_type"] = "binds"
swapped["interaction"].pop("modification")
original = json.loads(json.dumps(swapped))
swapped["interaction"]["participant_a"], swapped["interaction"]["participant_b"] = (
    swapped["interaction"]["participant_b"],
    swapped["interaction"]["participant_a"],
)
a, b = parse_card(original), parse_card(swapped)
print("\nbinds(JAK3, HuR) signature == binds(HuR, JAK3) signature:",
      card_signature(a) == card_signature(b))

unique, duplicates = dedup_submission([a.with_id("c1"), b.with_id("c2")])
print("dedup keeps", [c.card_id for c in unique], "- duplicate:", [c.card_id for c in duplicates])
