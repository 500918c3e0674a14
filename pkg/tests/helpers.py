"""Shared builders for test fixtures."""

from __future__ import annotations

from typing import Optional

from mecheval.cards import (
    BLANK,
    ComplexParticipant,
    EntityRef,
    EntityType,
    EvidenceSpan,
    Feature,
    GenericParticipant,
    Grounding,
    IndexCard,
    Interaction,
    InteractionKind,
    ModelRelation,
    ModelRelationType,
    Namespace,
    Participant,
    SourceType,
    card_signature,
)

_COUNTER = {"n": 0}


def entity(
    text: str,
    entity_type: EntityType = EntityType.PROTEIN,
    uniprot: Optional[str] = None,
    features: tuple[Feature, ...] = (),
    in_model: bool = False,
) -> EntityRef:
    grounding = Grounding(Namespace.UNIPROT, uniprot) if uniprot else None
    return EntityRef(
        text=text,
        entity_type=entity_type,
        grounding=grounding,
        features=features,
        in_model=in_model,
    )


PHOSPHO = Feature(modification="phosphorylation")


def phospho_form(text: str, **kwargs) -> EntityRef:
    return entity(text, features=(PHOSPHO,), **kwargs)


def participant(spec) -> Participant:
    if spec is None:
        return BLANK
    if isinstance(spec, str):
        return entity(spec)
    if isinstance(spec, (list, tuple)):
        return ComplexParticipant(members=tuple(entity(s) if isinstance(s, str) else s for s in spec))
    return spec


def interaction(
    a,
    kind: InteractionKind,
    b,
    negative: bool = False,
    modification: Optional[Feature] = None,
    **kwargs,
) -> Interaction:
    if kind in (InteractionKind.ADDS_MODIFICATION, InteractionKind.INHIBITS_MODIFICATION):
        modification = modification or PHOSPHO
    return Interaction(
        kind=kind,
        participant_a=participant(a),
        participant_b=participant(b),
        negative_information=negative,
        modification=modification,
        **kwargs,
    )


def card(
    a,
    kind: InteractionKind,
    b,
    paper_id: str = "PMC0000001",
    evidence_text: str = "X regulates Y in our assays.",
    rank: Optional[int] = None,
    card_id: Optional[str] = None,
    source: str = "test-system",
    source_type: SourceType = SourceType.MACHINE,
    negative: bool = False,
    modification: Optional[Feature] = None,
    **interaction_kwargs,
) -> IndexCard:
    _COUNTER["n"] += 1
    return IndexCard(
        paper_id=paper_id,
        source=source,
        source_type=source_type,
        timestamp="2016-01-01T00:00:00Z",
        interaction=interaction(a, kind, b, negative=negative, modification=modification, **interaction_kwargs),
        model_relation=ModelRelation(ModelRelationType.EXTENSION),
        evidence=(EvidenceSpan(text=evidence_text, section="Results"),),
        rank=rank,
        card_id=card_id or f"card-{_COUNTER['n']:04d}",
    )


def binds(a, b, **kwargs) -> IndexCard:
    return card(a, InteractionKind.BINDS, b, **kwargs)


def phosphorylates(a, b, **kwargs) -> IndexCard:
    return card(a, InteractionKind.ADDS_MODIFICATION, b, **kwargs)


def overlap_fixture(root, n_direct=29, n_indirect=21, n_matched=22, team_id="team-2"):
    """Reference set + submission where the team matches ``n_matched`` of the
    direct interactions and none of the indirect/composite ones.

    Returns (submission_dir, refset_path, assessments_path): assessments
    mark every matching card largely correct and accept every match.
    """
    import json as _json

    from mecheval.cards import EmbeddedInteraction
    from mecheval.refset import ReferenceCategory, ReferenceInteraction, write_refset

    papers = [f"PMC90000{i:02d}" for i in range(10)]
    refs = []
    for i in range(n_direct):
        kind = InteractionKind.BINDS if i % 2 else InteractionKind.ADDS_MODIFICATION
        refs.append(
            ReferenceInteraction(
                ref_id=f"d{i:02d}",
                paper_id=papers[i % len(papers)],
                interaction=interaction(f"DA{i}", kind, f"DB{i}"),
                category=ReferenceCategory.DIRECT_PHOSPHO_BIND,
                found_by=frozenset({"mp", "tk"}),
            )
        )
    for i in range(n_indirect):
        embedded = EmbeddedInteraction(
            interaction(f"IB{i}", InteractionKind.ADDS_MODIFICATION, f"IC{i}")
        )
        refs.append(
            ReferenceInteraction(
                ref_id=f"x{i:02d}",
                paper_id=papers[i % len(papers)],
                interaction=interaction(f"IA{i}", InteractionKind.INCREASES_AMOUNT, embedded),
                category=(
                    ReferenceCategory.INDIRECT if i % 2 else ReferenceCategory.COMPLEX_COMPOSITE
                ),
                found_by=frozenset({"mp", "cg"}),
            )
        )
    refset_path = root / "refset.json"
    write_refset(refs, refset_path)

    cards_by_paper = {p: [] for p in papers}
    for ref in [r for r in refs if r.ref_id.startswith("d")][:n_matched]:
        paper_cards = cards_by_paper[ref.paper_id]
        paper_cards.append(
            card(
                ref.interaction.participant_a,
                ref.interaction.kind,
                ref.interaction.participant_b,
                paper_id=ref.paper_id,
                rank=len(paper_cards) + 1,
            )
        )
    sub_dir = write_submission(root, team_id, cards_by_paper)

    lines = []
    for paper_id, paper_cards in sorted(cards_by_paper.items()):
        for i, c in enumerate(paper_cards):
            card_id = f"{team_id}/{paper_id}/c{i:03d}"
            lines.append(
                {
                    "type": "card",
                    "card_id": card_id,
                    "evidence_is_results": True,
                    "participants_consistent": True,
                    "interaction_consistent": True,
                    "negative_flag_consistent": True,
                }
            )
    for ref in refs:
        for paper_id, paper_cards in cards_by_paper.items():
            if paper_id != ref.paper_id:
                continue
            for i, c in enumerate(paper_cards):
                if card_signature(c) == interaction_signature_of(ref.interaction):
                    lines.append(
                        {
                            "type": "match",
                            "gold_id": ref.ref_id,
                            "candidate_card_id": f"{team_id}/{paper_id}/c{i:03d}",
                            "accept": True,
                        }
                    )
    assessments_path = root / "assessments.jsonl"
    assessments_path.write_text("\n".join(_json.dumps(line) for line in lines) + "\n", "utf-8")
    return sub_dir, refset_path, assessments_path


def interaction_signature_of(i):
    from mecheval.cards import interaction_signature

    return interaction_signature(i)


def write_submission(root, team_id, cards_by_paper, condition="MachineOnly"):
    """Write a submission directory tree team/paper_id/*.card.json."""
    import json as _json

    from mecheval.cards import card_to_dict

    team_dir = root / team_id
    team_dir.mkdir(parents=True, exist_ok=True)
    (team_dir / "submission.json").write_text(
        _json.dumps({"team_id": team_id, "condition": condition}), "utf-8"
    )
    for paper_id, paper_cards in cards_by_paper.items():
        paper_dir = team_dir / paper_id
        paper_dir.mkdir(exist_ok=True)
        for i, c in enumerate(paper_cards):
            doc = card_to_dict(c)
            doc.pop("card_id", None)  # ids come from file paths on load
            doc["paper_id"] = paper_id
            (paper_dir / f"c{i:03d}.card.json").write_text(_json.dumps(doc), "utf-8")
    return team_dir


# ---------------------------------------------------------------------------
# Perturbation-response observation fixtures
#
# The 20 single-drug RPPA observations used for explanation checking:
# (obs_id, treatment, drug target, antibody, fold change). Fold > 1 is an
# abundance increase, fold < 1 a decrease.

RPPA_ROWS = [
    ("1", "901 3", "MEK1/2", "MAPK_pT202", 0.468),
    ("2", "AK 10", "AKT", "AKT_pS473_V", 0.140),
    ("3", "AK 10", "AKT", "AKT_pT308_V", 0.241),
    ("4", "AK 5", "AKT", "GSK3a_b_pS21", 0.440),
    ("5", "AK 10", "AKT", "S6_pS235_V", 0.274),
    ("6", "AK 10", "AKT", "S6_pS240_V", 0.418),
    ("7", "RO 7", "PKC", "GSK3a_b_pS21", 1.586),
    ("8", "RO 7", "PKC", "S6_pS235_V", 0.301),
    ("9", "RO 7", "PKC", "S6_pS240_V", 0.468),
    ("12", "SR 2.4", "SRC", "4EBP1_pT37_V", 0.442),
    ("13", "SR 4.8", "SRC", "CHK2_pT68", 1.749),
    ("14", "Tm 0.6", "mTOR", "AKT_pS473_V", 3.187),
    ("15", "Tm 0.6", "mTOR", "AKT_pT308_V", 2.187),
    ("16", "Tm 0.6", "mTOR", "p70S6K_pT389_V", 0.331),
    ("17", "Tm 0.6", "mTOR", "S6_pS235_V", 0.058),
    ("18", "Tm 0.6", "mTOR", "S6_pS240_V", 0.050),
    ("19", "ZS 1.2", "PI3K", "AKT_pS473_V", 0.204),
    ("20", "ZS 1.2", "PI3K", "p70S6K_pT389_V", 0.495),
    ("21", "ZS 1.2", "PI3K", "S6_pS235_V", 0.273),
    ("22", "ZS 1.2", "PI3K", "S6_pS240_V", 0.442),
]

RPPA_EXPECTED_SIGNS = {row[0]: (+1 if row[4] > 1 else -1) for row in RPPA_ROWS}


def _readout_entity(antibody: str) -> str:
    return antibody.split("_")[0]


def observation_row(obs_id, treatment, target, antibody, fold, single=True, cell="SkMel-133"):
    return {
        "obs_id": obs_id,
        "treatment": treatment,
        "dose": treatment.split()[-1] if " " in treatment else "",
        "is_single_drug": "true" if single else "false",
        "target": target,
        "antibody": antibody,
        "readout_entity": _readout_entity(antibody),
        "fold_change": str(fold),
        "cell_line": cell,
    }


def rppa_observation_rows():
    return [observation_row(*row) for row in RPPA_ROWS]


def distractor_rows():
    """Rows the selection must reject: in-band folds or drug combinations."""
    rows = [
        observation_row("d1", "AK 10", "AKT", "S6_pS235_V", 0.80),
        observation_row("d2", "RO 7", "PKC", "S6_pS240_V", 1.20),
        observation_row("d3", "Tm 0.6", "mTOR", "AKT_pS473_V", 1.00),
        observation_row("d4", "ZS 1.2", "PI3K", "CHK2_pT68", 0.55),
        observation_row("d5", "SR 2.4", "SRC", "MAPK_pT202", 1.45),
        observation_row("d6", "901 3", "MEK1/2", "GSK3a_b_pS21", 0.99),
        observation_row("d7", "AK 10", "AKT", "AKT_pT308_V", 0.5),
        observation_row("d8", "RO 7", "PKC", "S6_pS235_V", 1.5),
        observation_row("d9", "AK+Tm 10", "AKT", "S6_pS235_V", 0.10, single=False),
        observation_row("d10", "ZS+901 1", "PI3K", "MAPK_pT202", 3.40, single=False),
        observation_row("d11", "RO+SR 5", "PKC", "CHK2_pT68", 0.02, single=False),
        observation_row("d12", "Tm+AK 1", "mTOR", "S6_pS240_V", 2.10, single=False),
    ]
    return rows


# ---------------------------------------------------------------------------
# Model documents

MACHINE_PROV = {
    "kind": "machine_reading",
    "doc_id": "PMC1",
    "evidence": ["a sentence supporting the edge"],
    "reader": "reader-1",
}
MANUAL_PROV = {"kind": "manual_curation", "curator": "mp"}
DB_PROV = {"kind": "curated_database", "db": "pathdb", "record_id": "r1"}


def model_doc(edges, entities=None, contexts=None, model_id="m1", roles=None):
    """Model document from (edge_id, source, kind, target, extra) tuples."""
    names = set()
    for edge in edges:
        names.add(edge[1])
        names.add(edge[3])
    if entities:
        names.update(entities)
    roles = roles or {}
    return {
        "model_id": model_id,
        "entities": [
            {"entity_id": n, "name": n, "roles": sorted(roles.get(n, ()))} for n in sorted(names)
        ],
        "interactions": [
            {
                "edge_id": edge[0],
                "source": edge[1],
                "kind": edge[2],
                "target": edge[3],
                "provenance": [MANUAL_PROV],
                **(edge[4] if len(edge) > 4 else {}),
            }
            for edge in edges
        ],
        "contexts": contexts or [],
    }
