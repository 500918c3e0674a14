"""Evaluation harness for curated mechanistic-biology interaction knowledge.

Validates index cards describing molecular interactions, matches them
against reference interactions, computes precision / throughput / overlap
metrics, and checks whether explanation paths over signed interaction
graphs are plausible. Human adjudication feeds the metrics through an
append-only judgment log served by a small review API.
"""

from .cards import (
    BLANK,
    Blank,
    ComplexParticipant,
    EmbeddedInteraction,
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
    SourceType,
    Submission,
    SubmissionCondition,
    card_signature,
    card_to_dict,
    load_submission,
    normalize_text,
    parse_card,
    validate_card_document,
)
from .errors import (
    CardValidationError,
    MechEvalError,
    ModelValidationError,
    StaleRevisionError,
    ValidationError,
)
from .families import DEFAULT_TABLE, EquivalenceTable
from .judgments import (
    Dialect,
    FieldAssessment,
    Judgment,
    JudgmentStore,
    SkipReason,
    Verdict,
    VerdictKind,
    apply_rubric,
    record_judgment,
)
from .matching import (
    FieldFlag,
    MatchClass,
    MatchRecord,
    best_match,
    dedup_submission,
    interaction_family,
    match_cards,
)
from .metrics import (
    MetricsReport,
    cards_per_day,
    conditional_error_rates,
    correct_fraction,
    ensemble_combination,
    precision,
    provenance_composition,
    reference_overlap,
)
from .model_graph import MechModel, ModelEntity, ModelInteraction, Role, edges_between, load_model
from .plausibility import (
    CriterionStatus,
    Explanation,
    Observation,
    Plausibility,
    PlausibilityVerdict,
    check_cell_line_consistency,
    check_plausibility,
    propagate_sign,
    select_observations,
    summarize_results_grid,
)
from .refset import ReferenceCategory, ReferenceInteraction, expand_embedded, merge_consensus

__version__ = "0.1.0"
