"""Quantitative measures over judged cards and models.

Everything here is pure aggregation over an immutable snapshot of the
judgment log. Ratios are exact rationals (fractions.Fraction); rounding
happens only at presentation time. Percent columns round half away from
zero to the nearest integer, matching how the overlap tables are
presented; raw ratios are always retained alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .cards import ComplexParticipant, EntityRef, EntityType, IndexCard
from .errors import (
    EmptyDenominatorError,
    EmptyScoredSampleError,
    MissingProvenanceError,
    NonpositiveDaysError,
)
from .judgments import Judgment, Verdict, VerdictKind
from .matching import FieldFlag, MatchClass, MatchRecord

GROUNDABLE_TYPES = frozenset({EntityType.PROTEIN, EntityType.CHEMICAL, EntityType.GENE})


def round_percent(matches: int, total: int) -> int:
    """Nearest-integer percent, half rounds up; exact integer arithmetic."""
    if total <= 0:
        raise ZeroDivisionError("percent of an empty reference category")
    return (200 * matches + total) // (2 * total)


# ---------------------------------------------------------------------------
# Verdict tallies, precision, throughput


@dataclass(frozen=True)
class VerdictCounts:
    largely_correct: int = 0
    incorrect: int = 0
    skipped: int = 0

    @property
    def scored(self) -> int:
        return self.largely_correct + self.incorrect

    @property
    def total(self) -> int:
        return self.largely_correct + self.incorrect + self.skipped


def tally(verdicts: Iterable[Union[Verdict, Judgment]]) -> VerdictCounts:
    lc = inc = skip = 0
    for v in verdicts:
        verdict = v.verdict if isinstance(v, Judgment) else v
        if verdict.kind is VerdictKind.LARGELY_CORRECT:
            lc += 1
        elif verdict.kind is VerdictKind.INCORRECT:
            inc += 1
        else:
            skip += 1
    return VerdictCounts(lc, inc, skip)


def precision(verdicts: Iterable[Union[Verdict, Judgment]]) -> Fraction:
    """largely-correct / (largely-correct + incorrect); skips excluded."""
    counts = verdicts if isinstance(verdicts, VerdictCounts) else tally(verdicts)
    if counts.scored == 0:
        raise EmptyDenominatorError("no largely-correct or incorrect verdicts")
    return Fraction(counts.largely_correct, counts.scored)


def correct_fraction(verdicts: Iterable[Union[Verdict, Judgment]]) -> Fraction:
    """largely-correct / all evaluated cards, skips included."""
    counts = verdicts if isinstance(verdicts, VerdictCounts) else tally(verdicts)
    if counts.total == 0:
        raise EmptyScoredSampleError("no verdicts at all")
    return Fraction(counts.largely_correct, counts.total)


def cards_per_day(
    verdicts: Iterable[Union[Verdict, Judgment]],
    total_submitted: int,
    days: Union[int, Fraction],
) -> Fraction:
    """Estimated largely-correct cards produced per day.

    The scored sample estimates the correct fraction of the whole
    submission; seven days is the machine-only convention and three days
    the human+machine convention, but any positive duration is accepted.
    """
    if days is None or days <= 0:
        raise NonpositiveDaysError(f"days must be positive, got {days}")
    fraction = correct_fraction(verdicts)
    return fraction * total_submitted / Fraction(days)


# ---------------------------------------------------------------------------
# Reference-set overlap (recall proxy)


@dataclass(frozen=True)
class CategoryOverlap:
    matches: int
    reference_total: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.matches, self.reference_total)

    @property
    def percent(self) -> int:
        return round_percent(self.matches, self.reference_total)


def reference_overlap(
    refs: Sequence,  # refset.ReferenceInteraction
    cards_by_paper: Mapping[str, Sequence[IndexCard]],
    judgments: Mapping[str, Judgment],
    confirmations: Optional[Mapping[tuple[str, str], bool]] = None,
    table=None,
) -> dict[str, CategoryOverlap]:
    """Fraction of reference interactions matched by top-ranked cards.

    A reference interaction counts as matched when some card from its
    paper is a full match *and* that card's latest verdict is largely
    correct. When human match confirmations are supplied, only confirmed
    (gold, candidate) pairs count; otherwise automatic full matches are
    trusted. Categories are bucketed the way the overlap table reports
    them: direct phosphorylation/binding against indirect-plus-composite.
    """
    from .matching import best_match  # local import to keep module deps one-way
    from .refset import category_bucket

    matched: dict[str, int] = {}
    totals: dict[str, int] = {}
    for ref in refs:
        bucket = category_bucket(ref.category)
        totals[bucket] = totals.get(bucket, 0) + 1
        candidates = [
            card
            for card in cards_by_paper.get(ref.paper_id, ())
            if (j := judgments.get(card.card_id or ""))
            and j.verdict.kind is VerdictKind.LARGELY_CORRECT
        ]
        kwargs = {} if table is None else {"table": table}
        record = best_match(candidates, ref.interaction, gold_id=ref.ref_id, **kwargs)
        if record is None or record.match_class is not MatchClass.FULL:
            continue
        if confirmations is not None and not confirmations.get(
            (record.gold_id, record.candidate_card_id), False
        ):
            continue
        matched[bucket] = matched.get(bucket, 0) + 1
    return {
        bucket: CategoryOverlap(matches=matched.get(bucket, 0), reference_total=total)
        for bucket, total in totals.items()
    }


# ---------------------------------------------------------------------------
# Conditional error rates


@dataclass(frozen=True)
class ErrorRate:
    errors: int
    scored: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.errors, self.scored)


def _flags_for(record: MatchRecord, judgments: Mapping[str, Judgment]) -> frozenset[FieldFlag]:
    judgment = judgments.get(record.candidate_card_id)
    extra = judgment.field_flags if judgment is not None else frozenset()
    return record.field_flags | extra


def conditional_error_rates(
    match_records: Iterable[MatchRecord],
    judgments: Mapping[str, Judgment],
    cards: Mapping[str, IndexCard],
) -> dict[str, ErrorRate]:
    """Error rates conditional on matching, with their denominators.

    Participant and interaction-type rates are computed over matching
    cards only. Grounding and in-model rates are computed over groundable
    (protein/chemical/gene) participants that were correctly identified
    on matching cards. Empty denominators yield no entry rather than a
    fake zero.
    """
    matching = [r for r in match_records if r.match_class is not MatchClass.NONE]
    participant_errors = 0
    type_errors = 0
    groundable = 0
    grounding_errors = 0
    in_model_scored = 0
    in_model_errors = 0

    side_flags = {
        "a": (FieldFlag.PARTICIPANT_A_ERROR, FieldFlag.GROUNDING_ERROR_A, FieldFlag.IN_MODEL_ERROR_A),
        "b": (FieldFlag.PARTICIPANT_B_ERROR, FieldFlag.GROUNDING_ERROR_B, FieldFlag.IN_MODEL_ERROR_B),
    }

    for record in matching:
        flags = _flags_for(record, judgments)
        if FieldFlag.PARTICIPANT_A_ERROR in flags or FieldFlag.PARTICIPANT_B_ERROR in flags:
            participant_errors += 1
        if FieldFlag.INTERACTION_TYPE_ERROR in flags:
            type_errors += 1
        card = cards.get(record.candidate_card_id)
        if card is None:
            continue
        for side, (p_flag, g_flag, m_flag) in side_flags.items():
            participant = (
                card.interaction.participant_a if side == "a" else card.interaction.participant_b
            )
            entities: tuple[EntityRef, ...]
            if isinstance(participant, EntityRef):
                entities = (participant,)
            elif isinstance(participant, ComplexParticipant):
                entities = participant.members
            else:
                continue
            if p_flag in flags:
                continue  # not correctly identified: unscoreable for grounding
            for entity in entities:
                if entity.entity_type not in GROUNDABLE_TYPES:
                    continue
                groundable += 1
                in_model_scored += 1
                if g_flag in flags:
                    grounding_errors += 1
                if m_flag in flags:
                    in_model_errors += 1

    rates: dict[str, ErrorRate] = {}
    if matching:
        rates["participant"] = ErrorRate(participant_errors, len(matching))
        rates["interaction_type"] = ErrorRate(type_errors, len(matching))
    if groundable:
        rates["grounding"] = ErrorRate(grounding_errors, groundable)
    if in_model_scored:
        rates["in_model"] = ErrorRate(in_model_errors, in_model_scored)
    return rates


# ---------------------------------------------------------------------------
# Ensemble "correct combination" analysis


@dataclass(frozen=True)
class EnsembleFields:
    """Per-card field correctness within a pool matching one gold card.

    Participant correctness here includes correct grounding; interaction
    type correctness is the exact kind, not the family.
    """

    card_id: str
    a_correct: bool
    b_correct: bool
    type_correct: bool


@dataclass(frozen=True)
class EnsembleResult:
    combo: bool
    n_cards: int
    a_correct: int
    b_correct: int
    type_correct: int


def ensemble_combination(pool: Iterable[EnsembleFields]) -> EnsembleResult:
    """Could an ideal ensemble assemble a fully correct card from this pool?

    True iff some card got participant A fully right, some card participant
    B, and some card the interaction type; the three may be different cards.
    """
    cards = list(pool)
    a = sum(1 for c in cards if c.a_correct)
    b = sum(1 for c in cards if c.b_correct)
    t = sum(1 for c in cards if c.type_correct)
    return EnsembleResult(
        combo=a > 0 and b > 0 and t > 0,
        n_cards=len(cards),
        a_correct=a,
        b_correct=b,
        type_correct=t,
    )


def ensemble_fields(candidate: IndexCard, gold: IndexCard) -> EnsembleFields:
    """Derive field correctness for a candidate against a gold card."""
    from .matching import grounding_flags, participants_match

    cand = candidate.interaction
    gold_i = gold.interaction
    g_flags = grounding_flags(candidate, gold)
    a_correct = (
        participants_match(cand.participant_a, gold_i.participant_a)
        and FieldFlag.GROUNDING_ERROR_A not in g_flags
    )
    b_correct = (
        participants_match(cand.participant_b, gold_i.participant_b)
        and FieldFlag.GROUNDING_ERROR_B not in g_flags
    )
    return EnsembleFields(
        card_id=candidate.card_id or "candidate",
        a_correct=a_correct,
        b_correct=b_correct,
        type_correct=cand.kind is gold_i.kind,
    )


# ---------------------------------------------------------------------------
# Provenance composition


def provenance_composition(model) -> dict[str, Fraction]:
    """Exclusive source-class fractions over a model's interactions.

    Classes are the distinct combinations of provenance kinds an edge
    cites ("machine_reading", "curated_database+manual_curation", ...);
    fractions over all edges sum to exactly 1.
    """
    interactions = list(model.interactions)
    if not interactions:
        return {}
    counts: dict[str, int] = {}
    for edge in interactions:
        if not edge.provenance:
            raise MissingProvenanceError(edge.edge_id)
        kinds = sorted({p.kind for p in edge.provenance})
        key = "+".join(kinds)
        counts[key] = counts.get(key, 0) + 1
    total = len(interactions)
    return {key: Fraction(n, total) for key, n in sorted(counts.items())}


# ---------------------------------------------------------------------------
# Report assembly and tabular export


@dataclass
class MetricsReport:
    precision: Optional[Fraction] = None
    correct_fraction: Optional[Fraction] = None
    cards_per_day: Optional[Fraction] = None
    overlap_by_category: dict[str, CategoryOverlap] = field(default_factory=dict)
    error_rates: dict[str, ErrorRate] = field(default_factory=dict)
    ensemble: dict[str, EnsembleResult] = field(default_factory=dict)
    provenance_mix: dict[str, Fraction] = field(default_factory=dict)
    counts: Optional[VerdictCounts] = None

    def to_dict(self) -> dict:
        def frac(x: Optional[Fraction]):
            if x is None:
                return None
            return {"ratio": f"{x.numerator}/{x.denominator}", "value": float(x)}

        return {
            "precision": frac(self.precision),
            "correct_fraction": frac(self.correct_fraction),
            "cards_per_day": frac(self.cards_per_day),
            "counts": (
                None
                if self.counts is None
                else {
                    "largely_correct": self.counts.largely_correct,
                    "incorrect": self.counts.incorrect,
                    "skipped": self.counts.skipped,
                }
            ),
            "overlap_by_category": {
                bucket: {
                    "matches": o.matches,
                    "reference_total": o.reference_total,
                    "percent": o.percent,
                }
                for bucket, o in sorted(self.overlap_by_category.items())
            },
            "error_rates": {
                name: {
                    "errors": r.errors,
                    "scored": r.scored,
                    "rate": float(r.rate),
                }
                for name, r in sorted(self.error_rates.items())
            },
            "ensemble": {
                gold_id: {
                    "combo": r.combo,
                    "n_cards": r.n_cards,
                    "a_correct": r.a_correct,
                    "b_correct": r.b_correct,
                    "type_correct": r.type_correct,
                }
                for gold_id, r in sorted(self.ensemble.items())
            },
            "provenance_mix": {k: float(v) for k, v in sorted(self.provenance_mix.items())},
        }


def precision_throughput_rows(
    reports: Mapping[str, MetricsReport],
) -> list[list[str]]:
    """Rows in the precision / correct-cards-per-day table layout."""
    rows = [["Submitter-Condition", "Precision", "Largely Correct Cards per Day (estimated)"]]
    for label, report in reports.items():
        rows.append(
            [
                label,
                "" if report.precision is None else f"{float(report.precision):.2f}",
                "" if report.cards_per_day is None else str(round(float(report.cards_per_day))),
            ]
        )
    return rows


OVERLAP_BUCKET_LABELS = {
    "direct_phospho_bind": "Matches to phosphorylates, dephosphorylates, and binds interactions",
    "other_direct": "Matches to other direct interactions",
    "indirect_complex": "Matches to indirect and complex interactions",
}


def overlap_rows(reports: Mapping[str, MetricsReport]) -> list[list[str]]:
    """Reference-set overlap table: one statistic per row, submissions as columns."""
    labels = list(reports)
    rows = [["Statistic"] + labels]
    buckets = sorted({b for r in reports.values() for b in r.overlap_by_category})
    for bucket in buckets:
        count_row = [OVERLAP_BUCKET_LABELS.get(bucket, bucket)]
        pct_row = ["Percent Reference Set Overlap"]
        for label in labels:
            overlap = reports[label].overlap_by_category.get(bucket)
            count_row.append("" if overlap is None else str(overlap.matches))
            pct_row.append("" if overlap is None else str(overlap.percent))
        rows.append(count_row)
        rows.append(pct_row)
    prec_row = ["Precision (all interaction types)"]
    for label in labels:
        p = reports[label].precision
        prec_row.append("" if p is None else f"{float(p):.2f}")
    rows.append(prec_row)
    return rows


ERROR_RATE_LABELS = {
    "participant": "Participant Error Rate",
    "interaction_type": "Interaction Type Error Rate",
    "grounding": "Grounding Error Rate",
    "in_model": "In Model Error Rate",
}


def error_rate_rows(reports: Mapping[str, MetricsReport]) -> list[list[str]]:
    """Conditional error-rate table: per submitter, rate and number scored."""
    labels = list(reports)
    header = [""]
    for label in labels:
        header += [f"{label} Error Rate", f"{label} Number Scored"]
    rows = [header]
    for key in ("participant", "interaction_type", "grounding", "in_model"):
        row = [ERROR_RATE_LABELS[key]]
        for label in labels:
            rate = reports[label].error_rates.get(key)
            if rate is None:
                row += ["", ""]
            else:
                row += [f"{float(rate.rate):.2f}", str(rate.scored)]
        rows.append(row)
    return rows


def ensemble_rows(report: MetricsReport) -> list[list[str]]:
    rows = [
        [
            "Gold Id",
            "Number of Matching Cards",
            "Number of Cards with Participant A Correct",
            "Number of Cards with Participant B Correct",
            "Number of Cards with Interaction Type Correct",
            "Is there a Correct Combo?",
        ]
    ]
    for gold_id, result in sorted(report.ensemble.items()):
        rows.append(
            [
                gold_id,
                str(result.n_cards),
                str(result.a_correct),
                str(result.b_correct),
                str(result.type_correct),
                "Yes" if result.combo else "No",
            ]
        )
    return rows
