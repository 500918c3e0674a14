"""Evaluation runs: ingestion, the review queue, persistence, reports.

A run ingests submissions (plus the phase's reference inputs), applies
the automatic rules (dedup, matching, plausibility checks), and queues
everything that needs a human eye: card verdicts, match confirmations,
and evidence-support confirmations for machine-read edges. Resolving a
queue item writes exactly one judgment revision; reports are recomputed
from the latest judgment snapshot, so rerunning a report on an unchanged
run is byte-identical.

Persistence is an embedded on-disk store under a data root:

    runs/<run_id>/run.json        config + status
    runs/<run_id>/cards.json      parsed cards by id
    runs/<run_id>/matches.json    match records + confirmations
    runs/<run_id>/items.json      review queue state
    runs/<run_id>/judgments.log   append-only judgment log
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from ..cards import IndexCard, card_to_dict, load_submission, parse_card
from ..errors import (
    AlreadyClaimedError,
    CardValidationError,
    DuplicateRunError,
    MissingInputError,
    NotClaimantError,
    UnknownItemError,
)
from ..families import DEFAULT_TABLE, EquivalenceTable
from ..judgments import (
    Dialect,
    FieldAssessment,
    INCORRECT,
    Judgment,
    JudgmentStore,
    LARGELY_CORRECT,
    RULE_JUDGE,
    SkipReason,
    apply_rubric,
    human_judge,
    skipped,
)
from ..matching import MatchClass, MatchRecord, match_cards
from ..metrics import (
    MetricsReport,
    cards_per_day,
    correct_fraction,
    precision,
    provenance_composition,
    reference_overlap,
    tally,
)
from ..model_graph import CuratedDatabase, ManualCuration, MechModel, load_model
from ..plausibility import (
    Comparative,
    Directional,
    Explanation,
    Observation,
    Perturbation,
    Plausibility,
    PlausibilityVerdict,
    Readout,
    apply_cross_check,
    check_cell_line_consistency,
    check_plausibility,
    combine_verdicts,
    load_explanations,
    read_observation_csv,
    select_observations,
)

DEFAULT_CLAIM_TIMEOUT = 900.0  # seconds a claim may sit idle before release

CONDITION_DAYS = {"MachineOnly": 7, "HumanMachine": 3, "HumanOnly": 3}


@dataclass
class RunConfig:
    run_id: str
    phase: str  # "I" | "II" | "III"
    submissions: list[str] = field(default_factory=list)
    refset_file: Optional[str] = None
    model_files: list[str] = field(default_factory=list)
    observations_file: Optional[str] = None
    explanation_files: dict[str, str] = field(default_factory=dict)  # team -> path
    assessments_file: Optional[str] = None
    equiv_table_file: Optional[str] = None
    days: Optional[int] = None
    fold_hi: float = 1.5
    fold_lo: float = 0.5
    top_n: int = 10
    claim_timeout: float = DEFAULT_CLAIM_TIMEOUT

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "phase": self.phase,
            "submissions": list(self.submissions),
            "refset_file": self.refset_file,
            "model_files": list(self.model_files),
            "observations_file": self.observations_file,
            "explanation_files": dict(self.explanation_files),
            "assessments_file": self.assessments_file,
            "equiv_table_file": self.equiv_table_file,
            "days": self.days,
            "fold_hi": self.fold_hi,
            "fold_lo": self.fold_lo,
            "top_n": self.top_n,
            "claim_timeout": self.claim_timeout,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        return cls(**doc)


@dataclass
class ReviewItem:
    item_id: str
    kind: str  # "CardVerdict" | "MatchConfirmation" | "EvidenceSupport"
    payload: dict
    state: str = "Queued"  # "Queued" | "Claimed" | "Resolved"
    claimed_by: Optional[str] = None
    claimed_at: Optional[float] = None
    resolution: Optional[dict] = None  # judgment ref + decision

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "kind": self.kind,
            "payload": self.payload,
            "state": self.state,
            "claimed_by": self.claimed_by,
            "claimed_at": self.claimed_at,
            "resolution": self.resolution,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ReviewItem":
        return cls(**doc)


def load_observations(path: Union[str, Path], hi: float = 1.5, lo: float = 0.5) -> list[Observation]:
    """Observation targets from a CSV selection table or explicit JSON list."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return select_observations(read_observation_csv(path), hi=hi, lo=lo)
    doc = json.loads(path.read_text("utf-8"))
    observations = []
    for raw in doc["observations"]:
        if "comparative" in raw.get("expected", {}):
            expected: Union[Directional, Comparative] = Comparative(
                parts=tuple((str(c), int(s)) for c, s in raw["expected"]["comparative"])
            )
        else:
            expected = Directional(int(raw["expected"]["sign"]))
        observations.append(
            Observation(
                obs_id=str(raw["obs_id"]),
                cell_lines=tuple(raw.get("cell_lines", [])),
                perturbation=Perturbation(
                    drug=str(raw.get("drug", "")),
                    target=str(raw["target"]),
                    sign=int(raw.get("perturbation_sign", -1)),
                ),
                readout=Readout(
                    entity=str(raw["readout_entity"]), antibody=raw.get("antibody")
                ),
                expected=expected,
                fold_change=raw.get("fold_change"),
            )
        )
    return observations


class EvaluationRun:
    """One persisted evaluation run."""

    def __init__(self, run_dir: Path, config: RunConfig):
        self.run_dir = run_dir
        self.config = config
        self.judgments = JudgmentStore(run_dir / "judgments.log")
        self._cards: dict[str, IndexCard] = {}
        self._teams: dict[str, dict] = {}  # team -> {condition, papers: {paper: [card ids]}}
        self._matches: list[dict] = []  # serialized MatchRecord + confirmed
        self._items: dict[str, ReviewItem] = {}
        self._load_state()

    # -- state files --------------------------------------------------------

    def _load_state(self):
        cards_path = self.run_dir / "cards.json"
        if cards_path.exists():
            doc = json.loads(cards_path.read_text("utf-8"))
            for card_doc in doc["cards"]:
                card = parse_card(card_doc)
                self._cards[card.card_id] = card
            self._teams = doc.get("teams", {})
        matches_path = self.run_dir / "matches.json"
        if matches_path.exists():
            self._matches = json.loads(matches_path.read_text("utf-8"))["matches"]
        items_path = self.run_dir / "items.json"
        if items_path.exists():
            for raw in json.loads(items_path.read_text("utf-8"))["items"]:
                item = ReviewItem.from_dict(raw)
                self._items[item.item_id] = item
        # judgment targets must be known across process restarts
        self.judgments.register(self._cards)
        self.judgments.register(
            f"edge:{item.payload['model_id']}:{item.payload['edge_id']}"
            for item in self._items.values()
            if item.kind == "EvidenceSupport"
        )

    def save(self):
        (self.run_dir / "cards.json").write_text(
            json.dumps(
                {
                    "cards": [card_to_dict(c) for _, c in sorted(self._cards.items())],
                    "teams": self._teams,
                },
                sort_keys=True,
            ),
            "utf-8",
        )
        (self.run_dir / "matches.json").write_text(
            json.dumps({"matches": self._matches}, sort_keys=True), "utf-8"
        )
        self.save_items()
        (self.run_dir / "run.json").write_text(
            json.dumps(
                {"config": self.config.to_dict(), "status": self.status()}, sort_keys=True
            ),
            "utf-8",
        )

    def save_items(self):
        (self.run_dir / "items.json").write_text(
            json.dumps(
                {"items": [self._items[k].to_dict() for k in sorted(self._items)]},
                sort_keys=True,
            ),
            "utf-8",
        )

    # -- queue --------------------------------------------------------------

    def _new_item(self, kind: str, payload: dict) -> ReviewItem:
        item = ReviewItem(item_id=f"{self.config.run_id}:{len(self._items):05d}", kind=kind, payload=payload)
        self._items[item.item_id] = item
        return item

    def items(self) -> list[ReviewItem]:
        self._expire_claims()
        return [self._items[k] for k in sorted(self._items)]

    def item(self, item_id: str) -> ReviewItem:
        self._expire_claims()
        if item_id not in self._items:
            raise UnknownItemError(item_id)
        return self._items[item_id]

    def _expire_claims(self, now: Optional[float] = None):
        now = time.time() if now is None else now
        changed = False
        for item in self._items.values():
            if (
                item.state == "Claimed"
                and item.claimed_at is not None
                and now - item.claimed_at > self.config.claim_timeout
            ):
                item.state = "Queued"
                item.claimed_by = None
                item.claimed_at = None
                changed = True
        if changed:
            self.save_items()

    def queue_counters(self) -> dict[str, int]:
        counts = {"Queued": 0, "Claimed": 0, "Resolved": 0}
        for item in self._items.values():
            counts[item.state] += 1
        counts["total"] = len(self._items)
        return counts

    def item_target(self, item: ReviewItem) -> str:
        """Judgment-log id an item's resolution writes to."""
        if item.kind == "EvidenceSupport":
            return f"edge:{item.payload['model_id']}:{item.payload['edge_id']}"
        if item.kind == "MatchConfirmation":
            return item.payload["candidate_card_id"]
        return item.payload["card_id"]

    def item_view(self, item: ReviewItem) -> dict:
        """Item dict enriched with the target's current judgment revision,
        so clients can post an honest optimistic revision."""
        doc = item.to_dict()
        doc["judgment_revision"] = self.judgments.current_revision(self.item_target(item))
        return doc

    def claim(self, item_id: str, reviewer: str) -> ReviewItem:
        item = self.item(item_id)
        if item.state == "Resolved":
            raise AlreadyClaimedError(f"{item_id} is already resolved")
        if item.state == "Claimed" and item.claimed_by != reviewer:
            raise AlreadyClaimedError(f"{item_id} is claimed by {item.claimed_by}")
        item.state = "Claimed"
        item.claimed_by = reviewer
        item.claimed_at = time.time()
        self.save_items()
        return item

    def resolve(self, item_id: str, reviewer: str, decision: dict) -> ReviewItem:
        item = self.item(item_id)
        if item.state != "Claimed" or item.claimed_by != reviewer:
            raise NotClaimantError(f"{item_id} is not claimed by {reviewer}")
        judgment = self._apply_decision(item, decision, judge=human_judge(reviewer))
        item.state = "Resolved"
        item.resolution = {
            "decision": decision,
            "judgment": {"card_id": judgment.card_id, "revision": judgment.revision},
            "reviewer": reviewer,
        }
        item.claimed_by = None
        item.claimed_at = None
        self.save_items()
        (self.run_dir / "run.json").write_text(
            json.dumps(
                {"config": self.config.to_dict(), "status": self.status()}, sort_keys=True
            ),
            "utf-8",
        )
        return item

    def _apply_decision(self, item: ReviewItem, decision: dict, judge) -> Judgment:
        """Each resolved item writes through exactly one judgment revision."""
        dialect = Dialect(item.payload.get("dialect", "PhaseI"))
        if item.kind == "CardVerdict":
            card = self._cards[item.payload["card_id"]]
            revision = decision.get("revision", self.judgments.current_revision(card.card_id) + 1)
            judgment = apply_rubric(
                card,
                FieldAssessment.from_dict(decision),
                dialect,
                judge=judge,
                revision=revision,
            )
            self.judgments.record(judgment)
            return judgment
        if item.kind == "MatchConfirmation":
            accept = bool(decision.get("accept", False))
            card_id = item.payload["candidate_card_id"]
            for match in self._matches:
                if (
                    match["gold_id"] == item.payload["gold_id"]
                    and match["candidate_card_id"] == card_id
                ):
                    match["confirmed"] = accept
            (self.run_dir / "matches.json").write_text(
                json.dumps({"matches": self._matches}, sort_keys=True), "utf-8"
            )
            revision = decision.get("revision", self.judgments.current_revision(card_id) + 1)
            judgment = Judgment(
                card_id=card_id,
                verdict=LARGELY_CORRECT if accept else INCORRECT,
                judge=judge,
                revision=revision,
                dialect=dialect,
            )
            self.judgments.record(judgment)
            return judgment
        if item.kind == "EvidenceSupport":
            supported = bool(decision.get("supported", False))
            pseudo_id = f"edge:{item.payload['model_id']}:{item.payload['edge_id']}"
            revision = decision.get("revision", self.judgments.current_revision(pseudo_id) + 1)
            judgment = Judgment(
                card_id=pseudo_id,
                verdict=LARGELY_CORRECT if supported else INCORRECT,
                judge=judge,
                revision=revision,
                dialect=dialect,
            )
            self.judgments.record(judgment)
            return judgment
        raise UnknownItemError(f"unknown item kind {item.kind}")

    # -- derived state ------------------------------------------------------

    def status(self) -> str:
        counters = self.queue_counters()
        if counters["total"] == 0:
            return "Ingested"
        if counters["Queued"] or counters["Claimed"]:
            return "AwaitingReview"
        return "Complete"

    def cards(self) -> dict[str, IndexCard]:
        return dict(self._cards)

    def match_records(self) -> list[MatchRecord]:
        return [
            MatchRecord(
                gold_id=m["gold_id"],
                candidate_card_id=m["candidate_card_id"],
                match_class=MatchClass(m["class"]),
                field_flags=frozenset(),
                auto_flagged=True,
            )
            for m in self._matches
        ]

    def confirmations(self) -> dict[tuple[str, str], bool]:
        return {
            (m["gold_id"], m["candidate_card_id"]): bool(m.get("confirmed"))
            for m in self._matches
            if m.get("confirmed") is not None
        }

    def edge_reviews(self, model_id: str) -> dict[str, bool]:
        """Resolved evidence-support reviews for one model, from the log."""
        reviews: dict[str, bool] = {}
        prefix = f"edge:{model_id}:"
        for card_id, judgment in self.judgments.latest_all().items():
            if card_id.startswith(prefix):
                reviews[card_id[len(prefix):]] = judgment.verdict == LARGELY_CORRECT
        return reviews


class RunStore:
    """Runs under one data root."""

    def __init__(self, data_root: Union[str, Path]):
        self.data_root = Path(data_root)
        (self.data_root / "runs").mkdir(parents=True, exist_ok=True)
        self._open: dict[str, EvaluationRun] = {}

    def run_dir(self, run_id: str) -> Path:
        return self.data_root / "runs" / run_id

    def exists(self, run_id: str) -> bool:
        return (self.run_dir(run_id) / "run.json").exists()

    def get(self, run_id: str) -> EvaluationRun:
        if run_id in self._open:
            return self._open[run_id]
        run_path = self.run_dir(run_id) / "run.json"
        if not run_path.exists():
            raise UnknownItemError(f"no run {run_id!r}")
        config = RunConfig.from_dict(json.loads(run_path.read_text("utf-8"))["config"])
        run = EvaluationRun(self.run_dir(run_id), config)
        self._open[run_id] = run
        return run

    def run_ids(self) -> list[str]:
        return sorted(p.parent.name for p in (self.data_root / "runs").glob("*/run.json"))


# ---------------------------------------------------------------------------
# Ingestion


def _require(path: Optional[str], what: str) -> Path:
    if path is None:
        raise MissingInputError(f"{what} is required for this phase")
    p = Path(path)
    if not p.exists():
        raise MissingInputError(f"{what} not found: {path}")
    return p


def _load_table(config: RunConfig) -> EquivalenceTable:
    if config.equiv_table_file:
        return EquivalenceTable.from_file(_require(config.equiv_table_file, "equivalence table"))
    return DEFAULT_TABLE


def _top_ranked(cards: list[IndexCard], top_n: int) -> list[IndexCard]:
    ranked = sorted(
        (c for c in cards if c.rank is not None), key=lambda c: (c.rank, c.card_id or "")
    )
    if ranked:
        return ranked[:top_n]
    return cards[:top_n]


def _apply_assessments(run: EvaluationRun, path: Path) -> None:
    """Resolve queue items from a pre-recorded assessments file (rule judge)."""
    by_card: dict[str, dict] = {}
    by_match: dict[tuple[str, str], dict] = {}
    by_edge: dict[tuple[str, str], dict] = {}
    for line in path.read_text("utf-8").splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        kind = doc.get("type", "card")
        if kind == "card":
            by_card[doc["card_id"]] = doc
        elif kind == "match":
            by_match[(doc["gold_id"], doc["candidate_card_id"])] = doc
        elif kind == "edge_evidence":
            by_edge[(doc["model_id"], doc["edge_id"])] = doc

    for item in run.items():
        if item.state != "Queued":
            continue
        decision = None
        if item.kind == "CardVerdict":
            decision = by_card.get(item.payload["card_id"])
        elif item.kind == "MatchConfirmation":
            decision = by_match.get((item.payload["gold_id"], item.payload["candidate_card_id"]))
        elif item.kind == "EvidenceSupport":
            decision = by_edge.get((item.payload["model_id"], item.payload["edge_id"]))
        if decision is None:
            continue
        judgment = run._apply_decision(item, decision, judge=RULE_JUDGE)
        item.state = "Resolved"
        item.resolution = {
            "decision": decision,
            "judgment": {"card_id": judgment.card_id, "revision": judgment.revision},
            "reviewer": "rule",
        }
    run.save_items()


def _ingest_submissions(run: EvaluationRun, config: RunConfig, dialect: Dialect) -> None:
    from ..matching import dedup_submission

    table = _load_table(config)
    for sub_path in config.submissions:
        submission = load_submission(_require(sub_path, "submission directory"))
        team_state = {"condition": submission.condition.value, "papers": {}}
        run._teams[submission.team_id] = team_state
        for paper_id, cards in sorted(submission.cards_by_paper.items()):
            for card in cards:
                run._cards[card.card_id] = card
            run.judgments.register(c.card_id for c in cards)
            unique, duplicates = dedup_submission(cards, table)
            team_state["papers"][paper_id] = {
                "cards": [c.card_id for c in cards],
                "unique": [c.card_id for c in unique],
            }
            for dup in duplicates:
                run.judgments.record(
                    Judgment(
                        card_id=dup.card_id,
                        verdict=skipped(SkipReason.DUPLICATE),
                        judge=RULE_JUDGE,
                        revision=1,
                        dialect=dialect,
                    )
                )
            scoreable = unique if config.phase == "I" else _top_ranked(unique, config.top_n)
            team_state["papers"][paper_id]["scoreable"] = [c.card_id for c in scoreable]
            for card in scoreable:
                run._new_item(
                    "CardVerdict",
                    {
                        "card_id": card.card_id,
                        "paper_id": paper_id,
                        "team": submission.team_id,
                        "dialect": dialect.value,
                        "card": card_to_dict(card),
                    },
                )


def _ingest_matches(run: EvaluationRun, config: RunConfig) -> None:
    from ..refset import load_refset, reference_to_dict

    table = _load_table(config)
    refs = load_refset(_require(config.refset_file, "reference set"))
    run.run_dir.joinpath("refset.json").write_text(
        json.dumps({"interactions": [reference_to_dict(r) for r in refs]}, sort_keys=True),
        "utf-8",
    )
    for team, team_state in sorted(run._teams.items()):
        for ref in refs:
            paper_state = team_state["papers"].get(ref.paper_id)
            if not paper_state:
                continue
            for card_id in paper_state["scoreable"]:
                card = run._cards[card_id]
                record = match_cards(card, ref.interaction, gold_id=ref.ref_id, table=table)
                if record.match_class is MatchClass.NONE:
                    continue
                run._matches.append(
                    {
                        "gold_id": ref.ref_id,
                        "candidate_card_id": card_id,
                        "class": record.match_class.value,
                        "flags": sorted(f.value for f in record.field_flags),
                        "team": team,
                        "confirmed": None,
                    }
                )
                run._new_item(
                    "MatchConfirmation",
                    {
                        "gold_id": ref.ref_id,
                        "candidate_card_id": card_id,
                        "paper_id": ref.paper_id,
                        "team": team,
                        "dialect": Dialect.PHASE_II.value,
                        "match_class": record.match_class.value,
                        "flags": sorted(f.value for f in record.field_flags),
                        "reference": reference_to_dict(ref),
                        "card": card_to_dict(card),
                    },
                )


def _machine_read_only(edge) -> bool:
    return bool(edge.provenance) and not any(
        isinstance(p, (CuratedDatabase, ManualCuration)) for p in edge.provenance
    )


def _ingest_explanations(run: EvaluationRun, config: RunConfig) -> None:
    models: dict[str, MechModel] = {}
    for model_path in config.model_files:
        model = load_model(_require(model_path, "model file"))
        models[model.model_id] = model
    observations = load_observations(
        _require(config.observations_file, "observations file"),
        hi=config.fold_hi,
        lo=config.fold_lo,
    )
    obs_doc = [o.obs_id for o in observations]
    run.run_dir.joinpath("observations.json").write_text(
        json.dumps({"observation_ids": obs_doc}, sort_keys=True), "utf-8"
    )

    queued_edges: set[tuple[str, str]] = set()
    for team, path in sorted(config.explanation_files.items()):
        explanations = load_explanations(_require(path, f"explanations for {team}"))
        run._teams.setdefault(team, {"condition": None, "papers": {}})
        run._teams[team]["explanations"] = [
            {
                "observation_id": e.observation_id,
                "model_id": e.model_id,
                "cell_line": e.cell_line,
                "paths": [list(p) for p in e.paths],
                "narrative": e.narrative,
                "predicted_sign": e.predicted_sign,
            }
            for e in explanations
        ]
        for expl in explanations:
            model = models.get(expl.model_id)
            if model is None:
                raise MissingInputError(f"explanation uses unknown model {expl.model_id!r}")
            for path_edges in expl.paths:
                for edge_id in path_edges:
                    edge = model.edge(edge_id)
                    if not _machine_read_only(edge):
                        continue
                    key = (model.model_id, edge_id)
                    if key in queued_edges:
                        continue
                    queued_edges.add(key)
                    run.judgments.register([f"edge:{model.model_id}:{edge_id}"])
                    evidence = [
                        s for p in edge.provenance for s in getattr(p, "evidence", ())
                    ]
                    run._new_item(
                        "EvidenceSupport",
                        {
                            "model_id": model.model_id,
                            "edge_id": edge_id,
                            "team": team,
                            "dialect": Dialect.PHASE_I.value,
                            "source": edge.source,
                            "target": edge.target,
                            "kind": edge.kind.value,
                            "evidence": evidence,
                        },
                    )


def ingest_run(config: RunConfig, data_root: Union[str, Path]) -> EvaluationRun:
    """Create and persist a run: parse inputs, dedup, match, queue reviews."""
    store = RunStore(data_root)
    if store.exists(config.run_id):
        raise DuplicateRunError(config.run_id)
    run_dir = store.run_dir(config.run_id)
    run_dir.mkdir(parents=True, exist_ok=True)
    run = EvaluationRun(run_dir, config)

    if config.phase in ("I", "II"):
        if not config.submissions:
            raise MissingInputError("at least one submission directory is required")
        dialect = Dialect.PHASE_I if config.phase == "I" else Dialect.PHASE_II
        _ingest_submissions(run, config, dialect)
        if config.phase == "II":
            _ingest_matches(run, config)
    elif config.phase == "III":
        if not config.explanation_files:
            raise MissingInputError("at least one explanations file is required")
        _ingest_explanations(run, config)
    else:
        raise MissingInputError(f"unknown phase {config.phase!r}")

    if config.assessments_file:
        _apply_assessments(run, _require(config.assessments_file, "assessments file"))
    run.save()
    store._open[config.run_id] = run
    return run


# ---------------------------------------------------------------------------
# Reports


def _phase1_report(run: EvaluationRun) -> dict:
    config = run.config
    latest = run.judgments.latest_all()
    teams: dict[str, Any] = {}
    for team, team_state in sorted(run._teams.items()):
        card_ids = [cid for p in team_state["papers"].values() for cid in p["cards"]]
        verdicts = [latest[cid] for cid in card_ids if cid in latest]
        counts = tally(verdicts)
        report = MetricsReport(counts=counts)
        if counts.scored:
            report.precision = precision(counts)
        if counts.total:
            report.correct_fraction = correct_fraction(counts)
            days = config.days or CONDITION_DAYS.get(team_state.get("condition") or "", 7)
            report.cards_per_day = cards_per_day(verdicts, len(card_ids), days)
        teams[team] = report.to_dict()
        teams[team]["judged"] = len(verdicts)
        teams[team]["submitted"] = len(card_ids)
    return {"run_id": config.run_id, "phase": config.phase, "teams": teams}


def _phase2_report(run: EvaluationRun) -> dict:
    from ..refset import load_refset

    config = run.config
    refs = load_refset(run.run_dir / "refset.json")
    latest = run.judgments.latest_all()
    confirmations = run.confirmations()
    table = _load_table(config)
    teams: dict[str, Any] = {}
    for team, team_state in sorted(run._teams.items()):
        cards_by_paper = {
            paper: [run._cards[cid] for cid in p["scoreable"]]
            for paper, p in team_state["papers"].items()
        }
        overlap = reference_overlap(
            refs, cards_by_paper, latest, confirmations=confirmations, table=table
        )
        scoreable_ids = {cid for p in team_state["papers"].values() for cid in p["scoreable"]}
        verdicts = [latest[cid] for cid in scoreable_ids if cid in latest]
        counts = tally(verdicts)
        report = MetricsReport(counts=counts, overlap_by_category=overlap)
        if counts.scored:
            report.precision = precision(counts)
        teams[team] = report.to_dict()
        teams[team]["judged"] = len(verdicts)
    return {"run_id": config.run_id, "phase": config.phase, "teams": teams}


def _phase3_report(run: EvaluationRun) -> dict:
    config = run.config
    models = {m.model_id: m for m in (load_model(p) for p in config.model_files)}
    observations = load_observations(
        Path(config.observations_file), hi=config.fold_hi, lo=config.fold_lo
    )
    by_parent: dict[str, Observation] = {o.obs_id: o for o in observations}

    teams: dict[str, Any] = {}
    verdict_grid: dict[str, dict[str, Optional[PlausibilityVerdict]]] = {}
    pending: list[str] = []
    for team, team_state in sorted(run._teams.items()):
        explanations = [
            Explanation(
                observation_id=e["observation_id"],
                model_id=e["model_id"],
                cell_line=e["cell_line"],
                paths=tuple(tuple(p) for p in e["paths"]),
                narrative=e.get("narrative"),
                predicted_sign=e.get("predicted_sign"),
            )
            for e in team_state.get("explanations", [])
        ]
        by_obs = {e.observation_id: e for e in explanations}
        violations = check_cell_line_consistency(explanations, models)
        implicated = {
            obs_id: v.detail for v in violations for obs_id in v.explanation_ids
        }
        grid: dict[str, Optional[PlausibilityVerdict]] = {}
        detail: dict[str, dict] = {}
        for parent_id, parent in sorted(by_parent.items()):
            subs = parent.subobservations()
            sub_verdicts: list[PlausibilityVerdict] = []
            attempted = False
            for sub in subs:
                expl = by_obs.get(sub.obs_id) or (
                    by_obs.get(parent_id) if len(subs) == 1 else None
                )
                if expl is None:
                    continue
                attempted = True
                model = models[expl.model_id]
                context = model.contexts.get(expl.cell_line)
                verdict = check_plausibility(
                    model,
                    context,
                    sub,
                    Explanation(
                        observation_id=sub.obs_id,
                        model_id=expl.model_id,
                        cell_line=expl.cell_line,
                        paths=expl.paths,
                        narrative=expl.narrative,
                        predicted_sign=expl.predicted_sign,
                    ),
                    evidence_reviews=run.edge_reviews(expl.model_id),
                )
                verdict = apply_cross_check(verdict, implicated.get(expl.observation_id))
                sub_verdicts.append(verdict)
            if not attempted or len(sub_verdicts) < len(subs):
                grid[parent_id] = None
                continue
            combined = combine_verdicts(sub_verdicts)
            grid[parent_id] = combined
            detail[parent_id] = combined.to_dict()
            if combined.overall is Plausibility.PENDING:
                pending.append(f"{team}/{parent_id}")
        verdict_grid[team] = grid
        provenance = {}
        for model_id in sorted({e.model_id for e in explanations}):
            provenance[model_id] = {
                k: float(v) for k, v in provenance_composition(models[model_id]).items()
            }
        teams[team] = {
            "verdicts": detail,
            "attempted": sum(1 for v in grid.values() if v is not None),
            "violations": [
                {"cell_line": v.cell_line, "kind": v.kind, "detail": v.detail}
                for v in violations
            ],
            "provenance_mix": provenance,
        }

    report: dict[str, Any] = {
        "run_id": config.run_id,
        "phase": config.phase,
        "observations": sorted(by_parent),
        "teams": teams,
    }
    if pending:
        report["pending"] = sorted(pending)
    else:
        from ..plausibility import summarize_results_grid

        grid = summarize_results_grid(verdict_grid, observations=sorted(by_parent))
        report["grid"] = grid.to_dict()
    return report


def run_report(run: EvaluationRun) -> dict:
    """Deterministic report over the run's latest judgment snapshot."""
    if run.config.phase == "I":
        report = _phase1_report(run)
    elif run.config.phase == "II":
        report = _phase2_report(run)
    else:
        report = _phase3_report(run)
    report["status"] = run.status()
    report["queue"] = run.queue_counters()
    return report


def report_bytes(run: EvaluationRun) -> bytes:
    return json.dumps(run_report(run), sort_keys=True, indent=2).encode("utf-8")
