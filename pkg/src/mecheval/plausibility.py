"""Observation selection and six-criterion plausibility checking.

An explanation is a set of interaction paths leading from a drug's target
to the measured phosphoprotein. It is plausible only when all six
criteria hold:

  C1  predicted direction of change agrees with the measured fold change
  C2  every path fully connects the perturbation target to the readout
  C3  interactions respect biological commonsense (phosphorylation needs
      a kinase, dephosphorylation a phosphatase)
  C4  every interaction has an information source, and machine-read
      interactions have evidence a reviewer confirmed supports them
  C5  the explanation is consistent with the cell-line context (no path
      through a knocked-out gene)
  C6  explanations within one cell line share one model network
      (cross-checked over the whole submission)

Direction prediction multiplies edge signs along a path and the
perturbation sign (inhibitors are -1 at their target); an empty path is
legal exactly when the readout is the drug target itself. Checks are pure
and deterministic given resolved human reviews; anything a machine cannot
decide routes to human review rather than silently passing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    DisconnectedPathError,
    NonpositiveFoldError,
    PendingVerdictsError,
    UnknownObservationError,
    UnsignedEdgeError,
)
from .model_graph import (
    CellContext,
    CuratedDatabase,
    InteractionKind,
    ManualCuration,
    MechModel,
    ModelInteraction,
    Role,
    required_role,
)

# ---------------------------------------------------------------------------
# Observations


@dataclass(frozen=True)
class Perturbation:
    drug: str
    target: str
    sign: int = -1  # inhibitors by default; activators carry +1


@dataclass(frozen=True)
class Readout:
    entity: str
    phospho_site: Optional[str] = None
    antibody: Optional[str] = None


@dataclass(frozen=True)
class Directional:
    sign: int  # -1 for a decrease (fold < 1), +1 for an increase


@dataclass(frozen=True)
class Comparative:
    """Per-cell-line directional sub-observations of one composite finding."""

    parts: tuple[tuple[str, int], ...]  # (cell_line, sign)


@dataclass(frozen=True)
class Observation:
    obs_id: str
    cell_lines: tuple[str, ...]
    perturbation: Perturbation
    readout: Readout
    expected: Union[Directional, Comparative]
    fold_change: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.expected, Directional) and self.fold_change is not None:
            implied = -1 if self.fold_change < 1 else +1
            if implied != self.expected.sign:
                raise ValueError(
                    f"{self.obs_id}: direction {self.expected.sign:+d} inconsistent"
                    f" with fold change {self.fold_change}"
                )

    def subobservations(self) -> list["Observation"]:
        """Comparative observations decompose into per-cell-line directionals."""
        if isinstance(self.expected, Directional):
            return [self]
        return [
            replace(
                self,
                obs_id=f"{self.obs_id}/{cell_line}",
                cell_lines=(cell_line,),
                expected=Directional(sign),
                fold_change=None,
            )
            for cell_line, sign in self.expected.parts
        ]


def _parse_bool(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    return str(raw).strip().lower() in {"1", "true", "yes", "y"}


def select_observations(
    rows: Iterable[Mapping], hi: float = 1.5, lo: float = 0.5
) -> list[Observation]:
    """Pick explanation targets from a perturbation-response table.

    Keeps single-drug rows whose fold change lies outside (lo, hi); the
    expected direction comes from the fold change itself.
    """
    observations: list[Observation] = []
    for row in rows:
        fold = float(row["fold_change"])
        if fold <= 0:
            raise NonpositiveFoldError(f"fold change must be positive, got {fold}")
        if not _parse_bool(row.get("is_single_drug", False)):
            continue
        if lo < fold < hi:
            continue
        if fold in (lo, hi):
            continue
        pert_sign = int(row.get("perturbation_sign", -1) or -1)
        observations.append(
            Observation(
                obs_id=str(row.get("obs_id", len(observations) + 1)),
                cell_lines=tuple(
                    s for s in str(row.get("cell_line", "")).split(";") if s
                ),
                perturbation=Perturbation(
                    drug=str(row.get("treatment", "")),
                    target=str(row["target"]),
                    sign=pert_sign,
                ),
                readout=Readout(
                    entity=str(row["readout_entity"]),
                    antibody=row.get("antibody") or None,
                ),
                expected=Directional(-1 if fold < 1 else +1),
                fold_change=fold,
            )
        )
    return observations


OBSERVATION_COLUMNS = [
    "obs_id",
    "treatment",
    "dose",
    "is_single_drug",
    "target",
    "antibody",
    "readout_entity",
    "fold_change",
    "cell_line",
]


def read_observation_csv(path: Union[str, Path]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# Sign propagation


def _resolve_edges(
    model: MechModel, path: Sequence[Union[str, ModelInteraction]]
) -> list[ModelInteraction]:
    return [e if isinstance(e, ModelInteraction) else model.edge(e) for e in path]


def orient_path(
    model: MechModel,
    path: Sequence[Union[str, ModelInteraction]],
    start: Optional[str] = None,
) -> list[tuple[ModelInteraction, str, str]]:
    """Resolve each edge of a connected walk to (edge, entry, exit) nodes.

    Binding edges may be traversed in either direction; everything else is
    directed. Raises DisconnectedPathError when consecutive edges do not
    share an endpoint (or the walk cannot begin at ``start``).
    """
    edges = _resolve_edges(model, path)
    if not edges:
        return []

    def attempt(first_reversed: bool):
        oriented = []
        current = start
        for i, edge in enumerate(edges):
            reversible = edge.kind is InteractionKind.BINDS
            if current is None:  # first edge fixes the walk direction
                entry, exit_ = (
                    (edge.target, edge.source) if first_reversed else (edge.source, edge.target)
                )
                if first_reversed and not reversible:
                    return None
            elif edge.source == current:
                entry, exit_ = edge.source, edge.target
            elif reversible and edge.target == current:
                entry, exit_ = edge.target, edge.source
            else:
                return None
            oriented.append((edge, entry, exit_))
            current = exit_
        return oriented

    result = attempt(first_reversed=False)
    if result is None and start is None:
        result = attempt(first_reversed=True)
    if result is None:
        raise DisconnectedPathError(
            f"path {[e.edge_id for e in edges]} is not a connected walk"
            + (f" from {start}" if start else "")
        )
    return result


def propagate_sign(
    model: MechModel,
    path: Sequence[Union[str, ModelInteraction]],
    perturbation_sign: int,
) -> int:
    """Predicted direction: perturbation sign times the product of edge signs.

    The empty path (readout is the drug target) returns the perturbation
    sign unchanged. Unsigned edges (translocation) cannot be crossed.
    """
    oriented = orient_path(model, path)
    sign = perturbation_sign
    for edge, _, _ in oriented:
        if edge.sign is None:
            raise UnsignedEdgeError(edge.edge_id)
        sign *= edge.sign
    return sign


# ---------------------------------------------------------------------------
# Explanations and verdicts


@dataclass(frozen=True)
class Explanation:
    observation_id: str
    model_id: str
    cell_line: str
    paths: tuple[tuple[str, ...], ...]
    narrative: Optional[str] = None
    predicted_sign: Optional[int] = None


class CriterionStatus(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"
    NEEDS_HUMAN_REVIEW = "NeedsHumanReview"


@dataclass(frozen=True)
class CriterionResult:
    status: CriterionStatus
    detail: str = ""


PASS = CriterionResult(CriterionStatus.PASS)


def fail(detail: str) -> CriterionResult:
    return CriterionResult(CriterionStatus.FAIL, detail)


def needs_review(detail: str) -> CriterionResult:
    return CriterionResult(CriterionStatus.NEEDS_HUMAN_REVIEW, detail)


class Plausibility(str, Enum):
    PLAUSIBLE = "Plausible"
    NOT_PLAUSIBLE = "NotPlausible"
    PENDING = "Pending"


CRITERIA = ("C1", "C2", "C3", "C4", "C5", "C6")


@dataclass(frozen=True)
class PlausibilityVerdict:
    criteria: dict[str, CriterionResult]

    @property
    def overall(self) -> Plausibility:
        statuses = [self.criteria[c].status for c in CRITERIA]
        if any(s is CriterionStatus.FAIL for s in statuses):
            return Plausibility.NOT_PLAUSIBLE
        if any(s is CriterionStatus.NEEDS_HUMAN_REVIEW for s in statuses):
            return Plausibility.PENDING
        return Plausibility.PLAUSIBLE

    def failed(self, criterion: str) -> bool:
        return self.criteria[criterion].status is CriterionStatus.FAIL

    def to_dict(self) -> dict:
        return {
            "overall": self.overall.value,
            "criteria": {
                c: {"status": r.status.value, "detail": r.detail}
                for c, r in sorted(self.criteria.items())
            },
        }


def _check_direction(
    model: MechModel,
    obs: Observation,
    expl: Explanation,
    paths: Sequence[Sequence[str]],
) -> CriterionResult:
    assert isinstance(obs.expected, Directional)
    signs: list[Optional[int]] = []
    for path in paths:
        try:
            signs.append(propagate_sign(model, path, obs.perturbation.sign))
        except UnsignedEdgeError as exc:
            signs.append(None)
            unsigned_detail = f"direction relies on unsigned edge {exc.edge_id}"
    computed = {s for s in signs if s is not None}
    if len(computed) > 1:
        return fail("explanation paths disagree on the predicted direction")
    if computed:
        predicted = next(iter(computed))
        if predicted != obs.expected.sign:
            return fail(
                f"predicted {predicted:+d} but observation shows {obs.expected.sign:+d}"
            )
        if None in signs:
            return needs_review(unsigned_detail)
        if expl.predicted_sign is not None and expl.predicted_sign != predicted:
            return needs_review(
                f"submission predicted {expl.predicted_sign:+d}, sign propagation gives {predicted:+d}"
            )
        return PASS
    return needs_review(unsigned_detail if signs else "no path to evaluate")


def _check_connectivity(
    model: MechModel, obs: Observation, paths: Sequence[Sequence[str]]
) -> CriterionResult:
    target = obs.perturbation.target
    readout = obs.readout.entity
    for path in paths:
        if not path:
            if readout != target:
                return fail("empty path but the readout is not the drug target")
            continue
        try:
            oriented = orient_path(model, path, start=target)
        except DisconnectedPathError as exc:
            return fail(str(exc))
        if oriented[-1][2] != readout:
            return fail(
                f"path ends at {oriented[-1][2]!r}, measured phosphoprotein is {readout!r}"
            )
    return PASS


def _check_commonsense(
    model: MechModel,
    paths: Sequence[Sequence[str]],
    roles: Mapping[str, frozenset[Role]],
) -> CriterionResult:
    pending: list[str] = []
    for path in paths:
        for edge_ref in path:
            edge = model.edge(edge_ref) if isinstance(edge_ref, str) else edge_ref
            needed = required_role(edge)
            if needed is None:
                continue
            entity_roles = roles.get(edge.source)
            if entity_roles is None:
                pending.append(f"{edge.source} role unknown ({needed.value} required)")
            elif needed not in entity_roles:
                return fail(f"{edge.source} is not a {needed.value} but edge {edge.edge_id} needs one")
    if pending:
        return needs_review("; ".join(sorted(set(pending))))
    return PASS


def _check_evidence(
    model: MechModel,
    paths: Sequence[Sequence[str]],
    evidence_reviews: Mapping[str, bool],
) -> CriterionResult:
    pending: list[str] = []
    for path in paths:
        for edge_ref in path:
            edge = model.edge(edge_ref) if isinstance(edge_ref, str) else edge_ref
            if not edge.provenance:
                return fail(f"edge {edge.edge_id} has no information source")
            if any(isinstance(p, (CuratedDatabase, ManualCuration)) for p in edge.provenance):
                continue
            # machine reading only: a reviewer must confirm the evidence
            confirmed = evidence_reviews.get(edge.edge_id)
            if confirmed is False:
                return fail(f"evidence for machine-read edge {edge.edge_id} does not support it")
            if confirmed is None:
                pending.append(edge.edge_id)
    if pending:
        return needs_review(
            "evidence support unconfirmed for edges: " + ", ".join(sorted(set(pending)))
        )
    return PASS


def _check_context(
    model: MechModel,
    context: Optional[CellContext],
    obs: Observation,
    paths: Sequence[Sequence[str]],
) -> CriterionResult:
    if context is None or not context.knockouts:
        return PASS
    nodes: set[str] = set()
    for path in paths:
        if not path:
            nodes.add(obs.perturbation.target)
            continue
        for edge, entry, exit_ in orient_path(model, path, start=obs.perturbation.target):
            nodes.update((entry, exit_))
    dead = sorted(nodes & context.knockouts)
    if dead:
        return fail(f"path uses knocked-out gene(s): {', '.join(dead)}")
    return PASS


def check_plausibility(
    model: MechModel,
    context: Optional[CellContext],
    obs: Observation,
    expl: Explanation,
    roles: Optional[Mapping[str, frozenset[Role]]] = None,
    evidence_reviews: Optional[Mapping[str, bool]] = None,
) -> PlausibilityVerdict:
    """Evaluate all six criteria for one explanation of one observation.

    Comparative observations must be decomposed (``subobservations``) and
    combined with ``combine_verdicts`` by the caller. ``evidence_reviews``
    carries resolved human confirmations per machine-read edge id. C6 is
    recorded as passing here and cross-checked over the whole submission
    by check_cell_line_consistency.
    """
    if expl.observation_id != obs.obs_id:
        raise UnknownObservationError(
            f"explanation is for {expl.observation_id!r}, checking {obs.obs_id!r}"
        )
    if isinstance(obs.expected, Comparative):
        raise ValueError("comparative observations must be decomposed before checking")

    paths: list[tuple[str, ...]] = list(expl.paths) or [()]
    for path in paths:  # surface unknown edges as errors, not verdicts
        for edge_ref in path:
            if isinstance(edge_ref, str):
                model.edge(edge_ref)

    role_table = roles if roles is not None else model.role_table()
    reviews = evidence_reviews or {}

    try:
        c1 = _check_direction(model, obs, expl, paths)
    except DisconnectedPathError as exc:
        c1 = fail(str(exc))
    c2 = _check_connectivity(model, obs, paths)
    c3 = _check_commonsense(model, paths, role_table)
    c4 = _check_evidence(model, paths, reviews)
    try:
        c5 = _check_context(model, context, obs, paths)
    except DisconnectedPathError:
        c5 = fail("cannot resolve path nodes against the cell context")
    c6 = CriterionResult(CriterionStatus.PASS, "cross-checked over the submission")
    return PlausibilityVerdict(
        criteria={"C1": c1, "C2": c2, "C3": c3, "C4": c4, "C5": c5, "C6": c6}
    )


def combine_verdicts(verdicts: Sequence[PlausibilityVerdict]) -> PlausibilityVerdict:
    """Conjunction per criterion: fail dominates, then needs-review."""
    combined: dict[str, CriterionResult] = {}
    for criterion in CRITERIA:
        results = [v.criteria[criterion] for v in verdicts]
        failing = [r for r in results if r.status is CriterionStatus.FAIL]
        pending = [r for r in results if r.status is CriterionStatus.NEEDS_HUMAN_REVIEW]
        if failing:
            combined[criterion] = failing[0]
        elif pending:
            combined[criterion] = pending[0]
        else:
            combined[criterion] = PASS
    return PlausibilityVerdict(criteria=combined)


def apply_cross_check(
    verdict: PlausibilityVerdict, violation_detail: Optional[str]
) -> PlausibilityVerdict:
    """Fold a cell-line consistency violation into C6."""
    if violation_detail is None:
        return verdict
    criteria = dict(verdict.criteria)
    criteria["C6"] = fail(violation_detail)
    return PlausibilityVerdict(criteria=criteria)


# ---------------------------------------------------------------------------
# Cross-observation consistency (C6)


@dataclass(frozen=True)
class ConsistencyViolation:
    cell_line: str
    kind: str  # "model_mismatch" | "sign_contradiction"
    detail: str
    explanation_ids: tuple[str, ...]


def check_cell_line_consistency(
    explanations: Sequence[Explanation],
    models: Optional[Mapping[str, MechModel]] = None,
) -> list[ConsistencyViolation]:
    """All explanations within a cell line must use one model network.

    Also flags the same edge id resolving to contradictory signs across
    the models used in one cell line (only when models are supplied).
    """
    violations: list[ConsistencyViolation] = []
    by_cell: dict[str, list[Explanation]] = {}
    for expl in explanations:
        by_cell.setdefault(expl.cell_line, []).append(expl)

    for cell_line in sorted(by_cell):
        group = by_cell[cell_line]
        for i, first in enumerate(group):
            for second in group[i + 1 :]:
                if first.model_id != second.model_id:
                    violations.append(
                        ConsistencyViolation(
                            cell_line=cell_line,
                            kind="model_mismatch",
                            detail=f"models {first.model_id!r} and {second.model_id!r} both used in {cell_line}",
                            explanation_ids=(first.observation_id, second.observation_id),
                        )
                    )
        if models is None:
            continue
        edge_signs: dict[str, dict[int, list[str]]] = {}
        for expl in group:
            model = models.get(expl.model_id)
            if model is None:
                continue
            for path in expl.paths:
                for edge_id in path:
                    if not model.has_edge(edge_id):
                        continue
                    sign = model.edge(edge_id).sign
                    if sign is None:
                        continue
                    edge_signs.setdefault(edge_id, {}).setdefault(sign, []).append(
                        expl.observation_id
                    )
        for edge_id, signs in sorted(edge_signs.items()):
            if len(signs) > 1:
                users = tuple(sorted({obs for group_ in signs.values() for obs in group_}))
                violations.append(
                    ConsistencyViolation(
                        cell_line=cell_line,
                        kind="sign_contradiction",
                        detail=f"edge {edge_id} used with both signs in {cell_line}",
                        explanation_ids=users,
                    )
                )
    return violations


# ---------------------------------------------------------------------------
# Results grid


class CellState(str, Enum):
    SUPPORTED = "Supported"
    UNSUPPORTED = "Unsupported"
    INCORRECT_PREDICTION = "IncorrectPrediction"
    NOT_ATTEMPTED = "NotAttempted"


@dataclass
class ResultsGrid:
    observations: list[str]
    cells: dict[str, dict[str, CellState]]  # submission -> obs -> state
    plausible_counts: dict[str, int]
    collective_coverage: dict[str, bool]

    @property
    def collectively_covered(self) -> int:
        return sum(1 for covered in self.collective_coverage.values() if covered)

    def to_dict(self) -> dict:
        return {
            "observations": list(self.observations),
            "cells": {
                sub: {obs: state.value for obs, state in sorted(grid.items())}
                for sub, grid in sorted(self.cells.items())
            },
            "plausible_counts": dict(sorted(self.plausible_counts.items())),
            "collective_coverage": dict(sorted(self.collective_coverage.items())),
            "collectively_covered": self.collectively_covered,
        }


def summarize_results_grid(
    verdicts: Mapping[str, Mapping[str, Optional[PlausibilityVerdict]]],
    observations: Optional[Sequence[str]] = None,
) -> ResultsGrid:
    """Submission-by-observation grid of plausibility outcomes.

    A direction failure renders as an incorrect prediction; any other
    failure renders as an unsupported explanation. All verdicts must be
    resolved (no pending human reviews).
    """
    obs_ids = list(observations) if observations is not None else sorted(
        {obs for grid in verdicts.values() for obs in grid}
    )
    cells: dict[str, dict[str, CellState]] = {}
    counts: dict[str, int] = {}
    for submission in sorted(verdicts):
        row: dict[str, CellState] = {}
        count = 0
        for obs in obs_ids:
            verdict = verdicts[submission].get(obs)
            if verdict is None:
                row[obs] = CellState.NOT_ATTEMPTED
                continue
            if verdict.overall is Plausibility.PENDING:
                raise PendingVerdictsError(f"{submission}/{obs} still awaits human review")
            if verdict.overall is Plausibility.PLAUSIBLE:
                row[obs] = CellState.SUPPORTED
                count += 1
            elif verdict.failed("C1"):
                row[obs] = CellState.INCORRECT_PREDICTION
            else:
                row[obs] = CellState.UNSUPPORTED
        cells[submission] = row
        counts[submission] = count
    coverage = {
        obs: any(cells[sub].get(obs) is CellState.SUPPORTED for sub in cells) for obs in obs_ids
    }
    return ResultsGrid(
        observations=obs_ids,
        cells=cells,
        plausible_counts=counts,
        collective_coverage=coverage,
    )


# ---------------------------------------------------------------------------
# Explanation file format


def explanation_from_dict(doc: dict) -> Explanation:
    return Explanation(
        observation_id=str(doc["observation_id"]),
        model_id=str(doc["model_id"]),
        cell_line=str(doc.get("cell_line", "")),
        paths=tuple(tuple(str(e) for e in path) for path in doc.get("paths", [])),
        narrative=doc.get("narrative"),
        predicted_sign=doc.get("predicted_sign"),
    )


def explanation_to_dict(expl: Explanation) -> dict:
    return {
        "observation_id": expl.observation_id,
        "model_id": expl.model_id,
        "cell_line": expl.cell_line,
        "paths": [list(p) for p in expl.paths],
        "narrative": expl.narrative,
        "predicted_sign": expl.predicted_sign,
    }


def load_explanations(path: Union[str, Path]) -> list[Explanation]:
    import json

    doc = json.loads(Path(path).read_text("utf-8"))
    entries = doc["explanations"] if isinstance(doc, dict) else doc
    return [explanation_from_dict(e) for e in entries]
