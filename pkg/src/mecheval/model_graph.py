"""Signed, typed mechanistic interaction graphs with per-edge provenance.

Each interaction carries a sign derived purely from its kind plus an
optional activating/deactivating annotation: increases of amount or
activity and activating modifications are +1; decreases, deactivating
modifications, and modification-inhibition are -1. Unannotated
phosphorylation defaults to activating (+1) with a warning, since plain
phosphorylation is conventionally drawn as activating. Translocation
carries no sign and is excluded from sign propagation. Binding defaults
to +1 (complex formation treated as enabling) unless annotated otherwise.

Models are immutable after load and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Union

from .cards import Feature, Grounding, InteractionKind, Namespace, _parse_feature
from .errors import (
    ErrorCode,
    ModelValidationError,
    UnknownEntityError,
    ValidationError,
    bad_enum,
    missing,
)


class Role(str, Enum):
    KINASE = "Kinase"
    PHOSPHATASE = "Phosphatase"
    TRANSCRIPTION_FACTOR = "TranscriptionFactor"
    DRUG = "Drug"
    OTHER = "Other"


@dataclass(frozen=True)
class ModelEntity:
    entity_id: str
    name: str
    grounding: Optional[Grounding] = None
    roles: frozenset[Role] = frozenset()


@dataclass(frozen=True)
class MachineReading:
    kind = "machine_reading"
    doc_id: str
    evidence: tuple[str, ...]
    reader: Optional[str] = None


@dataclass(frozen=True)
class CuratedDatabase:
    kind = "curated_database"
    db: str
    record_id: str = ""


@dataclass(frozen=True)
class ManualCuration:
    kind = "manual_curation"
    curator: str
    note: str = ""


Provenance = Union[MachineReading, CuratedDatabase, ManualCuration]

SIGNED_KIND_SIGNS = {
    InteractionKind.INCREASES_AMOUNT: +1,
    InteractionKind.INCREASES_ACTIVITY: +1,
    InteractionKind.DECREASES_AMOUNT: -1,
    InteractionKind.DECREASES_ACTIVITY: -1,
    InteractionKind.INHIBITS_MODIFICATION: -1,
}


def derive_sign(kind: InteractionKind, effect: Optional[str]) -> Optional[int]:
    """Edge sign from kind + annotation; None for translocation."""
    if kind is InteractionKind.TRANSLOCATES:
        return None
    if kind in SIGNED_KIND_SIGNS:
        return SIGNED_KIND_SIGNS[kind]
    # adds_modification and binds take the annotation, defaulting to +1
    if effect == "deactivating":
        return -1
    return +1


@dataclass(frozen=True)
class ModelInteraction:
    edge_id: str
    source: str
    target: str
    kind: InteractionKind
    provenance: tuple[Provenance, ...]
    sign: Optional[int] = None
    effect: Optional[str] = None  # "activating" | "deactivating"
    modification: Optional[Feature] = None

    @property
    def signed(self) -> bool:
        return self.sign is not None


def required_role(edge: ModelInteraction) -> Optional[Role]:
    """Role the source entity must hold for the edge to make biological sense."""
    mod = (edge.modification.modification or "" if edge.modification else "").casefold()
    if edge.kind is InteractionKind.ADDS_MODIFICATION:
        if "dephospho" in mod:
            return Role.PHOSPHATASE
        if "phospho" in mod:
            return Role.KINASE
    if edge.kind is InteractionKind.INHIBITS_MODIFICATION and "phospho" in mod:
        return Role.PHOSPHATASE
    return None


@dataclass(frozen=True)
class CellContext:
    cell_line: str
    knockouts: frozenset[str] = frozenset()
    mutations: tuple[tuple[str, str], ...] = ()  # (entity id, description)
    expression: Optional[tuple[tuple[str, str], ...]] = None


@dataclass
class MechModel:
    model_id: str
    entities: dict[str, ModelEntity]
    interactions: list[ModelInteraction]
    contexts: dict[str, CellContext] = field(default_factory=dict)
    warnings: list[ValidationError] = field(default_factory=list)

    def __post_init__(self):
        self._by_id = {e.edge_id: e for e in self.interactions}
        self._out: dict[str, list[ModelInteraction]] = {}
        for edge in self.interactions:
            self._out.setdefault(edge.source, []).append(edge)

    def edge(self, edge_id: str) -> ModelInteraction:
        from .errors import UnknownEdgeError

        if edge_id not in self._by_id:
            raise UnknownEdgeError(edge_id)
        return self._by_id[edge_id]

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._by_id

    def outgoing(self, entity_id: str) -> list[ModelInteraction]:
        return list(self._out.get(entity_id, ()))

    def role_table(self) -> dict[str, frozenset[Role]]:
        return {e.entity_id: e.roles for e in self.entities.values()}


def edges_between(model: MechModel, source: str, target: str) -> list[ModelInteraction]:
    """Directed edges source->target; binding edges count in both directions."""
    for entity in (source, target):
        if entity not in model.entities:
            raise UnknownEntityError(entity)
    out = [e for e in model.outgoing(source) if e.target == target]
    out += [
        e
        for e in model.outgoing(target)
        if e.target == source and e.kind is InteractionKind.BINDS
    ]
    return out


# ---------------------------------------------------------------------------
# Loading / serialization


def _parse_provenance(doc, path: str, errors: list[ValidationError]) -> Optional[Provenance]:
    if not isinstance(doc, dict):
        errors.append(
            ValidationError(ErrorCode.MALFORMED_DOCUMENT, path, "provenance must be an object")
        )
        return None
    kind = doc.get("kind")
    if kind == "machine_reading":
        evidence = tuple(str(s) for s in doc.get("evidence") or ())
        if not evidence:
            errors.append(
                ValidationError(
                    ErrorCode.MISSING_PROVENANCE,
                    f"{path}.evidence",
                    "machine-read provenance needs at least one evidence sentence",
                )
            )
            return None
        return MachineReading(
            doc_id=str(doc.get("doc_id", "")), evidence=evidence, reader=doc.get("reader")
        )
    if kind == "curated_database":
        if not doc.get("db"):
            errors.append(missing(f"{path}.db"))
            return None
        return CuratedDatabase(db=str(doc["db"]), record_id=str(doc.get("record_id", "")))
    if kind == "manual_curation":
        if not doc.get("curator"):
            errors.append(missing(f"{path}.curator"))
            return None
        return ManualCuration(curator=str(doc["curator"]), note=str(doc.get("note", "")))
    errors.append(
        bad_enum(f"{path}.kind", kind, ["machine_reading", "curated_database", "manual_curation"])
    )
    return None


def load_model(source: Union[str, Path, dict]) -> MechModel:
    """Load a model document; raises ModelValidationError with every violation."""
    if isinstance(source, (str, Path)):
        doc = json.loads(Path(source).read_text("utf-8"))
    else:
        doc = source

    errors: list[ValidationError] = []
    warnings: list[ValidationError] = []

    entities: dict[str, ModelEntity] = {}
    for i, raw in enumerate(doc.get("entities") or []):
        path = f"entities[{i}]"
        entity_id = raw.get("entity_id") or raw.get("name")
        if not entity_id:
            errors.append(missing(f"{path}.entity_id"))
            continue
        if entity_id in entities:
            errors.append(
                ValidationError(ErrorCode.DUPLICATE_ID, path, f"duplicate entity id {entity_id!r}")
            )
            continue
        roles = set()
        for raw_role in raw.get("roles") or []:
            try:
                roles.add(Role(raw_role))
            except ValueError:
                errors.append(bad_enum(f"{path}.roles", raw_role, [r.value for r in Role]))
        grounding = None
        if raw.get("grounding"):
            try:
                grounding = Grounding(
                    namespace=Namespace(raw["grounding"].get("namespace")),
                    identifier=str(raw["grounding"].get("identifier", "")),
                )
            except ValueError:
                errors.append(
                    bad_enum(
                        f"{path}.grounding.namespace",
                        raw["grounding"].get("namespace"),
                        [n.value for n in Namespace],
                    )
                )
        entities[str(entity_id)] = ModelEntity(
            entity_id=str(entity_id),
            name=str(raw.get("name", entity_id)),
            grounding=grounding,
            roles=frozenset(roles),
        )

    interactions: list[ModelInteraction] = []
    seen_edges: set[str] = set()
    for i, raw in enumerate(doc.get("interactions") or []):
        path = f"interactions[{i}]"
        edge_id = str(raw.get("edge_id") or f"e{i + 1}")
        if edge_id in seen_edges:
            errors.append(
                ValidationError(ErrorCode.DUPLICATE_ID, path, f"duplicate edge id {edge_id!r}")
            )
            continue
        seen_edges.add(edge_id)
        try:
            kind = InteractionKind(raw.get("kind"))
        except ValueError:
            errors.append(bad_enum(f"{path}.kind", raw.get("kind"), [k.value for k in InteractionKind]))
            continue
        source_id = str(raw.get("source", ""))
        target_id = str(raw.get("target", ""))
        for endpoint in (source_id, target_id):
            if endpoint not in entities:
                errors.append(
                    ValidationError(
                        ErrorCode.DANGLING_ENDPOINT,
                        path,
                        f"edge {edge_id} references unknown entity {endpoint!r}",
                    )
                )
        provenance: list[Provenance] = []
        for j, raw_prov in enumerate(raw.get("provenance") or []):
            parsed = _parse_provenance(raw_prov, f"{path}.provenance[{j}]", errors)
            if parsed is not None:
                provenance.append(parsed)
        if not raw.get("provenance"):
            errors.append(
                ValidationError(
                    ErrorCode.MISSING_PROVENANCE,
                    path,
                    f"edge {edge_id} must have an information source",
                )
            )
        effect = raw.get("effect")
        if effect not in (None, "activating", "deactivating"):
            errors.append(bad_enum(f"{path}.effect", effect, ["activating", "deactivating"]))
            effect = None
        sign = derive_sign(kind, effect)
        if kind is InteractionKind.ADDS_MODIFICATION and effect is None:
            warnings.append(
                ValidationError(
                    ErrorCode.UNSIGNED_DEFAULT,
                    path,
                    f"edge {edge_id}: unannotated modification treated as activating",
                    severity="warning",
                )
            )
        if raw.get("sign") is not None and raw["sign"] != sign:
            errors.append(
                ValidationError(
                    ErrorCode.SIGN_MISMATCH,
                    f"{path}.sign",
                    f"declared sign {raw['sign']} but kind/effect derive {sign}",
                )
            )
        modification = None
        if raw.get("modification") is not None:
            from .cards import _Collector

            col = _Collector()
            modification = _parse_feature(raw["modification"], f"{path}.modification", col)
            errors.extend(col.errors)
            warnings.extend(col.warnings)
        interactions.append(
            ModelInteraction(
                edge_id=edge_id,
                source=source_id,
                target=target_id,
                kind=kind,
                provenance=tuple(provenance),
                sign=sign,
                effect=effect,
                modification=modification,
            )
        )

    contexts: dict[str, CellContext] = {}
    for i, raw in enumerate(doc.get("contexts") or []):
        path = f"contexts[{i}]"
        cell_line = raw.get("cell_line")
        if not cell_line:
            errors.append(missing(f"{path}.cell_line"))
            continue
        knockouts = frozenset(str(k) for k in raw.get("knockouts") or ())
        for ko in sorted(knockouts):
            if ko not in entities:
                errors.append(
                    ValidationError(
                        ErrorCode.DANGLING_ENDPOINT,
                        f"{path}.knockouts",
                        f"knockout {ko!r} is not a model entity",
                    )
                )
        contexts[str(cell_line)] = CellContext(
            cell_line=str(cell_line),
            knockouts=knockouts,
            mutations=tuple(
                (str(m.get("entity", "")), str(m.get("description", "")))
                for m in raw.get("mutations") or ()
            ),
            expression=(
                tuple(sorted((str(k), str(v)) for k, v in raw["expression"].items()))
                if raw.get("expression")
                else None
            ),
        )

    if errors:
        raise ModelValidationError(errors)
    return MechModel(
        model_id=str(doc.get("model_id", "model")),
        entities=entities,
        interactions=interactions,
        contexts=contexts,
        warnings=warnings,
    )


def _provenance_to_dict(p: Provenance) -> dict:
    if isinstance(p, MachineReading):
        return {
            "kind": p.kind,
            "doc_id": p.doc_id,
            "evidence": list(p.evidence),
            "reader": p.reader,
        }
    if isinstance(p, CuratedDatabase):
        return {"kind": p.kind, "db": p.db, "record_id": p.record_id}
    return {"kind": p.kind, "curator": p.curator, "note": p.note}


def model_to_dict(model: MechModel) -> dict:
    from .cards import _feature_to_dict

    return {
        "model_id": model.model_id,
        "entities": [
            {
                "entity_id": e.entity_id,
                "name": e.name,
                "grounding": (
                    {"namespace": e.grounding.namespace.value, "identifier": e.grounding.identifier}
                    if e.grounding
                    else None
                ),
                "roles": sorted(r.value for r in e.roles),
            }
            for e in model.entities.values()
        ],
        "interactions": [
            {
                "edge_id": e.edge_id,
                "source": e.source,
                "target": e.target,
                "kind": e.kind.value,
                "effect": e.effect,
                "sign": e.sign,
                "modification": _feature_to_dict(e.modification) if e.modification else None,
                "provenance": [_provenance_to_dict(p) for p in e.provenance],
            }
            for e in model.interactions
        ],
        "contexts": [
            {
                "cell_line": c.cell_line,
                "knockouts": sorted(c.knockouts),
                "mutations": [{"entity": m[0], "description": m[1]} for m in c.mutations],
                "expression": dict(c.expression) if c.expression else None,
            }
            for c in model.contexts.values()
        ],
    }


def write_model(model: MechModel, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2, sort_keys=True), "utf-8")
