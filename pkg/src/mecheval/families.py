"""Interaction-type equivalence families.

Near-equivalent interaction types count as the same family when matching
candidate cards against gold cards: adds-modification, increases/decreases
of a modified form, and increases/decreases activity all describe the same
underlying event at different levels of directness, so they live in one
family. Binding and translocation stand alone (and allow participant
swapping); plain amount changes form their own family.

The table is configuration data, not code: evaluations with different
notions of "close enough" ship their own table file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

MODIFIED_SUFFIX = "[modified]"


@dataclass(frozen=True)
class Family:
    name: str
    members: frozenset[str]
    symmetric: bool = False


class EquivalenceTable:
    """Maps member keys (kind token, optionally ``[modified]``) to families."""

    def __init__(self, families: list[Family], version: str = "unversioned"):
        self.version = version
        self.families = list(families)
        self._by_member: dict[str, Family] = {}
        for fam in self.families:
            for member in fam.members:
                if member in self._by_member:
                    raise ValueError(f"member {member!r} appears in more than one family")
                self._by_member[member] = fam

    def family_of(self, kind: str, modified_form: bool = False) -> Family:
        """Family for an interaction kind.

        ``modified_form`` selects the ``kind[modified]`` member when the table
        defines one (increases-amount of a phosphorylated form matches the
        modification family, plain increases-amount does not).
        """
        if modified_form:
            fam = self._by_member.get(kind + MODIFIED_SUFFIX)
            if fam is not None:
                return fam
        fam = self._by_member.get(kind)
        if fam is None:
            # Unlisted kinds are their own singleton family.
            return Family(name=kind, members=frozenset([kind]))
        return fam

    def is_symmetric(self, kind: str) -> bool:
        return self.family_of(kind).symmetric

    @classmethod
    def from_dict(cls, doc: dict) -> "EquivalenceTable":
        families = [
            Family(
                name=f["name"],
                members=frozenset(f["members"]),
                symmetric=bool(f.get("symmetric", False)),
            )
            for f in doc.get("families", [])
        ]
        return cls(families, version=str(doc.get("version", "unversioned")))

    @classmethod
    def from_file(cls, path: str | Path) -> "EquivalenceTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def default_table() -> EquivalenceTable:
    """The shipped default table."""
    text = resources.files("mecheval.data").joinpath("equivalence_families.json").read_text("utf-8")
    return EquivalenceTable.from_dict(json.loads(text))


DEFAULT_TABLE = default_table()
