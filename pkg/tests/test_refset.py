import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mecheval.cards import (
    ComplexParticipant,
    EmbeddedInteraction,
    InteractionKind,
    card_signature,
    interaction_signature,
)
from mecheval.errors import TooFewCuratorsError
from mecheval.refset import (
    CuratorEntry,
    ReferenceCategory,
    ReferenceInteraction,
    expand_all,
    expand_embedded,
    load_refset,
    merge_consensus,
    refset_table,
    write_refset,
)

from helpers import binds, entity, interaction, phosphorylates


def curator_entry(interaction, paper="p1", category=ReferenceCategory.DIRECT_PHOSPHO_BIND):
    return CuratorEntry(paper_id=paper, interaction=interaction, category=category)


GRB7 = binds("Grb7", "EphB1").interaction
JAK3 = phosphorylates("JAK3", "HuR").interaction
MTOR = phosphorylates("mTOR", "p70S6K").interaction


class TestMergeConsensus:
    def test_two_of_three_included(self):
        sets = {
            "mp": [curator_entry(GRB7), curator_entry(JAK3)],
            "tk": [curator_entry(GRB7)],
            "cg": [curator_entry(MTOR)],
        }
        refs = merge_consensus(sets)
        assert len(refs) == 1
        assert refs[0].found_by == frozenset({"mp", "tk"})
        assert interaction_signature(refs[0].interaction) == interaction_signature(GRB7)

    def test_one_of_three_excluded(self):
        sets = {"mp": [curator_entry(JAK3)], "tk": [], "cg": []}
        assert merge_consensus(sets) == []

    def test_identical_sets_idempotent(self):
        entries = [curator_entry(GRB7), curator_entry(JAK3)]
        refs = merge_consensus({"mp": entries, "tk": entries, "cg": entries})
        assert len(refs) == 2
        assert all(ref.found_by == frozenset({"mp", "tk", "cg"}) for ref in refs)

    def test_symmetric_binds_counts_as_agreement(self):
        sets = {
            "mp": [curator_entry(binds("Grb7", "EphB1").interaction)],
            "tk": [curator_entry(binds("EphB1", "Grb7").interaction)],
        }
        assert len(merge_consensus(sets)) == 1

    def test_too_few_curators(self):
        with pytest.raises(TooFewCuratorsError):
            merge_consensus({"mp": [curator_entry(GRB7)]})

    def test_non_salient_entries_ignored(self):
        entry = CuratorEntry(
            paper_id="p1",
            interaction=GRB7,
            category=ReferenceCategory.DIRECT_PHOSPHO_BIND,
            salient=False,
        )
        assert merge_consensus({"mp": [entry], "tk": [entry]}) == []

    def test_order_invariant_in_curator_sets(self):
        sets = {
            "mp": [curator_entry(GRB7), curator_entry(JAK3)],
            "tk": [curator_entry(JAK3), curator_entry(MTOR)],
            "cg": [curator_entry(MTOR), curator_entry(GRB7)],
        }
        reordered = {k: sets[k] for k in ["cg", "tk", "mp"]}
        a = merge_consensus(sets)
        b = merge_consensus(reordered)
        assert [(r.ref_id, r.found_by) for r in a] == [(r.ref_id, r.found_by) for r in b]

    @given(st.integers(min_value=2, max_value=5))
    @settings(max_examples=10)
    def test_anti_monotone_in_min_agreement(self, threshold):
        sets = {
            "c1": [curator_entry(GRB7), curator_entry(JAK3), curator_entry(MTOR)],
            "c2": [curator_entry(GRB7), curator_entry(JAK3)],
            "c3": [curator_entry(GRB7)],
        }
        lower = merge_consensus(sets, min_agreement=threshold)
        higher = merge_consensus(sets, min_agreement=threshold + 1)
        lower_keys = {interaction_signature(r.interaction) for r in lower}
        higher_keys = {interaction_signature(r.interaction) for r in higher}
        assert higher_keys <= lower_keys


class TestExpandEmbedded:
    def _ref(self, interaction, category):
        return ReferenceInteraction(
            ref_id="r1",
            paper_id="p1",
            interaction=interaction,
            category=category,
            found_by=frozenset({"mp", "tk"}),
        )

    def test_direct_is_identity(self):
        ref = self._ref(GRB7, ReferenceCategory.DIRECT_PHOSPHO_BIND)
        assert expand_embedded(ref) == [ref]

    def test_indirect_embeds_component(self):
        # A increases [B phosphorylates C]
        composite = interaction(
            "A",
            InteractionKind.INCREASES_AMOUNT,
            EmbeddedInteraction(phosphorylates("B", "C").interaction),
        )
        ref = self._ref(composite, ReferenceCategory.INDIRECT)
        expanded = expand_embedded(ref)
        assert len(expanded) == 2
        component = expanded[1]
        assert interaction_signature(component.interaction) == interaction_signature(
            phosphorylates("B", "C").interaction
        )
        assert component.category is ReferenceCategory.DIRECT_PHOSPHO_BIND
        assert expanded[0].components == (component.ref_id,)

    def test_complex_actor_decomposes_into_binds_plus_action(self):
        # A when bound to B phosphorylates C
        composite = interaction(["A", "B"], InteractionKind.ADDS_MODIFICATION, "C")
        ref = self._ref(composite, ReferenceCategory.COMPLEX_COMPOSITE)
        expanded = expand_embedded(ref)
        signatures = {interaction_signature(e.interaction) for e in expanded[1:]}
        assert signatures == {
            interaction_signature(binds("A", "B").interaction),
            interaction_signature(phosphorylates("A", "C").interaction),
        }

    def test_expand_all_drops_duplicates(self):
        composite = interaction(
            "A",
            InteractionKind.INCREASES_AMOUNT,
            EmbeddedInteraction(phosphorylates("B", "C").interaction),
        )
        refs = [
            self._ref(composite, ReferenceCategory.INDIRECT),
            ReferenceInteraction(
                ref_id="r2",
                paper_id="p1",
                interaction=phosphorylates("B", "C").interaction,
                category=ReferenceCategory.DIRECT_PHOSPHO_BIND,
                found_by=frozenset({"mp", "cg"}),
            ),
        ]
        expanded = expand_all(refs)
        # r2 duplicates the composite's component and is dropped
        assert [e.ref_id for e in expanded] == ["r1", "r1.c1"]


class TestRefsetFiles:
    def test_roundtrip(self, tmp_path):
        refs = merge_consensus(
            {
                "mp": [curator_entry(GRB7), curator_entry(JAK3)],
                "tk": [curator_entry(GRB7), curator_entry(JAK3)],
            }
        )
        path = tmp_path / "refset.json"
        write_refset(refs, path)
        loaded = load_refset(path)
        assert [(r.ref_id, r.paper_id, r.category) for r in loaded] == [
            (r.ref_id, r.paper_id, r.category) for r in refs
        ]
        assert [interaction_signature(r.interaction) for r in loaded] == [
            interaction_signature(r.interaction) for r in refs
        ]

    def test_found_by_all_fraction_is_computable(self):
        from fractions import Fraction

        from mecheval.refset import found_by_all_fraction

        refs = merge_consensus(
            {
                "mp": [curator_entry(GRB7), curator_entry(JAK3)],
                "tk": [curator_entry(GRB7), curator_entry(JAK3)],
                "cg": [curator_entry(GRB7)],
            }
        )
        assert found_by_all_fraction(refs, n_curators=3) == Fraction(1, 2)

    def test_table_export(self):
        ref = ReferenceInteraction(
            ref_id="r1",
            paper_id="p1",
            interaction=GRB7,
            category=ReferenceCategory.DIRECT_PHOSPHO_BIND,
            found_by=frozenset({"tk", "mp"}),
        )
        rows = refset_table([ref])
        assert rows[0][0] == "ref_id"
        assert rows[1] == ["r1", "p1", "direct_phospho_bind", "grb7", "binds", "ephb1", "mp,tk"]
