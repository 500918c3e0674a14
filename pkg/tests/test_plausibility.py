import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mecheval.errors import (
    DisconnectedPathError,
    NonpositiveFoldError,
    PendingVerdictsError,
    UnknownEdgeError,
    UnsignedEdgeError,
)
from mecheval.model_graph import load_model
from mecheval.plausibility import (
    CellState,
    Comparative,
    CriterionStatus,
    Directional,
    Explanation,
    Observation,
    Perturbation,
    Plausibility,
    Readout,
    check_cell_line_consistency,
    check_plausibility,
    combine_verdicts,
    propagate_sign,
    select_observations,
    summarize_results_grid,
)

from helpers import (
    MACHINE_PROV,
    distractor_rows,
    model_doc,
    observation_row,
    rppa_observation_rows,
    RPPA_EXPECTED_SIGNS,
)


class TestSelectObservations:
    def test_selects_outside_band_single_drug_rows(self):
        rows = rppa_observation_rows() + distractor_rows()
        selected = select_observations(rows)
        assert [o.obs_id for o in selected] == [r["obs_id"] for r in rppa_observation_rows()]

    def test_signs_follow_fold_change(self):
        selected = select_observations(rppa_observation_rows())
        signs = {o.obs_id: o.expected.sign for o in selected}
        assert signs == RPPA_EXPECTED_SIGNS

    def test_decrease_example(self):
        rows = [observation_row("2", "AK 10", "AKT", "AKT_pS473_V", 0.140)]
        (obs,) = select_observations(rows)
        assert obs.expected == Directional(-1)
        assert obs.perturbation.target == "AKT"

    def test_increase_example(self):
        rows = [observation_row("7", "RO 7", "PKC", "GSK3a_b_pS21", 1.586)]
        (obs,) = select_observations(rows)
        assert obs.expected == Directional(+1)

    def test_in_band_rejected(self):
        rows = [observation_row("x", "AK 10", "AKT", "S6_pS235_V", 1.2)]
        assert select_observations(rows) == []

    def test_boundaries_rejected(self):
        for fold in (0.5, 1.5):
            rows = [observation_row("x", "AK 10", "AKT", "S6_pS235_V", fold)]
            assert select_observations(rows) == []

    def test_combination_treatments_rejected(self):
        rows = [observation_row("x", "AK+Tm", "AKT", "S6_pS235_V", 0.1, single=False)]
        assert select_observations(rows) == []

    def test_nonpositive_fold(self):
        rows = [observation_row("x", "AK 10", "AKT", "S6_pS235_V", 0.0)]
        with pytest.raises(NonpositiveFoldError):
            select_observations(rows)

    def test_directional_consistency_invariant(self):
        with pytest.raises(ValueError):
            Observation(
                obs_id="x",
                cell_lines=("SkMel-133",),
                perturbation=Perturbation(drug="AK", target="AKT"),
                readout=Readout(entity="S6"),
                expected=Directional(+1),
                fold_change=0.2,
            )


# ---------------------------------------------------------------------------
# Sign propagation

MTOR_CHAIN = model_doc(
    [
        (
            "m1",
            "mTOR",
            "adds_modification",
            "p70S6K",
            {"effect": "activating", "modification": {"modification": "phosphorylation"}},
        ),
        (
            "m2",
            "p70S6K",
            "adds_modification",
            "S6",
            {"effect": "activating", "modification": {"modification": "phosphorylation"}},
        ),
    ],
    roles={"mTOR": ["Kinase"], "p70S6K": ["Kinase"]},
    model_id="mtor-chain",
)


class TestPropagateSign:
    def test_mtor_chain_predicts_decreases(self):
        """Inhibiting the kinase at the top of an activating chain lowers
        phosphorylation downstream, matching folds 0.331 / 0.058 / 0.050."""
        model = load_model(MTOR_CHAIN)
        assert propagate_sign(model, ["m1"], -1) == -1  # p70S6K readout
        assert propagate_sign(model, ["m1", "m2"], -1) == -1  # S6 readout

    def test_empty_path_returns_perturbation_sign(self):
        model = load_model(MTOR_CHAIN)
        assert propagate_sign(model, [], -1) == -1
        assert propagate_sign(model, [], +1) == +1

    def test_one_inhibitory_edge_flips(self):
        doc = model_doc(
            [
                ("m1", "mTOR", "adds_modification", "p70S6K", {"effect": "activating"}),
                ("m2", "p70S6K", "decreases_amount", "S6"),
            ]
        )
        model = load_model(doc)
        assert propagate_sign(model, ["m1", "m2"], -1) == +1

    def test_translocation_is_unsigned(self):
        doc = model_doc(
            [("t1", "A", "translocates", "B", {"provenance": [MACHINE_PROV]})]
        )
        model = load_model(doc)
        with pytest.raises(UnsignedEdgeError):
            propagate_sign(model, ["t1"], -1)

    def test_disconnected_path(self):
        doc = model_doc(
            [("e1", "A", "increases_amount", "B"), ("e2", "C", "increases_amount", "D")]
        )
        model = load_model(doc)
        with pytest.raises(DisconnectedPathError):
            propagate_sign(model, ["e1", "e2"], -1)

    def test_unknown_edge(self):
        model = load_model(MTOR_CHAIN)
        with pytest.raises(UnknownEdgeError):
            propagate_sign(model, ["nope"], -1)

    def test_binds_traversable_backwards(self):
        doc = model_doc(
            [("b1", "B", "binds", "A"), ("e2", "B", "increases_amount", "C")]
        )
        model = load_model(doc)
        # walk A -> (b1 backwards) -> B -> C
        assert propagate_sign(model, ["b1", "e2"], -1) == -1

    def test_exhaustive_chain_oracle(self):
        """All +-1 edge assignments for chains up to length 6, both
        perturbation signs: the result equals the independent product."""
        for length in range(1, 7):
            for signs in itertools.product((+1, -1), repeat=length):
                edges = []
                for i, sign in enumerate(signs):
                    kind = "increases_amount" if sign == +1 else "decreases_amount"
                    edges.append((f"e{i}", f"N{i}", kind, f"N{i + 1}"))
                model = load_model(model_doc(edges))
                path = [f"e{i}" for i in range(length)]
                for pert in (+1, -1):
                    expected = pert
                    for s in signs:
                        expected *= s
                    assert propagate_sign(model, path, pert) == expected

    @given(st.lists(st.sampled_from([+1, -1]), min_size=1, max_size=6), st.integers(min_value=1, max_value=5))
    @settings(max_examples=50)
    def test_compositionality(self, signs, cut_point):
        split = min(cut_point, len(signs))
        edges = []
        for i, sign in enumerate(signs):
            kind = "increases_amount" if sign == +1 else "decreases_amount"
            edges.append((f"e{i}", f"N{i}", kind, f"N{i + 1}"))
        model = load_model(model_doc(edges))
        path = [f"e{i}" for i in range(len(signs))]
        whole = propagate_sign(model, path, -1)
        prefix = propagate_sign(model, path[:split], -1)
        suffix_product = 1
        for s in signs[split:]:
            suffix_product *= s
        assert whole == prefix * suffix_product


# ---------------------------------------------------------------------------
# Plausibility criteria

# Five-protein model: inhibiting A should lower phosphorylation of E via
# A -> B -> C -> E; a second branch B -> D carries an edge whose evidence
# does not hold up under review.
BRANCHED = model_doc(
    [
        ("eAB", "A", "increases_activity", "B", {"provenance": [MACHINE_PROV]}),
        ("eBC", "B", "increases_activity", "C", {"provenance": [MACHINE_PROV]}),
        (
            "eCE",
            "C",
            "adds_modification",
            "E",
            {
                "effect": "activating",
                "modification": {"modification": "phosphorylation"},
                "provenance": [MACHINE_PROV],
            },
        ),
        (
            "eBD",
            "B",
            "adds_modification",
            "D",
            {
                "effect": "activating",
                "modification": {"modification": "phosphorylation"},
                "provenance": [MACHINE_PROV],
            },
        ),
    ],
    roles={"C": ["Kinase"], "B": ["Kinase"]},
    contexts=[
        {"cell_line": "line-1", "knockouts": []},
        {"cell_line": "line-2", "knockouts": ["B"]},
    ],
    model_id="branched",
)

ALL_CONFIRMED = {"eAB": True, "eBC": True, "eCE": True, "eBD": True}


def observation(obs_id="obs1", readout="E", sign=-1, target="A"):
    return Observation(
        obs_id=obs_id,
        cell_lines=("line-1",),
        perturbation=Perturbation(drug="drug-x", target=target, sign=-1),
        readout=Readout(entity=readout),
        expected=Directional(sign),
    )


def explanation(paths, obs_id="obs1", model_id="branched", cell_line="line-1", **kwargs):
    return Explanation(
        observation_id=obs_id,
        model_id=model_id,
        cell_line=cell_line,
        paths=tuple(tuple(p) for p in paths),
        **kwargs,
    )


class TestCheckPlausibility:
    def setup_method(self):
        self.model = load_model(BRANCHED)
        self.context = self.model.contexts["line-1"]

    def test_supported_explanation_is_plausible(self):
        verdict = check_plausibility(
            self.model,
            self.context,
            observation(),
            explanation([["eAB", "eBC", "eCE"]]),
            evidence_reviews=ALL_CONFIRMED,
        )
        assert verdict.overall is Plausibility.PLAUSIBLE

    def test_unsupported_edge_fails_c4(self):
        verdict = check_plausibility(
            self.model,
            self.context,
            observation(obs_id="obs2", readout="D"),
            explanation([["eAB", "eBD"]], obs_id="obs2"),
            evidence_reviews={**ALL_CONFIRMED, "eBD": False},
        )
        assert verdict.overall is Plausibility.NOT_PLAUSIBLE
        assert verdict.failed("C4")

    def test_unreviewed_machine_edges_are_pending(self):
        verdict = check_plausibility(
            self.model, self.context, observation(), explanation([["eAB", "eBC", "eCE"]])
        )
        assert verdict.overall is Plausibility.PENDING
        assert verdict.criteria["C4"].status is CriterionStatus.NEEDS_HUMAN_REVIEW

    def test_curated_provenance_needs_no_review(self):
        doc = model_doc([("e1", "A", "increases_amount", "B")], model_id="curated")
        model = load_model(doc)
        verdict = check_plausibility(
            model,
            None,
            observation(readout="B"),
            explanation([["e1"]], model_id="curated"),
        )
        assert verdict.criteria["C4"].status is CriterionStatus.PASS

    def test_knocked_out_gene_fails_c5(self):
        verdict = check_plausibility(
            self.model,
            self.model.contexts["line-2"],
            observation(),
            explanation([["eAB", "eBC", "eCE"]], cell_line="line-2"),
            evidence_reviews=ALL_CONFIRMED,
        )
        assert verdict.overall is Plausibility.NOT_PLAUSIBLE
        assert verdict.failed("C5")
        assert "B" in verdict.criteria["C5"].detail

    def test_wrong_direction_fails_c1(self):
        verdict = check_plausibility(
            self.model,
            self.context,
            observation(sign=+1),
            explanation([["eAB", "eBC", "eCE"]]),
            evidence_reviews=ALL_CONFIRMED,
        )
        assert verdict.failed("C1")

    def test_disagreeing_paths_fail_c1(self):
        doc = model_doc(
            [
                ("up", "A", "increases_amount", "E"),
                ("down", "A", "decreases_amount", "E"),
            ],
            model_id="forked",
        )
        model = load_model(doc)
        verdict = check_plausibility(
            model,
            None,
            observation(),
            explanation([["up"], ["down"]], model_id="forked"),
        )
        assert verdict.failed("C1")
        assert "disagree" in verdict.criteria["C1"].detail

    def test_submitted_prediction_mismatch_needs_review(self):
        verdict = check_plausibility(
            self.model,
            self.context,
            observation(),
            explanation([["eAB", "eBC", "eCE"]], predicted_sign=+1),
            evidence_reviews=ALL_CONFIRMED,
        )
        assert verdict.criteria["C1"].status is CriterionStatus.NEEDS_HUMAN_REVIEW

    def test_path_not_reaching_readout_fails_c2(self):
        verdict = check_plausibility(
            self.model,
            self.context,
            observation(),
            explanation([["eAB", "eBC"]]),  # stops at C
            evidence_reviews=ALL_CONFIRMED,
        )
        assert verdict.failed("C2")

    def test_path_not_starting_at_target_fails_c2(self):
        verdict = check_plausibility(
            self.model,
            self.context,
            observation(),
            explanation([["eBC", "eCE"]]),  # starts at B, drug hits A
            evidence_reviews=ALL_CONFIRMED,
        )
        assert verdict.failed("C2")

    def test_empty_path_requires_readout_to_be_target(self):
        obs = observation(readout="A", target="A")
        verdict = check_plausibility(
            self.model, self.context, obs, explanation([[]]), evidence_reviews=ALL_CONFIRMED
        )
        assert verdict.criteria["C2"].status is CriterionStatus.PASS

        bad = check_plausibility(
            self.model,
            self.context,
            observation(),
            explanation([[]]),
            evidence_reviews=ALL_CONFIRMED,
        )
        assert bad.failed("C2")

    def test_phospho_by_non_kinase_fails_c3(self):
        doc = model_doc(
            [
                (
                    "e1",
                    "A",
                    "adds_modification",
                    "B",
                    {
                        "effect": "activating",
                        "modification": {"modification": "phosphorylation"},
                    },
                )
            ],
            roles={"A": ["Drug"]},
            model_id="nonkinase",
        )
        model = load_model(doc)
        verdict = check_plausibility(
            model, None, observation(readout="B"), explanation([["e1"]], model_id="nonkinase")
        )
        assert verdict.failed("C3")

    def test_unknown_role_needs_review(self):
        doc = model_doc(
            [
                (
                    "e1",
                    "A",
                    "adds_modification",
                    "B",
                    {
                        "effect": "activating",
                        "modification": {"modification": "phosphorylation"},
                    },
                )
            ],
            model_id="norole",
        )
        model = load_model(doc)
        verdict = check_plausibility(
            model,
            None,
            observation(readout="B"),
            explanation([["e1"]], model_id="norole"),
            roles={},
        )
        assert verdict.criteria["C3"].status is CriterionStatus.NEEDS_HUMAN_REVIEW

    def test_unknown_edge_is_an_error(self):
        with pytest.raises(UnknownEdgeError):
            check_plausibility(
                self.model, self.context, observation(), explanation([["ghost"]])
            )

    def test_missing_inputs_never_silently_pass(self):
        """Dropping the evidence reviews flips C4 away from Pass."""
        with_reviews = check_plausibility(
            self.model, self.context, observation(), explanation([["eAB", "eBC", "eCE"]]),
            evidence_reviews=ALL_CONFIRMED,
        )
        without = check_plausibility(
            self.model, self.context, observation(), explanation([["eAB", "eBC", "eCE"]])
        )
        assert with_reviews.criteria["C4"].status is CriterionStatus.PASS
        assert without.criteria["C4"].status is not CriterionStatus.PASS


class TestComparative:
    def test_decomposition(self):
        obs = Observation(
            obs_id="F5",
            cell_lines=("RVH421", "C32"),
            perturbation=Perturbation(drug="AZ628", target="RAF"),
            readout=Readout(entity="c-Jun"),
            expected=Comparative((("RVH421", +1), ("C32", -1))),
        )
        subs = obs.subobservations()
        assert [(s.obs_id, s.expected.sign) for s in subs] == [("F5/RVH421", 1), ("F5/C32", -1)]

    def test_verdict_is_conjunction(self):
        model = load_model(BRANCHED)
        good = check_plausibility(
            model,
            model.contexts["line-1"],
            observation(),
            explanation([["eAB", "eBC", "eCE"]]),
            evidence_reviews=ALL_CONFIRMED,
        )
        bad = check_plausibility(
            model,
            model.contexts["line-2"],
            observation(),
            explanation([["eAB", "eBC", "eCE"]], cell_line="line-2"),
            evidence_reviews=ALL_CONFIRMED,
        )
        combined = combine_verdicts([good, bad])
        assert combined.overall is Plausibility.NOT_PLAUSIBLE
        assert combined.failed("C5")
        assert combine_verdicts([good, good]).overall is Plausibility.PLAUSIBLE


class TestCellLineConsistency:
    def test_same_model_no_violation(self):
        a = explanation([["eAB"]], obs_id="o1")
        b = explanation([["eBC"]], obs_id="o2")
        assert check_cell_line_consistency([a, b]) == []

    def test_different_models_violate(self):
        a = explanation([["eAB"]], obs_id="o1", model_id="m-one")
        b = explanation([["eBC"]], obs_id="o2", model_id="m-two")
        violations = check_cell_line_consistency([a, b])
        assert len(violations) == 1
        assert violations[0].kind == "model_mismatch"

    def test_different_cell_lines_are_independent(self):
        a = explanation([["eAB"]], obs_id="o1", model_id="m-one", cell_line="line-1")
        b = explanation([["eBC"]], obs_id="o2", model_id="m-two", cell_line="line-2")
        assert check_cell_line_consistency([a, b]) == []

    def test_empty(self):
        assert check_cell_line_consistency([]) == []

    def test_sign_contradiction_across_model_versions(self):
        v1 = load_model(model_doc([("e1", "A", "increases_amount", "B")], model_id="v1"))
        v2 = load_model(model_doc([("e1", "A", "decreases_amount", "B")], model_id="v2"))
        a = explanation([["e1"]], obs_id="o1", model_id="v1")
        b = explanation([["e1"]], obs_id="o2", model_id="v2")
        violations = check_cell_line_consistency([a, b], models={"v1": v1, "v2": v2})
        kinds = {v.kind for v in violations}
        assert "sign_contradiction" in kinds


class TestResultsGrid:
    def _verdict(self, c1="Pass", c4="Pass"):
        from mecheval.plausibility import CriterionResult, PlausibilityVerdict

        criteria = {
            c: CriterionResult(CriterionStatus.PASS) for c in ("C1", "C2", "C3", "C4", "C5", "C6")
        }
        criteria["C1"] = CriterionResult(CriterionStatus(c1))
        criteria["C4"] = CriterionResult(CriterionStatus(c4))
        return PlausibilityVerdict(criteria=criteria)

    def test_counts_and_coverage(self):
        grid = summarize_results_grid(
            {
                "sub-1": {"o1": self._verdict(), "o2": self._verdict(c4="Fail")},
                "sub-2": {"o1": None, "o2": self._verdict()},
            }
        )
        assert grid.plausible_counts == {"sub-1": 1, "sub-2": 1}
        assert grid.cells["sub-1"]["o2"] is CellState.UNSUPPORTED
        assert grid.cells["sub-2"]["o1"] is CellState.NOT_ATTEMPTED
        assert grid.collective_coverage == {"o1": True, "o2": True}
        assert grid.collectively_covered == 2

    def test_direction_failure_is_incorrect_prediction(self):
        grid = summarize_results_grid({"sub-1": {"o1": self._verdict(c1="Fail")}})
        assert grid.cells["sub-1"]["o1"] is CellState.INCORRECT_PREDICTION

    def test_pending_verdicts_refuse_to_summarize(self):
        with pytest.raises(PendingVerdictsError):
            summarize_results_grid({"sub-1": {"o1": self._verdict(c4="NeedsHumanReview")}})

    def test_empty_grid(self):
        grid = summarize_results_grid({})
        assert grid.cells == {} and grid.plausible_counts == {}
