"""Signed models, observation selection, and plausibility checking.

Observations worth explaining are single-drug perturbations with a fold
change outside (0.5, 1.5); the fold's side of 1 fixes the expected
direction. An explanation is a path of signed interactions from the
drug's target to the measured phosphoprotein; it is plausible only if the
propagated sign matches the observation, the path connects end to end,
kinase commonsense holds, every machine-read edge's evidence survives
review, and no step runs through a gene the cell line has knocked out.

Run:  python3 demos/04_explanations.py
"""

from mecheval import check_plausibility, load_model, propagate_sign, select_observations
from mecheval.plausibility import Explanation, summarize_results_grid

MODEL = {
    "model_id": "demo-chain",
    "entities": [
        {"entity_id": "mTOR", "name": "mTOR", "roles": ["Kinase"]},
        {"entity_id": "p70S6K", "name": "p70S6K", "roles": ["Kinase"]},
        {"entity_id": "S6", "name": "S6"},
    ],
    "interactions": [
        {
            "edge_id": "m1",
            "source": "mTOR",
            "target": "p70S6K",
            "kind": "adds_modification",
            "effect": "activating",
            "modification": {"modification": "phosphorylation", "position": "T389"},
            "provenance": [
                {
                    "kind": "machine_reading",
                    "doc_id": "PMC0000077",
                    "evidence": ["mTOR directly phosphorylates p70S6K at Thr389."],
                }
            ],
        },
        {
            "edge_id": "m2",
            "source": "p70S6K",
            "target": "S6",
            "kind": "adds_modification",
            "effect": "activating",
            "modification": {"modification": "phosphorylation", "position": "S235"},
            "provenance": [{"kind": "curated_database", "db": "pathdb", "record_id": "r881"}],
        },
    ],
    "contexts": [{"cell_line": "SkMel-133", "knockouts": []}],
}

ROWS = [
    # obs 16..18: rapamycin-like mTOR inhibition lowers downstream phosphosites
    {"obs_id": "16", "treatment": "Tm 0.6", "is_single_drug": "true", "target": "mTOR",
     "antibody": "p70S6K_pT389_V", "readout_entity": "p70S6K", "fold_change": "0.331",
     "cell_line": "SkMel-133"},
    {"obs_id": "17", "treatment": "Tm 0.6", "is_single_drug": "true", "target": "mTOR",
     "antibody": "S6_pS235_V", "readout_entity": "S6", "fold_change": "0.058",
     "cell_line": "SkMel-133"},
    {"obs_id": "weak", "treatment": "Tm 0.1", "is_single_drug": "true", "target": "mTOR",
     "antibody": "S6_pS235_V", "readout_entity": "S6", "fold_change": "0.9",
     "cell_line": "SkMel-133"},  # inside the band: not selected
]

model = load_model(MODEL)
observations = select_observations(ROWS)
print("selected observations:", [(o.obs_id, f"{o.expected.sign:+d}") for o in observations])

print("\nsign propagation under mTOR inhibition (-1):")
print("  path m1      ->", propagate_sign(model, ["m1"], -1))
print("  path m1,m2   ->", propagate_sign(model, ["m1", "m2"], -1))

evidence_reviews = {"m1": True}  # reviewer confirmed the machine-read sentence
verdicts = {}
for obs in observations:
    path = ["m1"] if obs.readout.entity == "p70S6K" else ["m1", "m2"]
    expl = Explanation(
        observation_id=obs.obs_id,
        model_id=model.model_id,
        cell_line="SkMel-133",
        paths=(tuple(path),),
    )
    verdict = check_plausibility(
        model, model.contexts["SkMel-133"], obs, expl, evidence_reviews=evidence_reviews
    )
    verdicts[obs.obs_id] = verdict
    print(f"\nobservation {obs.obs_id}: {verdict.overall.value}")
    for criterion, result in sorted(verdict.criteria.items()):
        suffix = f" - {result.detail}" if result.detail else ""
        print(f"  {criterion}: {result.status.value}{suffix}")

grid = summarize_results_grid({"demo-team": verdicts})
print("\nresults grid:", grid.to_dict()["cells"]["demo-team"],
      "| plausible:", grid.plausible_counts["demo-team"])
