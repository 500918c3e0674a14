"""The human-review loop: ingest, work the queue, watch metrics move.

Ingesting a run parses submissions, deduplicates, computes candidate
matches against the reference set, and queues everything needing human
eyes. Resolving a queue item writes exactly one judgment revision into
the append-only log; reports recompute from the latest snapshot, so
accepting a match visibly bumps the overlap count.

The same queue is served over HTTP for the browser UI
(`mecheval serve --data-root ... --tokens tokens.json`); this demo drives
the run object directly.

Run:  python3 demos/05_review_workflow.py
"""

import json
import tempfile
from pathlib import Path

from mecheval.errors import AlreadyClaimedError
from mecheval.harness.runs import RunConfig, ingest_run, run_report

root = Path(tempfile.mkdtemp(prefix="mecheval-demo-"))

# One submission with two ranked cards; a one-entry reference set.
paper = "PMC0000001"
team_dir = root / "team-a" / paper
team_dir.mkdir(parents=True)


def write_card(name, a, b):
    (team_dir / f"{name}.card.json").write_text(
        json.dumps(
            {
                "paper_id": paper,
                "source": "demo-reader",
                "source_type": "Machine",
                "timestamp": "2016-01-01T00:00:00Z",
                "model_relation": {"type": "Extension"},
                "interaction": {
                    "interaction_type": "binds",
                    "participant_a": {"entity_text": a, "entity_type": "Protein"},
                    "participant_b": {"entity_text": b, "entity_type": "Protein"},
                    "negative_information": False,
                },
                "evidence": [{"text": f"{a} co-precipitated with {b}.", "section": "Results"}],
                "rank": 1 if name == "c1" else 2,
            }
        ),
        "utf-8",
    )


write_card("c1", "Grb7", "EphB1")
write_card("c2", "Zeta", "Theta")

(root / "refset.json").write_text(
    json.dumps(
        {
            "interactions": [
                {
                    "ref_id": "d0",
                    "paper_id": paper,
                    "category": "direct_phospho_bind",
                    "found_by": ["mp", "tk"],
                    "components": [],
                    "interaction": {
                        "interaction_type": "binds",
                        "participant_a": {"entity_text": "EphB1", "entity_type": "Protein"},
                        "participant_b": {"entity_text": "Grb7", "entity_type": "Protein"},
                        "negative_information": False,
                    },
                }
            ]
        }
    ),
    "utf-8",
)

run = ingest_run(
    RunConfig(
        run_id="demo",
        phase="II",
        submissions=[str(root / "team-a")],
        refset_file=str(root / "refset.json"),
    ),
    root / "data",
)

print("queue after ingest:")
for item in run.items():
    print(f"  {item.item_id} {item.kind:<18} {item.state}")

before = run_report(run)["teams"]["team-a"]["overlap_by_category"]["direct_phospho_bind"]
print("\noverlap before review:", before)

match_item = next(i for i in run.items() if i.kind == "MatchConfirmation")
run.claim(match_item.item_id, "mp")
try:
    run.claim(match_item.item_id, "tk")
except AlreadyClaimedError as exc:
    print(f"\nsecond reviewer blocked: {exc}")

run.resolve(match_item.item_id, "mp", {"accept": True})
after = run_report(run)["teams"]["team-a"]["overlap_by_category"]["direct_phospho_bind"]
print("overlap after accepting the match:", after)
print("run status:", run.status(), "| counters:", run.queue_counters())
