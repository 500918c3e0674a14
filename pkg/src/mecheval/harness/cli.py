"""Command-line front end.

Each subcommand is a thin wrapper over module operations; exit code 0
means no errors. Output is deterministic given identical inputs and
judgment log. The data root for persisted runs comes from --data-root or
the MECHEVAL_DATA_ROOT environment variable.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import tempfile
from pathlib import Path

import click

from ..cards import validate_card_document
from ..errors import MechEvalError
from .runs import RunConfig, RunStore, ingest_run, run_report

DATA_ROOT_ENV = "MECHEVAL_DATA_ROOT"


def _data_root(value: str | None) -> Path:
    import os

    if value:
        return Path(value)
    env = os.environ.get(DATA_ROOT_ENV)
    if env:
        return Path(env)
    return Path(tempfile.mkdtemp(prefix="mecheval-"))


def _emit(doc: dict, out: str | None, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        text = _report_csv(doc)
    if out:
        Path(out).write_text(text, "utf-8")
    else:
        click.echo(text, nl=False)


def _report_csv(doc: dict) -> str:
    """Flatten a report into key,value rows (stable order)."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["key", "value"])

    def walk(prefix: str, node):
        if isinstance(node, dict):
            for key in sorted(node):
                walk(f"{prefix}.{key}" if prefix else str(key), node[key])
        elif isinstance(node, list):
            for i, entry in enumerate(node):
                walk(f"{prefix}[{i}]", entry)
        else:
            writer.writerow([prefix, "" if node is None else node])

    walk("", doc)
    return buf.getvalue()


def _parse_team_files(values: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for value in values:
        if "=" in value:
            team, path = value.split("=", 1)
        else:
            team, path = Path(value).stem, value
        out[team] = path
    return out


@click.group()
def main():
    """Evaluation harness for curated mechanistic-interaction knowledge."""


@main.command()
@click.option("--submission", "submissions", multiple=True, required=True, help="submission directory")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def validate(submissions, fmt, out):
    """Validate every card document under the submission directories."""
    violations = []
    for sub in submissions:
        root = Path(sub)
        if not root.exists():
            raise click.ClickException(f"no such directory: {sub}")
        for card_path in sorted(root.glob("*/*.card.json")):
            try:
                doc = json.loads(card_path.read_text("utf-8"))
            except json.JSONDecodeError as exc:
                violations.append(
                    {"file": str(card_path), "path": "$", "message": f"not valid JSON: {exc}"}
                )
                continue
            for err in validate_card_document(doc):
                violations.append(
                    {"file": str(card_path), "path": err.path, "message": err.message}
                )
    _emit({"violations": violations, "count": len(violations)}, out, fmt)
    if violations:
        sys.exit(1)


def _score(phase: str, **kwargs) -> dict:
    config = RunConfig(phase=phase, **kwargs)
    data_root = Path(tempfile.mkdtemp(prefix="mecheval-score-"))
    run = ingest_run(config, data_root)
    return run_report(run)


@main.command("score-phase1")
@click.option("--submission", "submissions", multiple=True, required=True)
@click.option("--assessments", default=None, help="JSONL of pre-recorded rubric assessments")
@click.option("--days", type=int, default=None, help="override the 7-day/3-day convention")
@click.option("--equiv-table", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def score_phase1(submissions, assessments, days, equiv_table, fmt, out):
    """Precision and correct-cards-per-day over reviewed submissions."""
    try:
        report = _score(
            "I",
            run_id="phase1",
            submissions=list(submissions),
            assessments_file=assessments,
            days=days,
            equiv_table_file=equiv_table,
        )
    except MechEvalError as exc:
        raise click.ClickException(str(exc))
    _emit(report, out, fmt)


@main.command("score-phase2")
@click.option("--submission", "submissions", multiple=True, required=True)
@click.option("--refset", required=True, help="reference-set file")
@click.option("--assessments", default=None)
@click.option("--equiv-table", default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def score_phase2(submissions, refset, assessments, equiv_table, fmt, out):
    """Reference-set overlap and precision for top-ranked findings."""
    try:
        report = _score(
            "II",
            run_id="phase2",
            submissions=list(submissions),
            refset_file=refset,
            assessments_file=assessments,
            equiv_table_file=equiv_table,
        )
    except MechEvalError as exc:
        raise click.ClickException(str(exc))
    _emit(report, out, fmt)


@main.command("check-phase3")
@click.option("--model", "models", multiple=True, required=True, help="model file (repeatable)")
@click.option("--observations", required=True, help="observation CSV or JSON")
@click.option(
    "--explanations",
    "explanations",
    multiple=True,
    required=True,
    help="TEAM=FILE explanation submissions (repeatable)",
)
@click.option("--assessments", default=None, help="JSONL incl. edge_evidence resolutions")
@click.option("--fold-hi", type=float, default=1.5)
@click.option("--fold-lo", type=float, default=0.5)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def check_phase3(models, observations, explanations, assessments, fold_hi, fold_lo, fmt, out):
    """Plausibility-check explanation submissions against observations."""
    try:
        report = _score(
            "III",
            run_id="phase3",
            model_files=list(models),
            observations_file=observations,
            explanation_files=_parse_team_files(explanations),
            assessments_file=assessments,
            fold_hi=fold_hi,
            fold_lo=fold_lo,
        )
    except MechEvalError as exc:
        raise click.ClickException(str(exc))
    _emit(report, out, fmt)


@main.command()
@click.option("--data-root", default=None, help=f"defaults to ${DATA_ROOT_ENV}")
@click.option("--tokens", "tokens_file", required=True, help="JSON token->reviewer map")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8351)
def serve(data_root, tokens_file, host, port):
    """Run the review service."""
    import uvicorn

    from .service import load_tokens, make_app

    app = make_app(_data_root(data_root), load_tokens(tokens_file))
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--data-root", default=None)
@click.option("--run-id", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", default=None)
def export(data_root, run_id, fmt, out):
    """Export the report for a persisted run."""
    store = RunStore(_data_root(data_root))
    try:
        run = store.get(run_id)
    except MechEvalError as exc:
        raise click.ClickException(str(exc))
    _emit(run_report(run), out, fmt)


if __name__ == "__main__":
    main()
