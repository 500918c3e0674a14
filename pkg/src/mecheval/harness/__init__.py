"""Ingestion, persistence, reporting, review service, and CLI."""

from .runs import EvaluationRun, ReviewItem, RunConfig, RunStore, ingest_run

__all__ = ["EvaluationRun", "ReviewItem", "RunConfig", "RunStore", "ingest_run"]
