"""Shared fixtures: tweet factory, temp corpus stores, config files."""

from __future__ import annotations

from datetime import datetime, timezone
from pathlib import Path

import pytest
import yaml

from mpoxdash.corpus import Corpus
from mpoxdash.model import SourceKind, make_tweet

FIXTURES = Path(__file__).parent / "fixtures"

STREAM_FIXTURE = FIXTURES / "stream_sample.ndjson"
CSV_FIXTURE = FIXTURES / "hydrated.csv"
CAPTURE_FIXTURE = FIXTURES / "capture.ndjson"
ALL_FIXTURES = (STREAM_FIXTURE, CSV_FIXTURE, CAPTURE_FIXTURE)

# Keywords every fixture-suite ingest uses: the corpus texts use both names.
FIXTURE_KEYWORDS = ["mpox", "monkeypox"]


def tweet(id="1", created_at="2024-04-01T12:00:00Z", text="an mpox update", **kwargs):
    """Canonical tweet with overridable fields, for building corpora by hand."""
    kwargs.setdefault("source", SourceKind.STREAM_SAMPLE)
    kwargs.setdefault("source_file", "test")
    return make_tweet(id=id, created_at=created_at, text=text, **kwargs)


def utc(year, month, day, hour=0, minute=0, second=0):
    return datetime(year, month, day, hour, minute, second, tzinfo=timezone.utc)


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "corpus"


@pytest.fixture
def corpus(store_path):
    return Corpus(store_path, create=True)


def write_config(tmp_path, corpus_path, **overrides):
    """Write a minimal YAML config into tmp_path and return its path."""
    doc = {"corpus_path": str(corpus_path), "keywords": FIXTURE_KEYWORDS}
    doc.update(overrides)
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(doc), encoding="utf-8")
    return path
