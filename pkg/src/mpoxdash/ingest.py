"""Parsers and relevance filtering for the three supported dataset formats.

Formats:
  * ``stream_sample``: NDJSON, one bare tweet object per line (API stream dumps).
  * ``hydrated_csv``: RFC-4180 CSV with a header row.
  * ``capture_ndjson``: NDJSON where each line wraps the tweet object in an
    envelope under a configurable key (default ``"data"``), as produced by
    browser capture tools.

Source exports are messy: malformed rows are counted and skipped, never
fatal. Only an unreadable file or an undetectable format aborts, and then
only that file.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .corpus import Corpus
from .model import MalformedRecord, SourceKind, make_tweet
from .search import tokenize

DEFAULT_WRAPPER_KEY = "data"

CANONICAL_FIELDS = (
    "id",
    "created_at",
    "text",
    "like_count",
    "reply_count",
    "retweet_count",
    "location",
    "author_handle",
    "lang",
)
REQUIRED_FIELDS = ("id", "created_at", "text")


class UnknownFormat(Exception):
    """File is neither NDJSON nor a plausible CSV."""


@dataclass(frozen=True)
class ColumnMap:
    """Canonical field name -> source column header or dotted JSON path.

    For CSV the path is the exact header name (dots are literal); for NDJSON
    it is traversed through nested objects.
    """

    fields: "dict[str, str]"

    def __post_init__(self) -> None:
        unknown = set(self.fields) - set(CANONICAL_FIELDS)
        if unknown:
            raise ValueError(f"unknown canonical fields: {sorted(unknown)}")
        missing = [f for f in REQUIRED_FIELDS if f not in self.fields]
        if missing:
            raise ValueError(f"column map missing required fields: {missing}")
        paths = list(self.fields.values())
        if len(set(paths)) != len(paths):
            raise ValueError("two canonical fields map to the same source path")

    def merged_with(self, overrides: "Optional[dict[str, str]]") -> "ColumnMap":
        if not overrides:
            return self
        merged = dict(self.fields)
        merged.update(overrides)
        return ColumnMap(merged)


# Identity map: canonical NDJSON or CSV whose headers already use our names.
CANONICAL_COLUMN_MAP = ColumnMap({name: name for name in CANONICAL_FIELDS})

# Classic API objects: counts live under API names, user fields are nested.
_API_OBJECT_MAP = {
    "id": "id_str",
    "created_at": "created_at",
    "like_count": "favorite_count",
    "reply_count": "reply_count",
    "retweet_count": "retweet_count",
    "location": "user.location",
    "author_handle": "user.screen_name",
    "lang": "lang",
}

DEFAULT_COLUMN_MAPS = {
    SourceKind.STREAM_SAMPLE: ColumnMap({**_API_OBJECT_MAP, "text": "text"}),
    SourceKind.CAPTURE_NDJSON: ColumnMap({**_API_OBJECT_MAP, "text": "full_text"}),
    SourceKind.HYDRATED_CSV: CANONICAL_COLUMN_MAP,
}


@dataclass
class IngestReport:
    """Per-file accounting; records_read = matched + unmatched + malformed."""

    file: str
    records_read: int = 0
    matched: int = 0
    unmatched: int = 0
    malformed: int = 0
    duplicates_skipped: int = 0

    def as_dict(self) -> "dict[str, object]":
        return {
            "file": self.file,
            "records_read": self.records_read,
            "matched": self.matched,
            "unmatched": self.unmatched,
            "malformed": self.malformed,
            "duplicates_skipped": self.duplicates_skipped,
        }


def detect_format(path, wrapper_key: str = DEFAULT_WRAPPER_KEY) -> SourceKind:
    """Decide a file's format from its first non-blank line (and name).

    Rules, in order: a JSON object line is NDJSON: capture if it has the
    wrapper key, stream sample otherwise; anything else with a comma in the
    first line or a .csv name is a CSV header. Deterministic per file.
    """
    path = Path(path)
    first_line = ""
    with open(path, encoding="utf-8", errors="replace") as fh:
        for line in fh:
            if line.strip():
                first_line = line.strip()
                break
    if not first_line:
        raise UnknownFormat(f"{path}: empty file")
    try:
        obj = json.loads(first_line)
    except ValueError:
        obj = None
    if isinstance(obj, dict):
        if wrapper_key in obj:
            return SourceKind.CAPTURE_NDJSON
        return SourceKind.STREAM_SAMPLE
    if obj is not None:
        raise UnknownFormat(f"{path}: JSON line is not an object")
    if "," in first_line or path.suffix.lower() == ".csv":
        return SourceKind.HYDRATED_CSV
    raise UnknownFormat(f"{path}: neither NDJSON nor CSV header")


def _dig(obj, dotted_path: str):
    current = obj
    for part in dotted_path.split("."):
        if not isinstance(current, dict) or part not in current:
            return None
        current = current[part]
    return current


class RecordStream:
    """Streaming iterator of raw records from one file.

    Yields dicts keyed by canonical field names; values are raw source
    values. ``read`` and ``malformed`` counters are final once the stream is
    exhausted. Memory use is bounded by one record, not file size.
    """

    def __init__(
        self,
        path,
        fmt: SourceKind,
        column_map: ColumnMap,
        *,
        wrapper_key: str = DEFAULT_WRAPPER_KEY,
    ):
        self.path = Path(path)
        self.fmt = fmt
        self.column_map = column_map
        self.wrapper_key = wrapper_key
        self.read = 0
        self.malformed = 0

    def __iter__(self) -> "Iterator[dict[str, object]]":
        if self.fmt is SourceKind.HYDRATED_CSV:
            yield from self._iter_csv()
        else:
            yield from self._iter_ndjson()

    def _extract(self, source_obj: "dict[str, object]", *, nested: bool):
        record: "dict[str, object]" = {}
        for canonical, path in self.column_map.fields.items():
            value = _dig(source_obj, path) if nested else source_obj.get(path)
            if value is not None:
                record[canonical] = value
        for required in REQUIRED_FIELDS:
            if required not in record:
                return None
        return record

    def _iter_ndjson(self):
        unwrap = self.fmt is SourceKind.CAPTURE_NDJSON
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                self.read += 1
                try:
                    obj = json.loads(line)
                except ValueError:
                    self.malformed += 1
                    continue
                if unwrap:
                    obj = obj.get(self.wrapper_key) if isinstance(obj, dict) else None
                if not isinstance(obj, dict):
                    self.malformed += 1
                    continue
                record = self._extract(obj, nested=True)
                if record is None:
                    self.malformed += 1
                    continue
                yield record

    def _iter_csv(self):
        with open(self.path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            while True:
                try:
                    row = next(reader)
                except StopIteration:
                    return
                except csv.Error:
                    self.read += 1
                    self.malformed += 1
                    continue
                self.read += 1
                # DictReader fills missing trailing columns with None.
                row = {k: v for k, v in row.items() if k is not None and v is not None}
                record = self._extract(row, nested=False)
                if record is None:
                    self.malformed += 1
                    continue
                yield record


def parse_file(
    path,
    fmt: SourceKind,
    column_map: Optional[ColumnMap] = None,
    *,
    wrapper_key: str = DEFAULT_WRAPPER_KEY,
) -> RecordStream:
    """Stream raw records from a file; malformed rows are counted, not raised."""
    if column_map is None:
        column_map = DEFAULT_COLUMN_MAPS[fmt]
    return RecordStream(path, fmt, column_map, wrapper_key=wrapper_key)


def is_relevant(text: str, keywords: Iterable[str]) -> bool:
    """True iff the tokenized, lowercased text contains at least one keyword token."""
    token_set = set(tokenize(text))
    return any(keyword in token_set for keyword in keywords)


_APPEND_CHUNK = 1000


def ingest_file(
    path,
    corpus: Corpus,
    *,
    keywords: Iterable[str],
    fmt: Optional[SourceKind] = None,
    column_map: "Optional[dict[str, str]]" = None,
    wrapper_key: str = DEFAULT_WRAPPER_KEY,
) -> IngestReport:
    """Parse one file, keep keyword-relevant records, append to the corpus.

    Re-running on the same file changes nothing except duplicates_skipped.
    Raises OSError for an unreadable file and UnknownFormat when detection
    fails; both are fatal for this file only.
    """
    path = Path(path)
    keywords = tuple(keywords)
    if fmt is None:
        fmt = detect_format(path, wrapper_key)
    cmap = DEFAULT_COLUMN_MAPS[fmt].merged_with(column_map)
    stream = parse_file(path, fmt, cmap, wrapper_key=wrapper_key)

    report = IngestReport(file=str(path))
    written = 0
    batch = []
    for record in stream:
        if not is_relevant(str(record.get("text", "")), keywords):
            report.unmatched += 1
            continue
        try:
            tweet = make_tweet(
                id=record.get("id"),
                created_at=record.get("created_at"),
                text=record.get("text"),
                author_handle=record.get("author_handle"),
                location=record.get("location"),
                like_count=record.get("like_count"),
                reply_count=record.get("reply_count"),
                retweet_count=record.get("retweet_count"),
                lang=record.get("lang"),
                source=fmt,
                source_file=str(path),
            )
        except MalformedRecord:
            report.malformed += 1
            continue
        report.matched += 1
        batch.append(tweet)
        if len(batch) >= _APPEND_CHUNK:
            written += corpus.append(batch)
            batch = []
    written += corpus.append(batch)

    report.records_read = stream.read
    report.malformed += stream.malformed
    report.duplicates_skipped = report.matched - written
    return report
