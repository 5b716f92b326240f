"""Durable deduplicated tweet store.

Layout: a directory holding ``tweets.ndjson`` (one canonical tweet per line,
fixed field order, append-only) and ``manifest.json`` with
``{record_count, ids_digest, format_version}``. The digest is the SHA-256 hex
of the sorted ids joined by newlines, so any divergence between data and
manifest is detected at open.

Concurrency contract: one writer, any number of readers. Readers work from an
immutable :class:`CorpusSnapshot`; a reload means opening a fresh ``Corpus``
and taking a new snapshot.
"""

from __future__ import annotations

import hashlib
import json
import os
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .model import (
    DayRange,
    Engagement,
    Provenance,
    SourceKind,
    Tweet,
    format_utc,
)

DATA_FILE = "tweets.ndjson"
MANIFEST_FILE = "manifest.json"
FORMAT_VERSION = 1


class StoreCorrupt(Exception):
    """Data file and manifest disagree, or a stored line is undecodable."""


def ids_digest(ids: Iterable[str]) -> str:
    """SHA-256 hex over the sorted ids joined by newlines."""
    joined = "\n".join(sorted(ids))
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def encode_tweet(tweet: Tweet) -> str:
    """One canonical NDJSON line, fixed field order, no trailing newline."""
    record = {
        "id": tweet.id,
        "created_at": format_utc(tweet.created_at),
        "text": tweet.text,
        "author_handle": tweet.author_handle,
        "location": tweet.location,
        "like_count": tweet.engagement.like_count,
        "reply_count": tweet.engagement.reply_count,
        "retweet_count": tweet.engagement.retweet_count,
        "lang": tweet.lang,
        "source": tweet.provenance.source.value,
        "source_file": tweet.provenance.source_file,
        "counts_imputed": tweet.provenance.counts_imputed,
    }
    return json.dumps(record, ensure_ascii=False, separators=(",", ":"))


def decode_tweet(line: str) -> Tweet:
    """Parse one stored line back into a Tweet. Raises StoreCorrupt on damage."""
    try:
        record = json.loads(line)
        return Tweet(
            id=record["id"],
            created_at=datetime.fromisoformat(
                record["created_at"].replace("Z", "+00:00")
            ).astimezone(timezone.utc),
            text=record["text"],
            author_handle=record["author_handle"],
            location=record["location"],
            engagement=Engagement(
                like_count=record["like_count"],
                reply_count=record["reply_count"],
                retweet_count=record["retweet_count"],
            ),
            lang=record["lang"],
            provenance=Provenance(
                source=SourceKind(record["source"]),
                source_file=record["source_file"],
                counts_imputed=record["counts_imputed"],
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise StoreCorrupt(f"undecodable store line: {exc}") from exc


@dataclass(frozen=True)
class CorpusStats:
    """Aggregate counts; total always equals the sum of per_day."""

    total: int
    per_day: "dict[date, int]"
    date_min: Optional[date] = None
    date_max: Optional[date] = None


@dataclass(frozen=True)
class CorpusSnapshot:
    """Immutable view of a corpus: tweets sorted by (created_at, id).

    All search and analytics read from a snapshot, never from the live store,
    so results stay stable between explicit reloads.
    """

    tweets: "tuple[Tweet, ...]"
    ids_digest: str
    by_id: "dict[str, Tweet]" = field(repr=False, default_factory=dict)
    per_day: "dict[date, int]" = field(repr=False, default_factory=dict)

    @classmethod
    def from_tweets(cls, tweets: Iterable[Tweet]) -> "CorpusSnapshot":
        ordered = tuple(sorted(tweets, key=lambda t: (t.created_at, t.id)))
        by_id = {t.id: t for t in ordered}
        if len(by_id) != len(ordered):
            raise ValueError("duplicate tweet ids in snapshot")
        per_day = dict(sorted(Counter(t.day for t in ordered).items()))
        return cls(
            tweets=ordered,
            ids_digest=ids_digest(by_id),
            by_id=by_id,
            per_day=per_day,
        )

    def scan(self, day_range: Optional[DayRange] = None) -> Iterator[Tweet]:
        """Tweets in (created_at, id) order, optionally limited to a day range."""
        if day_range is None:
            yield from self.tweets
            return
        for tweet in self.tweets:
            if tweet.day in day_range:
                yield tweet

    def count_in(self, day_range: DayRange) -> int:
        """Per-day sum over the range; consistent with stats() by construction."""
        return sum(
            count for day, count in self.per_day.items() if day in day_range
        )

    def stats(self) -> CorpusStats:
        if not self.tweets:
            return CorpusStats(total=0, per_day={})
        days = list(self.per_day)
        return CorpusStats(
            total=len(self.tweets),
            per_day=dict(self.per_day),
            date_min=min(days),
            date_max=max(days),
        )


class Corpus:
    """Append-only store; loads fully into memory at open (desk scale)."""

    def __init__(self, root, *, create: bool = False):
        self.root = Path(root)
        self._tweets: "list[Tweet]" = []
        self._ids: "set[str]" = set()
        if create:
            self.root.mkdir(parents=True, exist_ok=True)
        if not self.root.is_dir():
            raise FileNotFoundError(f"corpus directory not found: {self.root}")
        self._load()

    @property
    def data_path(self) -> Path:
        return self.root / DATA_FILE

    @property
    def manifest_path(self) -> Path:
        return self.root / MANIFEST_FILE

    def _load(self) -> None:
        have_data = self.data_path.exists()
        have_manifest = self.manifest_path.exists()
        if have_data != have_manifest:
            raise StoreCorrupt(
                f"store has {'data without manifest' if have_data else 'manifest without data'}"
            )
        if not have_data:
            return

        with open(self.data_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                tweet = decode_tweet(line)
                if tweet.id in self._ids:
                    raise StoreCorrupt(f"duplicate id in store: {tweet.id}")
                self._tweets.append(tweet)
                self._ids.add(tweet.id)

        try:
            manifest = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise StoreCorrupt(f"unreadable manifest: {exc}") from exc
        if manifest.get("format_version") != FORMAT_VERSION:
            raise StoreCorrupt(
                f"unsupported store format_version: {manifest.get('format_version')!r}"
            )
        if manifest.get("record_count") != len(self._tweets):
            raise StoreCorrupt(
                f"manifest says {manifest.get('record_count')} records, data has {len(self._tweets)}"
            )
        if manifest.get("ids_digest") != ids_digest(self._ids):
            raise StoreCorrupt("manifest ids_digest does not match data")

    def __len__(self) -> int:
        return len(self._tweets)

    @property
    def ids_digest(self) -> str:
        return ids_digest(self._ids)

    def append(self, tweets: Iterable[Tweet]) -> int:
        """Write tweets not already present; returns how many were written.

        Durable on return: data is flushed and fsynced, manifest rewritten
        atomically.
        """
        fresh = []
        seen_ids = set()
        for tweet in tweets:
            if tweet.id in self._ids or tweet.id in seen_ids:
                continue
            fresh.append(tweet)
            seen_ids.add(tweet.id)
        if not fresh:
            return 0

        with open(self.data_path, "a", encoding="utf-8") as fh:
            for tweet in fresh:
                fh.write(encode_tweet(tweet) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

        self._tweets.extend(fresh)
        self._ids.update(seen_ids)
        self._write_manifest()
        return len(fresh)

    def _write_manifest(self) -> None:
        manifest = {
            "record_count": len(self._tweets),
            "ids_digest": ids_digest(self._ids),
            "format_version": FORMAT_VERSION,
        }
        tmp = self.manifest_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, self.manifest_path)

    def snapshot(self) -> CorpusSnapshot:
        return CorpusSnapshot.from_tweets(self._tweets)

    def stats(self) -> CorpusStats:
        return self.snapshot().stats()

    def scan(self, day_range: Optional[DayRange] = None) -> Iterator[Tweet]:
        return self.snapshot().scan(day_range)
