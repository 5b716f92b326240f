"""Shared domain types: the canonical tweet record and its value objects.

Everything here is immutable after construction and safe to share across
threads. Parsing leniency lives in :func:`make_tweet`; the dataclasses
themselves assume already-clean values.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from enum import Enum


class MalformedRecord(ValueError):
    """A source record that cannot become a Tweet (empty id, bad timestamp).

    Callers count these and move on; a malformed record never aborts a file.
    """


class InvalidRange(ValueError):
    """A day range whose start falls after its end."""


class SourceKind(str, Enum):
    """The three dataset kinds a corpus can be built from."""

    STREAM_SAMPLE = "stream_sample"
    HYDRATED_CSV = "hydrated_csv"
    CAPTURE_NDJSON = "capture_ndjson"


class ClusterLabel(str, Enum):
    """Closed set of thematic categories; UNCATEGORIZED means zero lexicon matches."""

    CYNICISM = "cynicism"
    COVID_COMPARISON = "covid_comparison"
    GOVERNMENT_ACTION = "government_action"
    MISINFORMATION = "misinformation"
    UNCATEGORIZED = "uncategorized"


class Polarity(str, Enum):
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"


@dataclass(frozen=True)
class SentimentScore:
    """Raw lexicon score plus its thresholded polarity."""

    raw: float
    polarity: Polarity


@dataclass(frozen=True)
class Engagement:
    like_count: int = 0
    reply_count: int = 0
    retweet_count: int = 0


@dataclass(frozen=True)
class Provenance:
    """Where a tweet came from and whether any counts were imputed."""

    source: SourceKind
    source_file: str
    counts_imputed: bool = False


@dataclass(frozen=True)
class Tweet:
    """Canonical normalized tweet record.

    ``text`` is NFC-normalized with NUL bytes removed; ``created_at`` is a
    timezone-aware UTC datetime at second precision.
    """

    id: str
    created_at: datetime
    text: str
    author_handle: str
    location: str
    engagement: Engagement
    lang: str
    provenance: Provenance

    @property
    def day(self) -> date:
        """UTC calendar day this tweet falls on."""
        return self.created_at.date()


@dataclass(frozen=True)
class DayRange:
    """Inclusive range of UTC calendar days."""

    start: date
    end: date

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise InvalidRange(f"range start {self.start} is after end {self.end}")

    def __contains__(self, day: date) -> bool:
        return self.start <= day <= self.end

    def days(self):
        """Yield every day in the range, in order."""
        d = self.start
        while d <= self.end:
            yield d
            d += timedelta(days=1)

    @classmethod
    def parse(cls, start: str, end: str) -> "DayRange":
        try:
            return cls(date.fromisoformat(start), date.fromisoformat(end))
        except ValueError as exc:
            if isinstance(exc, InvalidRange):
                raise
            raise InvalidRange(f"bad date in range: {exc}") from exc


# Classic Twitter API timestamp, e.g. "Sat May 21 07:14:02 +0000 2022".
_TWITTER_TS_FORMAT = "%a %b %d %H:%M:%S %z %Y"

# Millisecond epochs start being plausible around 2001-09 in ms units.
_EPOCH_MS_CUTOFF = 10**12


def parse_timestamp(value) -> datetime:
    """Parse a source timestamp into an aware UTC datetime at second precision.

    Accepts ISO-8601 (``Z`` or numeric offset, or naive = UTC), the classic
    Twitter ``created_at`` format, and integer epochs (seconds or, above
    10**12, milliseconds).

    Raises MalformedRecord on anything unparseable.
    """
    if isinstance(value, datetime):
        return _to_utc_second(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return _from_epoch(value)
    if isinstance(value, str):
        s = value.strip()
        if not s:
            raise MalformedRecord("empty timestamp")
        if s.isdigit() or (s.startswith("-") and s[1:].isdigit()):
            return _from_epoch(int(s))
        try:
            return _to_utc_second(datetime.fromisoformat(s.replace("Z", "+00:00")))
        except ValueError:
            pass
        try:
            return _to_utc_second(datetime.strptime(s, _TWITTER_TS_FORMAT))
        except ValueError:
            pass
        raise MalformedRecord(f"unparseable timestamp: {value!r}")
    raise MalformedRecord(f"unparseable timestamp: {value!r}")


def _from_epoch(value) -> datetime:
    if abs(value) >= _EPOCH_MS_CUTOFF:
        value = value / 1000
    try:
        return datetime.fromtimestamp(value, tz=timezone.utc).replace(microsecond=0)
    except (OverflowError, OSError, ValueError) as exc:
        raise MalformedRecord(f"epoch out of range: {value!r}") from exc


def _to_utc_second(dt: datetime) -> datetime:
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def format_utc(dt: datetime) -> str:
    """Render an aware UTC datetime as ISO-8601 with a trailing Z."""
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def _clean_text(value) -> str:
    return unicodedata.normalize("NFC", str(value)).replace("\x00", "")


def _coerce_count(value) -> "tuple[int, bool]":
    """Return (count, imputed). Missing, negative, or garbage values impute to 0.

    Source exports predate consistent metric fields, so absence is normal and
    must not drop the record.
    """
    if value is None or value == "":
        return 0, True
    try:
        n = int(float(value))
    except (TypeError, ValueError):
        return 0, True
    if n < 0:
        return 0, True
    return n, False


def make_tweet(
    *,
    id,
    created_at,
    text,
    source: SourceKind,
    source_file: str,
    author_handle=None,
    location=None,
    like_count=None,
    reply_count=None,
    retweet_count=None,
    lang=None,
) -> Tweet:
    """Build a canonical Tweet from raw source fields.

    Construction is deterministic: identical raw fields always produce an
    identical Tweet. Raises MalformedRecord for an empty id or an
    unparseable timestamp.
    """
    tweet_id = str(id).strip() if id is not None else ""
    if not tweet_id:
        raise MalformedRecord("empty tweet id")

    ts = parse_timestamp(created_at)

    likes, likes_imputed = _coerce_count(like_count)
    replies, replies_imputed = _coerce_count(reply_count)
    retweets, retweets_imputed = _coerce_count(retweet_count)

    return Tweet(
        id=tweet_id,
        created_at=ts,
        text=_clean_text(text if text is not None else ""),
        author_handle=str(author_handle).strip() if author_handle else "",
        location=str(location) if location is not None else "",
        engagement=Engagement(likes, replies, retweets),
        lang=str(lang).strip() if lang else "",
        provenance=Provenance(
            source=source,
            source_file=source_file,
            counts_imputed=likes_imputed or replies_imputed or retweets_imputed,
        ),
    )
