"""Pydantic request/response bodies for the HTTP API.

These mirror the core dataclasses field-for-field; conversion happens in the
route handlers so the wire format stays pinned even if internals move.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel

from .analytics import (
    DailyClusterPoint,
    LocationBreakdown,
    VolumeComparison,
)
from .model import SentimentScore, Tweet, format_utc


class FieldError(BaseModel):
    field: str
    message: str


class ErrorBody(BaseModel):
    errors: "list[FieldError]"


class SentimentOut(BaseModel):
    raw: float
    polarity: str

    @classmethod
    def from_score(cls, score: SentimentScore) -> "SentimentOut":
        return cls(raw=score.raw, polarity=score.polarity.value)


class TweetOut(BaseModel):
    id: str
    created_at: str
    day: str
    text: str
    author_handle: str
    location: str
    like_count: int
    reply_count: int
    retweet_count: int
    lang: str
    source: str
    source_file: str
    counts_imputed: bool
    cluster_label: str
    sentiment: SentimentOut

    @classmethod
    def from_tweet(cls, tweet: Tweet, label: str, sentiment: SentimentScore) -> "TweetOut":
        return cls(
            id=tweet.id,
            created_at=format_utc(tweet.created_at),
            day=tweet.day.isoformat(),
            text=tweet.text,
            author_handle=tweet.author_handle,
            location=tweet.location,
            like_count=tweet.engagement.like_count,
            reply_count=tweet.engagement.reply_count,
            retweet_count=tweet.engagement.retweet_count,
            lang=tweet.lang,
            source=tweet.provenance.source.value,
            source_file=tweet.provenance.source_file,
            counts_imputed=tweet.provenance.counts_imputed,
            cluster_label=label,
            sentiment=SentimentOut.from_score(sentiment),
        )


class HealthResponse(BaseModel):
    status: str
    corpus_total: int
    snapshot_id: str


class StatsResponse(BaseModel):
    total: int
    per_day: "dict[str, int]"
    date_min: Optional[str]
    date_max: Optional[str]
    snapshot_id: str


class SearchResponse(BaseModel):
    total_matches: int
    page: int
    per_page: int
    items: "list[TweetOut]"
    snapshot_id: str


class TweetDetailResponse(BaseModel):
    tweet: TweetOut
    matched_terms: "list[str]"
    snapshot_id: str


class ClusterPointOut(BaseModel):
    day: str
    label: str
    proportion: float
    count: int

    @classmethod
    def from_point(cls, point: DailyClusterPoint) -> "ClusterPointOut":
        return cls(
            day=point.day.isoformat(),
            label=point.label.value,
            proportion=point.proportion,
            count=point.count,
        )


class ClusterSeriesResponse(BaseModel):
    points: "list[ClusterPointOut]"
    snapshot_id: str


class TrendPointOut(BaseModel):
    day: str
    count: int


class TrendResponse(BaseModel):
    keyword: str
    points: "list[TrendPointOut]"
    snapshot_id: str


class LocationCountOut(BaseModel):
    location: str
    count: int


class LocationsResponse(BaseModel):
    locations: "list[LocationCountOut]"
    none_count: int
    snapshot_id: str

    @classmethod
    def from_breakdown(cls, breakdown: LocationBreakdown, snapshot_id: str) -> "LocationsResponse":
        return cls(
            locations=[
                LocationCountOut(location=loc, count=count) for loc, count in breakdown.top
            ],
            none_count=breakdown.none_count,
            snapshot_id=snapshot_id,
        )


class VolumeResponse(BaseModel):
    a_from: str
    a_to: str
    b_from: str
    b_to: str
    count_a: int
    count_b: int
    ratio: Optional[float]
    snapshot_id: str

    @classmethod
    def from_comparison(cls, cmp: VolumeComparison, snapshot_id: str) -> "VolumeResponse":
        return cls(
            a_from=cmp.period_a.start.isoformat(),
            a_to=cmp.period_a.end.isoformat(),
            b_from=cmp.period_b.start.isoformat(),
            b_to=cmp.period_b.end.isoformat(),
            count_a=cmp.count_a,
            count_b=cmp.count_b,
            ratio=cmp.ratio,
            snapshot_id=snapshot_id,
        )


class ReloadResponse(BaseModel):
    status: str
    corpus_total: int
    snapshot_id: str
