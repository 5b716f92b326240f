"""Lexicon sentiment scoring, topic labeling, and time-series aggregations.

Everything here is a pure function over an immutable snapshot plus immutable
lexicons: no hidden state, so outputs are reproducible and safe to compute in
parallel. Lexicon matching is intentionally transparent; a researcher can
always see exactly which terms produced a label (see :func:`explain_label`).

Lexicon file format: UTF-8 text, one ``token<TAB>weight`` per line, ``#``
starts a comment. Topic lexicons omit the weight column (every term counts 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Optional

from .corpus import CorpusSnapshot
from .model import ClusterLabel, DayRange, Polarity, SentimentScore, Tweet
from .search import ValidationError, tokenize

DEFAULT_TAU = 0.05
NONE_LOCATION = "(none)"


class LexiconError(ValueError):
    """A lexicon file that cannot be loaded (bad token, duplicate, bad weight)."""


@dataclass(frozen=True)
class Lexicon:
    """Named map from single lowercase tokens to weights."""

    name: str
    entries: "dict[str, float]"


def parse_lexicon(text: str, name: str, *, weighted: bool) -> Lexicon:
    entries: "dict[str, float]" = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t")
        token_part = parts[0].strip()
        tokens = tokenize(token_part)
        if len(tokens) != 1:
            raise LexiconError(
                f"{name}:{lineno}: lexicon entries must be single tokens, got {token_part!r}"
            )
        token = tokens[0]
        if token in entries:
            raise LexiconError(f"{name}:{lineno}: duplicate token {token!r}")
        if weighted:
            if len(parts) < 2 or not parts[1].strip():
                raise LexiconError(f"{name}:{lineno}: missing weight for {token!r}")
            try:
                weight = float(parts[1])
            except ValueError as exc:
                raise LexiconError(f"{name}:{lineno}: bad weight {parts[1]!r}") from exc
        else:
            weight = 1.0
        entries[token] = weight
    return Lexicon(name=name, entries=entries)


def load_lexicon(path, *, weighted: bool, name: Optional[str] = None) -> Lexicon:
    path = Path(path)
    return parse_lexicon(
        path.read_text(encoding="utf-8"), name or path.stem, weighted=weighted
    )


@dataclass(frozen=True)
class TopicRuleSet:
    """Ordered (label, lexicon) rules; list order is the tie-break priority."""

    rules: "tuple[tuple[ClusterLabel, Lexicon], ...]"

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.rules]
        if len(set(labels)) != len(labels):
            raise ValueError("each label may appear at most once in a rule set")
        if ClusterLabel.UNCATEGORIZED in labels:
            raise ValueError("uncategorized is reserved for zero matches")

    @property
    def label_order(self) -> "tuple[ClusterLabel, ...]":
        return tuple(label for label, _ in self.rules) + (ClusterLabel.UNCATEGORIZED,)


def score_tokens(tokens: "list[str]", lexicon: Lexicon, tau: float) -> SentimentScore:
    """Sum of matched token weights divided by max(1, token count)."""
    if tau <= 0:
        raise ValueError("tau must be > 0")
    total = sum(lexicon.entries[tok] for tok in tokens if tok in lexicon.entries)
    raw = total / max(1, len(tokens))
    if raw < -tau:
        polarity = Polarity.NEGATIVE
    elif raw > tau:
        polarity = Polarity.POSITIVE
    else:
        polarity = Polarity.NEUTRAL
    return SentimentScore(raw=raw, polarity=polarity)


def score_sentiment(tweet: Tweet, lexicon: Lexicon, tau: float = DEFAULT_TAU) -> SentimentScore:
    return score_tokens(tokenize(tweet.text), lexicon, tau)


def label_tokens(token_set: "set[str]", rule_set: TopicRuleSet) -> ClusterLabel:
    """Argmax of distinct-term matches; ties go to the earlier rule; zero
    matches everywhere means UNCATEGORIZED."""
    best_label = ClusterLabel.UNCATEGORIZED
    best_score = 0
    for label, lexicon in rule_set.rules:
        score = sum(1 for token in lexicon.entries if token in token_set)
        if score > best_score:
            best_label = label
            best_score = score
    return best_label


def label_topic(tweet: Tweet, rule_set: TopicRuleSet) -> ClusterLabel:
    return label_tokens(set(tokenize(tweet.text)), rule_set)


def explain_label(text: str, rule_set: TopicRuleSet) -> "tuple[ClusterLabel, list[str]]":
    """Label a text and list the winning lexicon's terms that matched.

    This is the audit trail: the returned terms are the whole reason the
    label was assigned.
    """
    token_set = set(tokenize(text))
    label = label_tokens(token_set, rule_set)
    if label is ClusterLabel.UNCATEGORIZED:
        return label, []
    lexicon = dict(rule_set.rules)[label]
    return label, sorted(token for token in lexicon.entries if token in token_set)


@dataclass(frozen=True)
class DailyClusterPoint:
    """Share of one day's tweets carrying one label; proportion = count / day total."""

    day: date
    label: ClusterLabel
    proportion: float
    count: int


def daily_cluster_proportions(
    snapshot: CorpusSnapshot, rule_set: TopicRuleSet, day_range: DayRange
) -> "list[DailyClusterPoint]":
    """One point per (day, label) with a nonzero count, for days with tweets.

    Per-day proportions sum to 1 because every tweet gets exactly one label
    (uncategorized included) and the denominator is the full day total.
    """
    by_day: "dict[date, dict[ClusterLabel, int]]" = {}
    for tweet in snapshot.scan(day_range):
        counts = by_day.setdefault(tweet.day, {})
        label = label_topic(tweet, rule_set)
        counts[label] = counts.get(label, 0) + 1

    points = []
    order = rule_set.label_order
    for day in sorted(by_day):
        counts = by_day[day]
        day_total = sum(counts.values())
        for label in order:
            count = counts.get(label, 0)
            if count == 0:
                continue
            points.append(
                DailyClusterPoint(
                    day=day, label=label, proportion=count / day_total, count=count
                )
            )
    return points


def keyword_trend(
    snapshot: CorpusSnapshot, keyword: str, day_range: DayRange
) -> "list[tuple[date, int]]":
    """Daily counts of tweets containing the keyword token.

    Every day in the range appears, zero-count days included, so the series
    plots on a continuous axis.
    """
    tokens = tokenize(keyword)
    if len(tokens) != 1:
        raise ValidationError(
            [{"field": "k", "message": f"single token required, got {keyword!r}"}]
        )
    token = tokens[0]

    counts = {day: 0 for day in day_range.days()}
    for tweet in snapshot.scan(day_range):
        if token in set(tokenize(tweet.text)):
            counts[tweet.day] += 1
    return list(counts.items())


@dataclass(frozen=True)
class LocationBreakdown:
    """Top locations by count plus the size of the empty-location bucket."""

    top: "list[tuple[str, int]]"
    none_count: int


def location_breakdown(
    snapshot: CorpusSnapshot, day_range: Optional[DayRange] = None, top_n: int = 10
) -> LocationBreakdown:
    """Group case-folded, trimmed location strings; blanks go to a separate bucket."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    counts: "dict[str, int]" = {}
    none_count = 0
    for tweet in snapshot.scan(day_range):
        location = tweet.location.strip().casefold()
        if not location:
            none_count += 1
            continue
        counts[location] = counts.get(location, 0) + 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return LocationBreakdown(top=ranked[:top_n], none_count=none_count)


@dataclass(frozen=True)
class VolumeComparison:
    """Tweet counts for two periods; ratio is None when period A is empty."""

    period_a: DayRange
    period_b: DayRange
    count_a: int
    count_b: int
    ratio: Optional[float]


def volume_comparison(
    snapshot: CorpusSnapshot, period_a: DayRange, period_b: DayRange
) -> VolumeComparison:
    count_a = snapshot.count_in(period_a)
    count_b = snapshot.count_in(period_b)
    ratio = count_b / count_a if count_a > 0 else None
    return VolumeComparison(
        period_a=period_a,
        period_b=period_b,
        count_a=count_a,
        count_b=count_b,
        ratio=ratio,
    )
