"""Tokenizer, inverted index, and query evaluation.

:func:`tokenize` is the single matching definition shared with ingest-time
relevance filtering and with analytics, so "what counts as containing a
keyword" cannot drift between modules.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Mapping, Optional

from .corpus import CorpusSnapshot
from .model import DayRange, Tweet

# Maximal runs of Unicode alphanumerics; underscore is a separator, as are
# '#' and '@', so "#mpox" yields "mpox".
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

MAX_KEYWORDS = 3
COMBINE_MODES = ("all", "any")
SORT_MODES = ("recency_desc", "likes_desc", "retweets_desc")
DEFAULT_PER_PAGE = 50
PER_PAGE_MAX = 200


def tokenize(text: str) -> "list[str]":
    """Lowercased maximal alphanumeric runs from NFC-normalized text."""
    normalized = unicodedata.normalize("NFC", text)
    return [match.group(0).lower() for match in _TOKEN_RE.finditer(normalized)]


class ValidationError(ValueError):
    """Accumulated field errors from validating a raw request."""

    def __init__(self, errors: "list[dict[str, str]]"):
        self.errors = errors
        super().__init__("; ".join(f"{e['field']}: {e['message']}" for e in errors))


@dataclass(frozen=True)
class Query:
    """A validated search request. Build through :func:`validate_query`."""

    keywords: "tuple[str, ...]"
    combine: str = "all"
    min_likes: int = 0
    min_replies: int = 0
    min_retweets: int = 0
    date_range: Optional[DayRange] = None
    sort: str = "recency_desc"
    page: int = 1
    per_page: int = DEFAULT_PER_PAGE


@dataclass(frozen=True)
class ResultPage:
    total_matches: int
    page: int
    per_page: int
    items: "tuple[Tweet, ...]"


def _parse_int(raw, field_name: str, errors: list, *, minimum: int, default: int) -> int:
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except (TypeError, ValueError):
        errors.append({"field": field_name, "message": f"not an integer: {raw!r}"})
        return default
    if value < minimum:
        errors.append({"field": field_name, "message": f"must be >= {minimum}"})
        return default
    return value


def _parse_day(raw, field_name: str, errors: list) -> Optional[date]:
    if raw is None or raw == "":
        return None
    if isinstance(raw, date):
        return raw
    try:
        return date.fromisoformat(str(raw))
    except ValueError:
        errors.append({"field": field_name, "message": f"expected YYYY-MM-DD, got {raw!r}"})
        return None


def validate_query(raw: Mapping, *, per_page_max: int = PER_PAGE_MAX) -> Query:
    """Validate and normalize a raw request into a Query.

    Errors are accumulated across fields and raised together as a
    ValidationError, so a response can report every problem at once.
    Recognized keys: keywords, combine, min_likes, min_replies, min_retweets,
    from, to, sort, page, per_page.
    """
    errors: "list[dict[str, str]]" = []

    raw_keywords = raw.get("keywords")
    if raw_keywords is None:
        raw_keywords = []
    elif isinstance(raw_keywords, str):
        raw_keywords = [raw_keywords]
    else:
        raw_keywords = list(raw_keywords)

    keywords = []
    if not raw_keywords:
        errors.append({"field": "keywords", "message": "at least 1 keyword required"})
    elif len(raw_keywords) > MAX_KEYWORDS:
        errors.append({"field": "keywords", "message": f"at most {MAX_KEYWORDS} keywords"})
    else:
        for kw in raw_keywords:
            tokens = tokenize(str(kw))
            if len(tokens) != 1:
                errors.append(
                    {"field": "keywords", "message": f"single token required, got {kw!r}"}
                )
            else:
                keywords.append(tokens[0])

    combine = raw.get("combine") or "all"
    if combine not in COMBINE_MODES:
        errors.append(
            {"field": "combine", "message": f"must be one of {', '.join(COMBINE_MODES)}"}
        )

    min_likes = _parse_int(raw.get("min_likes"), "min_likes", errors, minimum=0, default=0)
    min_replies = _parse_int(raw.get("min_replies"), "min_replies", errors, minimum=0, default=0)
    min_retweets = _parse_int(
        raw.get("min_retweets"), "min_retweets", errors, minimum=0, default=0
    )

    date_from = _parse_day(raw.get("from"), "from", errors)
    date_to = _parse_day(raw.get("to"), "to", errors)
    date_range = None
    if (date_from is None) != (date_to is None):
        errors.append(
            {"field": "date_range", "message": "from and to must be given together"}
        )
    elif date_from is not None and date_to is not None:
        if date_from > date_to:
            errors.append({"field": "date_range", "message": "from is after to"})
        else:
            date_range = DayRange(date_from, date_to)

    sort = raw.get("sort") or "recency_desc"
    if sort not in SORT_MODES:
        errors.append({"field": "sort", "message": f"must be one of {', '.join(SORT_MODES)}"})

    page = _parse_int(raw.get("page"), "page", errors, minimum=1, default=1)
    per_page = _parse_int(
        raw.get("per_page"), "per_page", errors, minimum=1, default=DEFAULT_PER_PAGE
    )
    if per_page > per_page_max:
        errors.append({"field": "per_page", "message": f"must be <= {per_page_max}"})

    if errors:
        raise ValidationError(errors)

    return Query(
        keywords=tuple(keywords),
        combine=combine,
        min_likes=min_likes,
        min_replies=min_replies,
        min_retweets=min_retweets,
        date_range=date_range,
        sort=sort,
        page=page,
        per_page=per_page,
    )


@dataclass(frozen=True)
class _DocMeta:
    created_at: datetime
    day: date
    likes: int
    replies: int
    retweets: int


@dataclass(frozen=True)
class Index:
    """Immutable inverted index over one corpus snapshot."""

    snapshot: CorpusSnapshot
    postings: "dict[str, tuple[str, ...]]"
    _posting_sets: "dict[str, frozenset[str]]" = field(repr=False, default_factory=dict)
    _meta: "dict[str, _DocMeta]" = field(repr=False, default_factory=dict)


def build_index(snapshot: CorpusSnapshot) -> Index:
    """Build token -> postings (ids in document order, set semantics per doc).

    A pure function of the snapshot: rebuilding from the same snapshot yields
    an identical index.
    """
    postings: "dict[str, list[str]]" = {}
    meta: "dict[str, _DocMeta]" = {}
    for tweet in snapshot.tweets:
        for token in set(tokenize(tweet.text)):
            postings.setdefault(token, []).append(tweet.id)
        meta[tweet.id] = _DocMeta(
            created_at=tweet.created_at,
            day=tweet.day,
            likes=tweet.engagement.like_count,
            replies=tweet.engagement.reply_count,
            retweets=tweet.engagement.retweet_count,
        )
    frozen = {token: tuple(ids) for token, ids in postings.items()}
    return Index(
        snapshot=snapshot,
        postings=frozen,
        _posting_sets={token: frozenset(ids) for token, ids in frozen.items()},
        _meta=meta,
    )


def _sort_key(index: Index, sort: str):
    meta = index._meta
    if sort == "likes_desc":
        return lambda tid: (-meta[tid].likes, tid)
    if sort == "retweets_desc":
        return lambda tid: (-meta[tid].retweets, tid)
    return lambda tid: (-meta[tid].created_at.timestamp(), tid)


def execute(index: Index, query: Query) -> ResultPage:
    """Evaluate a validated query against the index.

    A tweet matches iff its token set satisfies the keyword combine mode AND
    every engagement count meets its minimum AND (if a range is set) its UTC
    day falls inside it. Result set is identical to a linear scan applying the
    same predicate.
    """
    empty: "frozenset[str]" = frozenset()
    keyword_sets = [index._posting_sets.get(kw, empty) for kw in query.keywords]
    if query.combine == "all":
        candidates = set(keyword_sets[0])
        for s in keyword_sets[1:]:
            candidates &= s
    else:
        candidates = set()
        for s in keyword_sets:
            candidates |= s

    meta = index._meta
    matched = []
    for tid in candidates:
        m = meta[tid]
        if m.likes < query.min_likes:
            continue
        if m.replies < query.min_replies:
            continue
        if m.retweets < query.min_retweets:
            continue
        if query.date_range is not None and m.day not in query.date_range:
            continue
        matched.append(tid)

    matched.sort(key=_sort_key(index, query.sort))
    start = (query.page - 1) * query.per_page
    page_ids = matched[start : start + query.per_page]
    return ResultPage(
        total_matches=len(matched),
        page=query.page,
        per_page=query.per_page,
        items=tuple(index.snapshot.by_id[tid] for tid in page_ids),
    )
