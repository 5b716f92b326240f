"""Tokenizer contract, query validation, and index-vs-linear-scan equivalence."""

from __future__ import annotations

import random
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import tweet
from mpoxdash.corpus import CorpusSnapshot
from mpoxdash.model import DayRange
from mpoxdash.search import (
    DEFAULT_PER_PAGE,
    MAX_KEYWORDS,
    Query,
    ValidationError,
    build_index,
    execute,
    tokenize,
    validate_query,
)
from oracle import search_oracle, tokenize_oracle


class TestTokenize:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("#mpox", ["mpox"]),
            ("@WHO discusses Mpox!", ["who", "discusses", "mpox"]),
            ("MPOX-2024 update", ["mpox", "2024", "update"]),
            ("snake_case splits", ["snake", "case", "splits"]),
            ("", []),
            ("!!! ...", []),
            ("café == café", ["café", "café"]),
            ("emoji \U0001f489 vaccine", ["emoji", "vaccine"]),
            ("don't", ["don", "t"]),
            ("3,000 tweets", ["3", "000", "tweets"]),
        ],
    )
    def test_examples(self, text, expected):
        assert tokenize(text) == expected

    @settings(max_examples=500)
    @given(st.text(max_size=120))
    def test_matches_character_oracle(self, text):
        assert tokenize(text) == tokenize_oracle(text)

    @given(st.text(max_size=120))
    def test_tokens_are_lowercase_and_nonempty(self, text):
        for token in tokenize(text):
            assert token
            assert token == token.lower()


class TestValidateQuery:
    def test_minimal_defaults(self):
        q = validate_query({"keywords": ["mpox"]})
        assert q == Query(keywords=("mpox",))
        assert q.combine == "all"
        assert q.sort == "recency_desc"
        assert q.page == 1
        assert q.per_page == DEFAULT_PER_PAGE
        assert q.date_range is None

    def test_keyword_normalized_like_text(self):
        q = validate_query({"keywords": ["#Mpox"]})
        assert q.keywords == ("mpox",)

    def test_single_string_keyword_accepted(self):
        assert validate_query({"keywords": "mpox"}).keywords == ("mpox",)

    def test_three_keywords_accepted(self):
        q = validate_query({"keywords": ["a", "b", "c"]})
        assert q.keywords == ("a", "b", "c")

    def test_four_keywords_rejected(self):
        with pytest.raises(ValidationError) as exc:
            validate_query({"keywords": ["a", "b", "c", "d"]})
        assert [e["field"] for e in exc.value.errors] == ["keywords"]
        assert str(MAX_KEYWORDS) in exc.value.errors[0]["message"]

    def test_no_keywords_rejected(self):
        for raw in ({}, {"keywords": []}, {"keywords": None}):
            with pytest.raises(ValidationError):
                validate_query(raw)

    @pytest.mark.parametrize("bad", ["two words", "", "!!!", "a b c"])
    def test_multi_token_keyword_rejected(self, bad):
        with pytest.raises(ValidationError) as exc:
            validate_query({"keywords": [bad]})
        assert exc.value.errors[0]["field"] == "keywords"

    def test_errors_accumulate_across_fields(self):
        raw = {
            "keywords": ["a", "b", "c", "d"],
            "combine": "sometimes",
            "min_likes": "-3",
            "sort": "oldest",
            "per_page": "9999",
            "page": "0",
        }
        with pytest.raises(ValidationError) as exc:
            validate_query(raw)
        fields = {e["field"] for e in exc.value.errors}
        assert fields == {"keywords", "combine", "min_likes", "sort", "per_page", "page"}

    def test_from_without_to_rejected(self):
        with pytest.raises(ValidationError) as exc:
            validate_query({"keywords": ["mpox"], "from": "2024-04-01"})
        assert any(e["field"] == "date_range" for e in exc.value.errors)

    def test_from_after_to_rejected(self):
        with pytest.raises(ValidationError) as exc:
            validate_query(
                {"keywords": ["mpox"], "from": "2024-04-02", "to": "2024-04-01"}
            )
        assert any(e["field"] == "date_range" for e in exc.value.errors)

    def test_valid_range_parsed(self):
        q = validate_query(
            {"keywords": ["mpox"], "from": "2024-04-01", "to": "2024-04-30"}
        )
        assert q.date_range == DayRange(date(2024, 4, 1), date(2024, 4, 30))

    def test_malformed_date_rejected(self):
        with pytest.raises(ValidationError) as exc:
            validate_query({"keywords": ["mpox"], "from": "04/01/2024", "to": "2024-04-30"})
        assert any(e["field"] == "from" for e in exc.value.errors)

    def test_thresholds_parsed(self):
        q = validate_query(
            {"keywords": ["mpox"], "min_likes": "5", "min_replies": 2, "min_retweets": "0"}
        )
        assert (q.min_likes, q.min_replies, q.min_retweets) == (5, 2, 0)

    @pytest.mark.parametrize("value", ["abc", "1.5", "-1"])
    def test_bad_threshold_rejected(self, value):
        with pytest.raises(ValidationError) as exc:
            validate_query({"keywords": ["mpox"], "min_likes": value})
        assert exc.value.errors[0]["field"] == "min_likes"

    def test_per_page_cap_configurable(self):
        assert validate_query({"keywords": ["m"], "per_page": "200"}).per_page == 200
        with pytest.raises(ValidationError):
            validate_query({"keywords": ["m"], "per_page": "201"})
        with pytest.raises(ValidationError):
            validate_query({"keywords": ["m"], "per_page": "51"}, per_page_max=50)

    @pytest.mark.parametrize("value", ["0", "-1"])
    def test_per_page_lower_bound(self, value):
        with pytest.raises(ValidationError):
            validate_query({"keywords": ["m"], "per_page": value})


WORDS = [
    "mpox", "monkeypox", "vaccine", "outbreak", "government", "hoax", "covid",
    "lockdown", "cases", "health", "virus", "news", "update", "panic", "agency",
]


def random_corpus(n=300, seed=7):
    rng = random.Random(seed)
    tweets = []
    for i in range(n):
        text = " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 8)))
        tweets.append(
            tweet(
                id=str(i),
                created_at=f"2024-04-{rng.randint(1, 10):02d}T{rng.randint(0, 23):02d}:00:00Z",
                text=text,
                like_count=rng.randint(0, 50),
                reply_count=rng.randint(0, 20),
                retweet_count=rng.randint(0, 30),
            )
        )
    return CorpusSnapshot.from_tweets(tweets)


def random_query(rng):
    kwargs = {
        "keywords": tuple(rng.sample(WORDS + ["absentword"], rng.randint(1, 3))),
        "combine": rng.choice(["all", "any"]),
        "min_likes": rng.choice([0, 0, 5, 25, 51]),
        "min_replies": rng.choice([0, 0, 3, 21]),
        "min_retweets": rng.choice([0, 0, 10]),
        "sort": rng.choice(["recency_desc", "likes_desc", "retweets_desc"]),
        "page": 1,
        "per_page": 200,
    }
    if rng.random() < 0.5:
        a, b = sorted(rng.sample(range(1, 11), 2))
        kwargs["date_range"] = DayRange(date(2024, 4, a), date(2024, 4, b))
    return Query(**kwargs)


class TestExecute:
    snapshot = random_corpus()
    index = build_index(snapshot)

    def all_ids(self, query):
        ids = []
        page = 1
        while True:
            result = execute(self.index, Query(**{**query.__dict__, "page": page}))
            ids.extend(t.id for t in result.items)
            if page * query.per_page >= result.total_matches:
                return result.total_matches, ids
            page += 1

    def test_matches_linear_scan_oracle(self):
        rng = random.Random(42)
        for _ in range(150):
            query = random_query(rng)
            total, ids = self.all_ids(query)
            expected = search_oracle(self.snapshot.tweets, query)
            assert set(ids) == expected, query
            assert total == len(expected)
            assert len(ids) == len(set(ids))

    def test_all_results_subset_of_any(self):
        rng = random.Random(43)
        for _ in range(40):
            query = random_query(rng)
            _, all_ids = self.all_ids(Query(**{**query.__dict__, "combine": "all"}))
            _, any_ids = self.all_ids(Query(**{**query.__dict__, "combine": "any"}))
            assert set(all_ids) <= set(any_ids)

    def test_raising_threshold_never_grows_results(self):
        base = Query(keywords=("mpox",), per_page=200)
        previous = None
        for min_likes in (0, 10, 20, 30, 60):
            _, ids = self.all_ids(Query(**{**base.__dict__, "min_likes": min_likes}))
            if previous is not None:
                assert set(ids) <= previous
            previous = set(ids)

    def test_sort_orders(self):
        by_id = self.snapshot.by_id
        for sort, key in [
            ("recency_desc", lambda t: (-t.created_at.timestamp(), t.id)),
            ("likes_desc", lambda t: (-t.engagement.like_count, t.id)),
            ("retweets_desc", lambda t: (-t.engagement.retweet_count, t.id)),
        ]:
            _, ids = self.all_ids(Query(keywords=("mpox",), sort=sort, per_page=200))
            expected = sorted((by_id[i] for i in ids), key=key)
            assert ids == [t.id for t in expected]

    def test_pagination_concatenates_without_gaps(self):
        full = execute(self.index, Query(keywords=("mpox",), per_page=200))
        paged = []
        for page in range(1, (full.total_matches // 7) + 2):
            result = execute(self.index, Query(keywords=("mpox",), per_page=7, page=page))
            paged.extend(t.id for t in result.items)
        assert paged == [t.id for t in full.items]

    def test_page_past_end_is_empty(self):
        result = execute(self.index, Query(keywords=("mpox",), page=500))
        assert result.items == ()
        assert result.total_matches > 0

    def test_unknown_keyword_matches_nothing(self):
        result = execute(self.index, Query(keywords=("zzzznope",)))
        assert result.total_matches == 0
        assert result.items == ()

    def test_execute_is_deterministic(self):
        query = Query(keywords=("mpox", "vaccine"), combine="any", per_page=200)
        first = execute(self.index, query)
        second = execute(self.index, query)
        assert first == second


class TestBuildIndex:
    def test_postings_in_document_order_with_set_semantics(self):
        snapshot = CorpusSnapshot.from_tweets([
            tweet(id="b", created_at="2024-04-01T10:00:00Z", text="mpox mpox mpox"),
            tweet(id="a", created_at="2024-04-02T10:00:00Z", text="mpox and covid"),
            tweet(id="c", created_at="2024-04-03T10:00:00Z", text="nothing else"),
        ])
        index = build_index(snapshot)
        assert index.postings["mpox"] == ("b", "a")
        assert index.postings["covid"] == ("a",)
        assert "mpox" not in index.postings.get("nothing", ())

    def test_rebuild_is_identical(self):
        snapshot = random_corpus(n=50, seed=3)
        assert build_index(snapshot).postings == build_index(snapshot).postings
