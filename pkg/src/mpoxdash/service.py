"""HTTP API over a loaded corpus snapshot.

Handlers are thin adapters: they decode parameters, call the corresponding
core function, and encode its output. The corpus + index pair is held as one
immutable bundle; ``POST /api/reload`` builds a new bundle from disk and swaps
it atomically, so in-flight requests finish on the snapshot they started with.
Every response carries ``snapshot_id`` (the store's ids digest) so clients can
detect staleness.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import analytics, schemas, search
from .analytics import Lexicon, TopicRuleSet
from .config import ServiceConfig, load_sentiment_lexicon, load_topic_rules
from .corpus import Corpus, CorpusSnapshot
from .model import DayRange, InvalidRange, Tweet
from .search import Index, ValidationError, build_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnapshotBundle:
    """One corpus snapshot and its index, served together until a reload."""

    snapshot: CorpusSnapshot
    index: Index

    @property
    def snapshot_id(self) -> str:
        return self.snapshot.ids_digest


def load_bundle(config: ServiceConfig) -> SnapshotBundle:
    corpus = Corpus(config.corpus_path)
    snapshot = corpus.snapshot()
    return SnapshotBundle(snapshot=snapshot, index=build_index(snapshot))


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the API. Raises on bad config, missing corpus, or bad lexicons."""
    rules = load_topic_rules(config)
    sentiment_lexicon = load_sentiment_lexicon(config)
    bundle = load_bundle(config)

    app = FastAPI(title="mpoxdash", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.bundle = bundle
    app.state.rules = rules
    app.state.sentiment_lexicon = sentiment_lexicon

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    _register_error_handlers(app)
    _register_routes(app)

    if config.static_dir is not None:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def _error_response(status: int, errors: "list[dict[str, str]]") -> JSONResponse:
    body = schemas.ErrorBody(errors=[schemas.FieldError(**e) for e in errors])
    return JSONResponse(status_code=status, content=body.model_dump())


def _register_error_handlers(app: FastAPI) -> None:
    @app.exception_handler(ValidationError)
    async def on_validation_error(request: Request, exc: ValidationError):
        return _error_response(400, exc.errors)

    @app.exception_handler(InvalidRange)
    async def on_invalid_range(request: Request, exc: InvalidRange):
        return _error_response(400, [{"field": "date_range", "message": str(exc)}])

    @app.exception_handler(StarletteHTTPException)
    async def on_http_exception(request: Request, exc: StarletteHTTPException):
        # Keep 4xx bodies machine-readable even for unknown routes.
        return _error_response(
            exc.status_code, [{"field": "request", "message": str(exc.detail)}]
        )

    @app.exception_handler(RequestValidationError)
    async def on_request_validation(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in err.get("loc", [])[1:]) or "request",
             "message": err.get("msg", "invalid")}
            for err in exc.errors()
        ]
        return _error_response(400, errors)

    @app.exception_handler(Exception)
    async def on_internal_error(request: Request, exc: Exception):
        logger.exception("internal error serving %s", request.url.path)
        return _error_response(500, [{"field": "internal", "message": "internal error"}])


def _day_range_param(
    date_from: Optional[str],
    date_to: Optional[str],
    bundle: SnapshotBundle,
    *,
    from_field: str = "from",
    to_field: str = "to",
) -> Optional[DayRange]:
    """Parse an optional from/to pair; default to the corpus's full span."""
    errors = []
    parsed = {}
    for field_name, value in ((from_field, date_from), (to_field, date_to)):
        if value is None or value == "":
            parsed[field_name] = None
            continue
        try:
            parsed[field_name] = date.fromisoformat(value)
        except ValueError:
            errors.append(
                {"field": field_name, "message": f"expected YYYY-MM-DD, got {value!r}"}
            )
    if errors:
        raise ValidationError(errors)

    start, end = parsed[from_field], parsed[to_field]
    if start is None and end is None:
        stats = bundle.snapshot.stats()
        if stats.date_min is None:
            return None
        return DayRange(stats.date_min, stats.date_max)
    if (start is None) != (end is None):
        raise ValidationError(
            [{"field": "date_range", "message": f"{from_field} and {to_field} must be given together"}]
        )
    if start > end:
        raise ValidationError(
            [{"field": "date_range", "message": f"{from_field} is after {to_field}"}]
        )
    return DayRange(start, end)


def _register_routes(app: FastAPI) -> None:
    def tweet_out(tweet: Tweet, rules: TopicRuleSet, lexicon: Lexicon, tau: float):
        label = analytics.label_topic(tweet, rules)
        sentiment = analytics.score_sentiment(tweet, lexicon, tau)
        return schemas.TweetOut.from_tweet(tweet, label.value, sentiment)

    @app.get("/api/health", response_model=schemas.HealthResponse)
    async def health(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        return schemas.HealthResponse(
            status="ok",
            corpus_total=len(bundle.snapshot.tweets),
            snapshot_id=bundle.snapshot_id,
        )

    @app.get("/api/stats", response_model=schemas.StatsResponse)
    async def stats(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        s = bundle.snapshot.stats()
        return schemas.StatsResponse(
            total=s.total,
            per_day={day.isoformat(): count for day, count in sorted(s.per_day.items())},
            date_min=s.date_min.isoformat() if s.date_min else None,
            date_max=s.date_max.isoformat() if s.date_max else None,
            snapshot_id=bundle.snapshot_id,
        )

    @app.get("/api/search", response_model=schemas.SearchResponse)
    async def handle_search(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        config: ServiceConfig = request.app.state.config
        params = request.query_params
        raw = {
            "keywords": params.getlist("k"),
            "combine": params.get("combine"),
            "min_likes": params.get("min_likes"),
            "min_replies": params.get("min_replies"),
            "min_retweets": params.get("min_retweets"),
            "from": params.get("from"),
            "to": params.get("to"),
            "sort": params.get("sort"),
            "page": params.get("page"),
            "per_page": params.get("per_page"),
        }
        query = search.validate_query(raw, per_page_max=config.per_page_max)
        page = search.execute(bundle.index, query)
        rules = request.app.state.rules
        lexicon = request.app.state.sentiment_lexicon
        return schemas.SearchResponse(
            total_matches=page.total_matches,
            page=page.page,
            per_page=page.per_page,
            items=[
                tweet_out(t, rules, lexicon, config.sentiment_tau) for t in page.items
            ],
            snapshot_id=bundle.snapshot_id,
        )

    @app.get("/api/tweets/{tweet_id}", response_model=schemas.TweetDetailResponse)
    async def tweet_detail(tweet_id: str, request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        config: ServiceConfig = request.app.state.config
        tweet = bundle.snapshot.by_id.get(tweet_id)
        if tweet is None:
            return _error_response(
                404, [{"field": "id", "message": f"unknown tweet id: {tweet_id}"}]
            )
        rules = request.app.state.rules
        _, matched = analytics.explain_label(tweet.text, rules)
        return schemas.TweetDetailResponse(
            tweet=tweet_out(tweet, rules, request.app.state.sentiment_lexicon, config.sentiment_tau),
            matched_terms=matched,
            snapshot_id=bundle.snapshot_id,
        )

    @app.get("/api/clusters/timeseries", response_model=schemas.ClusterSeriesResponse)
    async def cluster_timeseries(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        day_range = _day_range_param(
            request.query_params.get("from"), request.query_params.get("to"), bundle
        )
        points = []
        if day_range is not None:
            points = analytics.daily_cluster_proportions(
                bundle.snapshot, request.app.state.rules, day_range
            )
        return schemas.ClusterSeriesResponse(
            points=[schemas.ClusterPointOut.from_point(p) for p in points],
            snapshot_id=bundle.snapshot_id,
        )

    @app.get("/api/trends", response_model=schemas.TrendResponse)
    async def trends(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        raw_keyword = request.query_params.get("k") or ""
        tokens = search.tokenize(raw_keyword)
        if len(tokens) != 1:
            raise ValidationError(
                [{"field": "k", "message": f"expected one single-token keyword, got {raw_keyword!r}"}]
            )
        keyword = tokens[0]
        day_range = _day_range_param(
            request.query_params.get("from"), request.query_params.get("to"), bundle
        )
        points = []
        if day_range is not None:
            points = analytics.keyword_trend(bundle.snapshot, keyword, day_range)
        return schemas.TrendResponse(
            keyword=keyword,
            points=[
                schemas.TrendPointOut(day=day.isoformat(), count=count)
                for day, count in points
            ],
            snapshot_id=bundle.snapshot_id,
        )

    @app.get("/api/locations", response_model=schemas.LocationsResponse)
    async def locations(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        params = request.query_params
        day_range = _day_range_param(params.get("from"), params.get("to"), bundle)
        top_n_raw = params.get("top_n")
        top_n = 10
        if top_n_raw:
            try:
                top_n = int(top_n_raw)
            except ValueError:
                raise ValidationError(
                    [{"field": "top_n", "message": f"not an integer: {top_n_raw!r}"}]
                ) from None
        if top_n < 1:
            raise ValidationError([{"field": "top_n", "message": "must be >= 1"}])
        breakdown = analytics.location_breakdown(bundle.snapshot, day_range, top_n)
        return schemas.LocationsResponse.from_breakdown(breakdown, bundle.snapshot_id)

    @app.get("/api/volume", response_model=schemas.VolumeResponse)
    async def volume(request: Request):
        bundle: SnapshotBundle = request.app.state.bundle
        params = request.query_params
        errors = []
        bounds = {}
        for field_name in ("a_from", "a_to", "b_from", "b_to"):
            value = params.get(field_name)
            if not value:
                errors.append({"field": field_name, "message": "required (YYYY-MM-DD)"})
                continue
            try:
                bounds[field_name] = date.fromisoformat(value)
            except ValueError:
                errors.append(
                    {"field": field_name, "message": f"expected YYYY-MM-DD, got {value!r}"}
                )
        if errors:
            raise ValidationError(errors)
        try:
            period_a = DayRange(bounds["a_from"], bounds["a_to"])
        except InvalidRange as exc:
            raise ValidationError([{"field": "a_from", "message": str(exc)}]) from None
        try:
            period_b = DayRange(bounds["b_from"], bounds["b_to"])
        except InvalidRange as exc:
            raise ValidationError([{"field": "b_from", "message": str(exc)}]) from None
        cmp = analytics.volume_comparison(bundle.snapshot, period_a, period_b)
        return schemas.VolumeResponse.from_comparison(cmp, bundle.snapshot_id)

    @app.post("/api/reload", response_model=schemas.ReloadResponse)
    async def reload(request: Request):
        config: ServiceConfig = request.app.state.config
        new_bundle = load_bundle(config)
        request.app.state.bundle = new_bundle
        logger.info(
            "reloaded corpus: %d tweets, snapshot %s",
            len(new_bundle.snapshot.tweets),
            new_bundle.snapshot_id[:12],
        )
        return schemas.ReloadResponse(
            status="reloaded",
            corpus_total=len(new_bundle.snapshot.tweets),
            snapshot_id=new_bundle.snapshot_id,
        )


def serve(config: ServiceConfig) -> None:
    """Run the API until shutdown; SIGINT/SIGTERM stop it cleanly."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
