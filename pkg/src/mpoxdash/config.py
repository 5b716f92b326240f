"""Configuration loading and validation.

One YAML document drives every entry point. Relative paths are resolved
against the config file's directory. Example:

.. code-block:: yaml

    bind: "127.0.0.1:8000"
    corpus_path: "corpus"
    keywords: ["mpox", "monkeypox"]
    capture_wrapper_key: "data"
    datasets:
      - path: "data/stream_2024.ndjson"
        format: "stream_sample"        # optional; auto-detected when absent
        column_map:                    # optional per-field overrides
          text: "full_text"
    sentiment:
      lexicon_path: "lexicons/sentiment.txt"   # default: packaged starter list
      tau: 0.05
    topics:                            # default: packaged starter lists
      - label: "cynicism"
        lexicon_path: "lexicons/cynicism.txt"
      - label: "misinformation"
        lexicon_path: "lexicons/misinformation.txt"
    per_page_max: 200
    cors_origins: []
    static_dir: "frontend/dist"        # optional; serves the dashboard bundle

``MPOXDASH_BIND`` overrides ``bind`` from the environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from .analytics import DEFAULT_TAU, Lexicon, TopicRuleSet, load_lexicon
from .ingest import CANONICAL_FIELDS, DEFAULT_WRAPPER_KEY
from .model import ClusterLabel, SourceKind
from .search import PER_PAGE_MAX, tokenize

BIND_ENV_VAR = "MPOXDASH_BIND"
DEFAULT_BIND = "127.0.0.1:8000"
DEFAULT_KEYWORDS = ("mpox",)

# Packaged-category order doubles as the labeling tie-break priority.
DEFAULT_TOPIC_ORDER = (
    ClusterLabel.CYNICISM,
    ClusterLabel.COVID_COMPARISON,
    ClusterLabel.GOVERNMENT_ACTION,
    ClusterLabel.MISINFORMATION,
)


class ConfigError(Exception):
    """Bad or missing configuration; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


@dataclass(frozen=True)
class DatasetSpec:
    path: Path
    format: Optional[SourceKind] = None
    column_map: "Optional[dict[str, str]]" = None


@dataclass(frozen=True)
class ServiceConfig:
    corpus_path: Path
    host: str = "127.0.0.1"
    port: int = 8000
    datasets: "tuple[DatasetSpec, ...]" = ()
    keywords: "tuple[str, ...]" = DEFAULT_KEYWORDS
    capture_wrapper_key: str = DEFAULT_WRAPPER_KEY
    sentiment_lexicon_path: Optional[Path] = None
    sentiment_tau: float = DEFAULT_TAU
    topics: "Optional[tuple[tuple[ClusterLabel, Path], ...]]" = None
    per_page_max: int = PER_PAGE_MAX
    cors_origins: "tuple[str, ...]" = ()
    static_dir: Optional[Path] = None

    def dataset_for(self, path) -> Optional[DatasetSpec]:
        resolved = Path(path).resolve()
        for spec in self.datasets:
            if spec.path.resolve() == resolved:
                return spec
        return None


def _parse_bind(bind: str, key: str) -> "tuple[str, int]":
    host, sep, port_text = str(bind).rpartition(":")
    if not sep or not host:
        raise ConfigError(key, f"expected host:port, got {bind!r}")
    try:
        port = int(port_text)
    except ValueError:
        raise ConfigError(key, f"port is not an integer: {port_text!r}") from None
    if not 1 <= port <= 65535:
        raise ConfigError(key, f"port out of range [1, 65535]: {port}")
    return host, port


def _normalize_keyword(raw: str, key: str) -> str:
    tokens = tokenize(str(raw))
    if len(tokens) != 1:
        raise ConfigError(
            key, f"keywords must be single tokens (multi-word phrases unsupported): {raw!r}"
        )
    return tokens[0]


def load_config(path) -> ServiceConfig:
    """Load and validate a config file. Raises ConfigError naming the bad key."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError("config", f"unreadable config file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"invalid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a mapping")

    base = path.parent

    def resolve(p) -> Path:
        p = Path(str(p))
        return p if p.is_absolute() else (base / p)

    bind = os.environ.get(BIND_ENV_VAR) or raw.get("bind") or DEFAULT_BIND
    bind_key = BIND_ENV_VAR if os.environ.get(BIND_ENV_VAR) else "bind"
    host, port = _parse_bind(bind, bind_key)

    if "corpus_path" not in raw:
        raise ConfigError("corpus_path", "required")
    corpus_path = resolve(raw["corpus_path"])

    datasets = []
    for i, entry in enumerate(raw.get("datasets") or []):
        key = f"datasets[{i}]"
        if not isinstance(entry, dict) or "path" not in entry:
            raise ConfigError(key, "each dataset needs a path")
        fmt = None
        if entry.get("format"):
            try:
                fmt = SourceKind(entry["format"])
            except ValueError:
                valid = ", ".join(k.value for k in SourceKind)
                raise ConfigError(
                    f"{key}.format", f"unknown format {entry['format']!r}; one of: {valid}"
                ) from None
        column_map = entry.get("column_map")
        if column_map is not None:
            if not isinstance(column_map, dict):
                raise ConfigError(f"{key}.column_map", "must be a mapping")
            column_map = {str(k): str(v) for k, v in column_map.items()}
            unknown = set(column_map) - set(CANONICAL_FIELDS)
            if unknown:
                raise ConfigError(
                    f"{key}.column_map", f"unknown canonical fields: {sorted(unknown)}"
                )
        datasets.append(DatasetSpec(path=resolve(entry["path"]), format=fmt, column_map=column_map))

    raw_keywords = raw.get("keywords", list(DEFAULT_KEYWORDS))
    if isinstance(raw_keywords, str):
        raw_keywords = [raw_keywords]
    if not raw_keywords:
        raise ConfigError("keywords", "must not be empty")
    keywords = tuple(_normalize_keyword(k, "keywords") for k in raw_keywords)

    wrapper_key = str(raw.get("capture_wrapper_key", DEFAULT_WRAPPER_KEY))
    if not wrapper_key:
        raise ConfigError("capture_wrapper_key", "must not be empty")

    sentiment = raw.get("sentiment") or {}
    if not isinstance(sentiment, dict):
        raise ConfigError("sentiment", "must be a mapping")
    sentiment_path = sentiment.get("lexicon_path")
    if sentiment_path is not None:
        sentiment_path = resolve(sentiment_path)
        if not sentiment_path.is_file():
            raise ConfigError("sentiment.lexicon_path", f"file not found: {sentiment_path}")
    try:
        tau = float(sentiment.get("tau", DEFAULT_TAU))
    except (TypeError, ValueError):
        raise ConfigError("sentiment.tau", f"not a number: {sentiment.get('tau')!r}") from None
    if tau <= 0:
        raise ConfigError("sentiment.tau", f"must be > 0, got {tau}")

    topics = None
    if raw.get("topics") is not None:
        topics = []
        seen = set()
        for i, entry in enumerate(raw["topics"]):
            key = f"topics[{i}]"
            if not isinstance(entry, dict) or "label" not in entry or "lexicon_path" not in entry:
                raise ConfigError(key, "each topic needs label and lexicon_path")
            try:
                label = ClusterLabel(entry["label"])
            except ValueError:
                valid = ", ".join(l.value for l in ClusterLabel if l is not ClusterLabel.UNCATEGORIZED)
                raise ConfigError(f"{key}.label", f"unknown label; one of: {valid}") from None
            if label is ClusterLabel.UNCATEGORIZED:
                raise ConfigError(f"{key}.label", "uncategorized is reserved for zero matches")
            if label in seen:
                raise ConfigError(f"{key}.label", f"label {label.value!r} listed twice")
            seen.add(label)
            lex_path = resolve(entry["lexicon_path"])
            if not lex_path.is_file():
                raise ConfigError(f"{key}.lexicon_path", f"file not found: {lex_path}")
            topics.append((label, lex_path))
        topics = tuple(topics)

    try:
        per_page_max = int(raw.get("per_page_max", PER_PAGE_MAX))
    except (TypeError, ValueError):
        raise ConfigError("per_page_max", f"not an integer: {raw.get('per_page_max')!r}") from None
    if per_page_max < 1:
        raise ConfigError("per_page_max", "must be >= 1")

    cors = raw.get("cors_origins") or []
    if isinstance(cors, str):
        cors = [cors]

    static_dir = raw.get("static_dir")
    if static_dir is not None:
        static_dir = resolve(static_dir)
        if not static_dir.is_dir():
            raise ConfigError("static_dir", f"directory not found: {static_dir}")

    return ServiceConfig(
        corpus_path=corpus_path,
        host=host,
        port=port,
        datasets=tuple(datasets),
        keywords=keywords,
        capture_wrapper_key=wrapper_key,
        sentiment_lexicon_path=sentiment_path,
        sentiment_tau=tau,
        topics=topics,
        per_page_max=per_page_max,
        cors_origins=tuple(str(o) for o in cors),
        static_dir=static_dir,
    )


def _packaged_lexicon(name: str, *, weighted: bool) -> Lexicon:
    ref = resources.files("mpoxdash") / "lexicons" / f"{name}.txt"
    with resources.as_file(ref) as real_path:
        return load_lexicon(real_path, weighted=weighted, name=name)


def load_sentiment_lexicon(config: ServiceConfig) -> Lexicon:
    """The configured sentiment lexicon, or the packaged starter list."""
    if config.sentiment_lexicon_path is not None:
        return load_lexicon(config.sentiment_lexicon_path, weighted=True)
    return _packaged_lexicon("sentiment", weighted=True)


def load_topic_rules(config: ServiceConfig) -> TopicRuleSet:
    """The configured topic rule set, or packaged starter lists in default order.

    Config list order is preserved: it is the labeling tie-break priority.
    """
    if config.topics is None:
        rules = tuple(
            (label, _packaged_lexicon(label.value, weighted=False))
            for label in DEFAULT_TOPIC_ORDER
        )
    else:
        rules = tuple(
            (label, load_lexicon(lex_path, weighted=False))
            for label, lex_path in config.topics
        )
    return TopicRuleSet(rules=rules)
