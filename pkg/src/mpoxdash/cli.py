"""Operator commands: ingest datasets, export slices, preview labels, serve.

Exit codes are a stable scripting contract: 0 success, 1 config or usage
error, 2 partial data failure (some input files failed, the rest were still
processed). Reports go to stdout, diagnostics to stderr, and every command
accepts ``--json`` for machine-readable output with the same numbers the
human tables show.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path
from typing import Optional

import click

from . import analytics, ingest, service
from .config import ConfigError, ServiceConfig, load_config, load_sentiment_lexicon, load_topic_rules
from .corpus import Corpus, StoreCorrupt, encode_tweet
from .model import DayRange, InvalidRange


def _fail(message: str, code: int) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return click.exceptions.Exit(code)


def _load(config_path: str) -> ServiceConfig:
    try:
        return load_config(config_path)
    except (ConfigError, OSError) as exc:
        raise _fail(str(exc), 1) from None


config_option = click.option(
    "--config", "config_path", required=True, type=click.Path(), help="Path to the YAML config file."
)
json_option = click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")


@click.group()
def main() -> None:
    """Tweet corpus tooling: ingest datasets, export, label, serve."""


_REPORT_COLUMNS = ("records_read", "matched", "unmatched", "malformed", "duplicates_skipped")


@main.command("ingest")
@config_option
@json_option
@click.argument("paths", nargs=-1, required=True, type=click.Path())
def cmd_ingest(config_path: str, as_json: bool, paths: "tuple[str, ...]") -> None:
    """Parse the given dataset files and append matching tweets to the corpus.

    Files are processed independently: one unreadable or unrecognizable file
    does not stop the others, it just turns the exit code into 2.
    """
    config = _load(config_path)
    try:
        corpus = Corpus(config.corpus_path, create=True)
    except StoreCorrupt as exc:
        raise _fail(f"corpus store is corrupt: {exc}", 1) from None

    rows: "list[dict[str, object]]" = []
    failed = False
    for path in paths:
        spec = config.dataset_for(path)
        fmt = spec.format if spec else None
        column_map = spec.column_map if spec else None
        try:
            report = ingest.ingest_file(
                path,
                corpus,
                keywords=config.keywords,
                fmt=fmt,
                column_map=column_map,
                wrapper_key=config.capture_wrapper_key,
            )
        except (OSError, ingest.UnknownFormat, ValueError) as exc:
            failed = True
            click.echo(f"error: {path}: {exc}", err=True)
            rows.append({"file": str(path), "error": str(exc)})
            continue
        rows.append(report.as_dict())

    if as_json:
        click.echo(json.dumps(rows, indent=2))
    else:
        _print_ingest_table(rows)

    raise click.exceptions.Exit(2 if failed else 0)


def _print_ingest_table(rows: "list[dict[str, object]]") -> None:
    header = ("file", "read", "matched", "unmatched", "malformed", "dups")
    table = [header]
    totals = dict.fromkeys(_REPORT_COLUMNS, 0)
    for row in rows:
        if "error" in row:
            table.append((str(row["file"]), "FAILED", "-", "-", "-", "-"))
            continue
        for column in _REPORT_COLUMNS:
            totals[column] += int(row[column])  # type: ignore[call-overload]
        table.append(
            (str(row["file"]),)
            + tuple(str(row[column]) for column in _REPORT_COLUMNS)
        )
    table.append(
        ("total",) + tuple(str(totals[column]) for column in _REPORT_COLUMNS)
    )
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    for row in table:
        click.echo("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())


def _parse_day(value: Optional[str], flag: str) -> Optional[date]:
    if value is None:
        return None
    try:
        return date.fromisoformat(value)
    except ValueError:
        raise _fail(f"{flag}: expected YYYY-MM-DD, got {value!r}", 1) from None


@main.command("export")
@config_option
@json_option
@click.option("--from", "date_from", default=None, help="First day (YYYY-MM-DD), inclusive.")
@click.option("--to", "date_to", default=None, help="Last day (YYYY-MM-DD), inclusive.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output NDJSON file.")
def cmd_export(
    config_path: str,
    as_json: bool,
    date_from: Optional[str],
    date_to: Optional[str],
    out_path: str,
) -> None:
    """Write a date slice of the corpus as canonical NDJSON (re-ingestable)."""
    config = _load(config_path)

    start = _parse_day(date_from, "--from")
    end = _parse_day(date_to, "--to")
    if (start is None) != (end is None):
        raise _fail("--from and --to must be given together", 1)
    day_range = None
    if start is not None:
        try:
            day_range = DayRange(start, end)
        except InvalidRange as exc:
            raise _fail(str(exc), 1) from None

    out = Path(out_path).resolve()
    store_root = config.corpus_path.resolve()
    if out == store_root or store_root in out.parents:
        raise _fail(
            f"refusing to export into the corpus store directory: {out}", 1
        )

    try:
        corpus = Corpus(config.corpus_path)
    except FileNotFoundError:
        raise _fail(f"corpus store not found: {config.corpus_path}", 1) from None
    except StoreCorrupt as exc:
        raise _fail(f"corpus store is corrupt: {exc}", 1) from None

    snapshot = corpus.snapshot()
    exported = 0
    try:
        with open(out, "w", encoding="utf-8") as fh:
            for tweet in snapshot.scan(day_range):
                fh.write(encode_tweet(tweet) + "\n")
                exported += 1
    except OSError as exc:
        raise _fail(f"cannot write {out}: {exc}", 1) from None

    if as_json:
        click.echo(json.dumps({"exported": exported, "out": str(out)}))
    else:
        click.echo(f"exported {exported} tweets to {out}")


@main.command("label")
@config_option
@json_option
@click.option("--id", "tweet_id", default=None, help="Label a tweet already in the corpus.")
@click.option("--text", "text", default=None, help="Label an ad-hoc text instead.")
def cmd_label(
    config_path: str, as_json: bool, tweet_id: Optional[str], text: Optional[str]
) -> None:
    """Show the topic label, matched lexicon terms, and sentiment for one tweet.

    The matched terms are the audit trail: they are the entire basis for the
    label, so an operator can verify a labeling decision by eye.
    """
    if (tweet_id is None) == (text is None):
        raise _fail("exactly one of --id or --text is required", 1)

    config = _load(config_path)
    try:
        rules = load_topic_rules(config)
        lexicon = load_sentiment_lexicon(config)
    except (ConfigError, analytics.LexiconError, OSError) as exc:
        raise _fail(str(exc), 1) from None

    if tweet_id is not None:
        try:
            corpus = Corpus(config.corpus_path)
        except FileNotFoundError:
            raise _fail(f"corpus store not found: {config.corpus_path}", 1) from None
        except StoreCorrupt as exc:
            raise _fail(f"corpus store is corrupt: {exc}", 1) from None
        tweet = corpus.snapshot().by_id.get(tweet_id)
        if tweet is None:
            raise _fail(f"unknown tweet id: {tweet_id}", 1)
        text = tweet.text

    label, matched = analytics.explain_label(text, rules)
    score = analytics.score_tokens(
        analytics.tokenize(text), lexicon, config.sentiment_tau
    )

    if as_json:
        click.echo(
            json.dumps(
                {
                    "label": label.value,
                    "matched_terms": matched,
                    "sentiment": {"raw": score.raw, "polarity": score.polarity.value},
                }
            )
        )
    else:
        click.echo(f"label: {label.value}")
        click.echo(f"matched terms: {', '.join(matched) if matched else '(none)'}")
        click.echo(f"sentiment: {score.polarity.value} (raw {score.raw:+.4f})")


@main.command("serve")
@config_option
@json_option
def cmd_serve(config_path: str, as_json: bool) -> None:
    """Run the HTTP API (and static UI, if configured) until interrupted."""
    config = _load(config_path)
    bind = f"{config.host}:{config.port}"
    if as_json:
        click.echo(json.dumps({"status": "serving", "bind": bind}))
    click.echo(f"serving on http://{bind}", err=True)
    try:
        service.serve(config)
    except FileNotFoundError:
        raise _fail(f"corpus store not found: {config.corpus_path}", 1) from None
    except (StoreCorrupt, analytics.LexiconError, ConfigError) as exc:
        raise _fail(str(exc), 1) from None
    except KeyboardInterrupt:
        pass


if __name__ == "__main__":
    main()
