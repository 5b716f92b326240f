"""Records real API responses as JSON fixtures for the UI contract tests.

Builds a corpus from the repository's committed test datasets, runs the
service in-process, and dumps selected responses under tests/fixtures/.
Re-run after changing the API or the datasets:

    python3 frontend/scripts/record_fixtures.py
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

REPO = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO / "tests"))

from conftest import ALL_FIXTURES, FIXTURE_KEYWORDS, write_config  # noqa: E402
from mpoxdash.config import load_config  # noqa: E402
from mpoxdash.corpus import Corpus  # noqa: E402
from mpoxdash.ingest import ingest_file  # noqa: E402
from mpoxdash.service import create_app  # noqa: E402

OUT = REPO / "frontend" / "tests" / "fixtures"

# name -> (path, params); every UI contract test reads one of these verbatim
RECORDINGS = {
    "stats": ("/api/stats", {}),
    "search_hoax": ("/api/search", {"k": ["hoax", "mpox"], "combine": "any", "sort": "likes_desc"}),
    "search_page2": ("/api/search", {"k": ["mpox"], "per_page": "5", "page": "2"}),
    "search_empty": ("/api/search", {"k": ["absentword"]}),
    "search_bad_request": ("/api/search", {"k": ["a", "b", "c", "d"], "min_likes": "-1"}),
    "clusters_3day": ("/api/clusters/timeseries", {"from": "2024-04-01", "to": "2024-04-03"}),
    "trend_mpox": ("/api/trends", {"k": "mpox", "from": "2024-04-01", "to": "2024-04-14"}),
    "volume": (
        "/api/volume",
        {"a_from": "2022-01-01", "a_to": "2022-12-31", "b_from": "2024-01-01", "b_to": "2024-12-31"},
    ),
}


def main() -> None:
    tmp = Path(tempfile.mkdtemp(prefix="mpoxdash-record-"))
    corpus = Corpus(tmp / "store", create=True)
    for path in ALL_FIXTURES:
        ingest_file(path, corpus, keywords=FIXTURE_KEYWORDS)

    app = create_app(load_config(write_config(tmp, tmp / "store")))
    OUT.mkdir(parents=True, exist_ok=True)
    with TestClient(app) as client:
        for name, (path, params) in RECORDINGS.items():
            response = client.get(path, params=params)
            body = response.json()
            (OUT / f"{name}.json").write_text(
                json.dumps({"status": response.status_code, "body": body}, indent=2) + "\n",
                encoding="utf-8",
            )
            print(f"{name}: {response.status_code} {path}")


if __name__ == "__main__":
    main()
