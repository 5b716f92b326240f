"""Self-hosted tweet monitoring: ingest, search, and analytics over a local corpus."""

__version__ = "0.1.0"
