"""FastAPI service wrapping the report pipelines."""

from .app import app

__all__ = ["app"]
