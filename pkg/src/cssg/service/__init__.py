"""HTTP service wrapping the similarity pipeline."""

from .app import app

__all__ = ["app"]
