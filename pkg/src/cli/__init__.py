"""Command-line front end"""

from .handlers import CliHandlers, RunManifest

__all__ = [
    "CliHandlers",
    "RunManifest",
]
