"""Operational intensity and capacity footprint analysis for LLM agent inference."""

from pathlib import Path

from ._oicf import *  # noqa: F401,F403
from ._oicf import __version__, _build_catalog_dir, ReportRequest, run as _run


def catalog_dir() -> Path:
    """Preset catalog shipped with the package, or the source catalog for build-tree imports."""
    bundled = Path(__file__).parent / "catalog"
    return bundled if bundled.is_dir() else Path(_build_catalog_dir())


def run_command(command: str, **kwargs):
    """Run one CLI command in-process. Returns (exit_code, stdout_text, stderr_text)."""
    req = ReportRequest()
    req.command = command
    req.catalog_dir = str(catalog_dir())
    for key, value in kwargs.items():
        if not hasattr(req, key):
            raise TypeError(f"unknown option {key!r}")
        setattr(req, key, value)
    return _run(req)
