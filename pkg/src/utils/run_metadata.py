"""
Run metadata capture.

Why this exists:
- Helps prove reproducibility (time, python version, key packages, arguments).
- Makes debugging much faster when reports differ between runs/machines.
- Written only on request (--metadata-dir), so a default run touches no files.
"""

from __future__ import annotations

import json
import platform
from datetime import datetime, timezone
from pathlib import Path
import sys
from importlib import metadata as importlib_metadata

from .io import atomic_write_text, ensure_dir


def _safe_version(pkg: str) -> str | None:
    """Return installed package version, or None if not installed."""
    try:
        return importlib_metadata.version(pkg)
    except Exception:
        return None


def collect_run_metadata(run_name: str, extra: dict | None = None) -> dict:
    """Describe the execution environment of one CLI run."""
    return {
        "run_name": run_name,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
        "python_version": sys.version,
        "platform": platform.platform(),
        # Keep the list small and relevant; avoid huge environment dumps.
        "packages": {
            "numpy": _safe_version("numpy"),
            "scipy": _safe_version("scipy"),
            "pandas": _safe_version("pandas"),
        },
        "argv": sys.argv,
        "extra": extra or {},
    }


def write_run_metadata(out_dir: Path, run_name: str, extra: dict | None = None) -> Path:
    """
    Write a JSON file describing the execution environment.

    Args:
        out_dir: Directory to save metadata.
        run_name: Short identifier (e.g., "phases").
        extra: Optional additional metadata (e.g., seed, trials, spins).

    Returns:
        Path to the written JSON file.
    """
    ensure_dir(out_dir)
    meta = collect_run_metadata(run_name, extra)
    out_path = out_dir / f"{run_name}_metadata.json"
    atomic_write_text(json.dumps(meta, indent=2, default=str), out_path)
    return out_path
