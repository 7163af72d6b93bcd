from __future__ import annotations

from pathlib import Path
import os
import pandas as pd


def ensure_dir(path: Path) -> None:
    """Ensure a directory exists."""
    path.mkdir(parents=True, exist_ok=True)


def atomic_write_text(text: str, out_path: Path) -> None:
    """Write a text file atomically (write temp -> rename)."""
    ensure_dir(out_path.parent)

    tmp_path = out_path.with_suffix(out_path.suffix + f".tmp.{os.getpid()}")
    try:
        tmp_path.write_text(text, encoding="utf-8")
        tmp_path.replace(out_path)
    finally:
        if tmp_path.exists():
            try:
                tmp_path.unlink()
            except Exception:
                pass


def frame_to_tsv(df: pd.DataFrame) -> str:
    """Render a report table as TSV with full float precision."""
    return df.to_csv(sep="\t", index=False, float_format="%.17g", lineterminator="\n")
