# main.py
"""
Minimal project entry point.

Purpose:
- Provide a single entrypoint: `python main.py <command> [flags]`.
- Keep orchestration thin: everything lives in src.cli.

Examples:
    python main.py phases --spins 1/2 --trials 100 --seed 7
    python main.py exclusion --spins 1/2,1
    python main.py frames --va 1,0,0 --vb 0,1,0
    python main.py orderfree --entities 2 --states 2
    python main.py verify
"""

from __future__ import annotations

from src.cli import main


if __name__ == "__main__":
    raise SystemExit(main())
