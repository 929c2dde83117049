"""
CSV artifact output
"""

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

import pandas as pd

from config import DEFAULT_OUT_DIR, FLOAT_FORMAT, TIMING_COLUMNS

logger = logging.getLogger(__name__)

# Global output state
out_dir: Optional[Path] = None
timestamps = True
written: List[Path] = []


def init_output(directory: Optional[Path] = None, timestamp: bool = True) -> Path:
    """Create the output directory and remember the timestamp mode."""
    global out_dir, timestamps, written

    out_dir = Path(directory) if directory else DEFAULT_OUT_DIR
    out_dir.mkdir(parents=True, exist_ok=True)
    timestamps = timestamp
    written = []
    logger.info(f"Writing artifacts to {out_dir}")
    return out_dir


def write_table(name: str, frame: pd.DataFrame, note: str = "") -> Path:
    """
    Write one frame as <name>.csv.

    Header comment lines start with '#'. Without timestamps the generation
    time and every timing column are left out, so reruns are byte-identical.
    """
    if out_dir is None:
        raise RuntimeError("Output not initialized. Call init_output() first.")

    path = out_dir / f"{name}.csv"
    if not timestamps:
        frame = frame.drop(columns=[c for c in TIMING_COLUMNS if c in frame.columns])

    header = []
    if timestamps:
        header.append(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
    header.extend(f"# {line}" for line in note.splitlines() if line)

    with open(path, "w", encoding="utf-8", newline="") as fh:
        for line in header:
            fh.write(line + "\n")
        frame.to_csv(fh, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    written.append(path)
    logger.info(f"Wrote {path} ({len(frame)} rows)")
    return path


def close_output() -> List[Path]:
    """Reset output state and return the files written since init_output()."""
    global out_dir
    paths = list(written)
    out_dir = None
    return paths
