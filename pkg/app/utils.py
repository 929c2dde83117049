"""
Utility functions for timing and report summaries
"""

import logging
import time
from typing import Dict, Optional, Tuple

logger = logging.getLogger(__name__)

# Reproduced values more than this factor away from the published ones get flagged
DEVIATION_FACTOR = 10.0


class Stopwatch:
    """Context manager measuring wall-clock seconds of its block."""

    def __init__(self):
        self.seconds = 0.0
        self._start = 0.0

    def __enter__(self) -> "Stopwatch":
        self._start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self._start
        return False


def compare_to_published(sweep_value, reproduced: Tuple[float, float],
                         published: Optional[Dict[float, Tuple[float, float]]]) -> str:
    """One line comparing a reproduced error pair with the published one, if any."""
    if not published or sweep_value not in published:
        return f"{sweep_value}: {reproduced[0]:.4e} / {reproduced[1]:.4e}"
    expected = published[sweep_value]
    line = (f"{sweep_value}: {reproduced[0]:.4e} / {reproduced[1]:.4e} "
            f"(published {expected[0]:.4e} / {expected[1]:.4e})")
    for got, want in zip(reproduced, expected):
        if got > 0 and want > 0 and max(got / want, want / got) > DEVIATION_FACTOR:
            logger.warning(f"Row {sweep_value} differs from the published value by more than {DEVIATION_FACTOR:g}x")
            break
    return line


def summarize_report(report, published: Optional[Dict[float, Tuple[float, float]]] = None) -> str:
    """Human readable summary of an ErrorReport for the log."""
    lines = [f"{report.experiment}: {len(report.rows)} rows"]
    if report.note:
        lines.append(f"  {report.note}")
    sweep, first, second = report.columns[:3]
    if first.startswith(("abs_err", "rmse")):
        for row in report.rows:
            lines.append("  " + compare_to_published(row[sweep], (row[first], row[second]), published))
    for name, frame in report.profiles.items():
        lines.append(f"  profile {name}: {len(frame)} rows")
    return "\n".join(lines)
