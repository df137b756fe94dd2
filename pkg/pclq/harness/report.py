"""CSV output of sweep results."""

import csv
import logging
from pathlib import Path

from pclq.harness.base import SweepRow

logger = logging.getLogger(__name__)

CSV_FIELDS = [
    "estimator",
    "d",
    "n",
    "trials",
    "successes",
    "success_rate",
    "success_stddev",
    "mean_cost_ratio",
    "base_seed",
]

FLOAT_FIELDS = ("success_rate", "success_stddev", "mean_cost_ratio")


def _format_float(value: float) -> str:
    return format(value, ".6g")


def emit_csv(rows: list[SweepRow], path: str | Path) -> None:
    """
    Write sweep rows as CSV with LF line endings and 6 significant digits.

    Args:
        rows: Aggregated sweep rows
        path: Output file

    Raises:
        OSError: The file could not be written

    """
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                record = row.model_dump()
                for name in FLOAT_FIELDS:
                    record[name] = _format_float(record[name])
                writer.writerow(record)
    except OSError as e:
        msg = f"cannot write {path}: {e}"
        raise OSError(msg) from e
    logger.info(f"Wrote {len(rows)} rows to {path}")


def read_csv(path: str | Path) -> list[SweepRow]:
    """Parse a file written by ``emit_csv``."""
    path = Path(path)
    try:
        with path.open(encoding="utf-8", newline="") as f:
            records = list(csv.DictReader(f))
    except OSError as e:
        msg = f"cannot read {path}: {e}"
        raise OSError(msg) from e
    return [SweepRow(**record) for record in records]
