"""Price-series ingestion and delimited table output.

Input prices arrive as a two-column CSV (``date,price``) with ISO dates in
strictly ascending order and positive prices.  Losses follow the actuarial
convention

    loss_t = -100 * ln(P_t / P_(t-1)),

in percent, so a positive value is a loss.

Report tables are written either as CSV or as JSON lines.  Floats are
serialized with ``repr``, i.e. the shortest string that round-trips to the
same IEEE-754 double, so reading a table back reproduces every value bit for
bit and repeated runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError

__all__ = [
    "PRICE_COLUMNS",
    "PriceSeriesFile",
    "Table",
    "load_prices",
    "ingest",
    "percent_log_losses",
    "table_path",
    "write_table",
    "read_table",
]

PRICE_COLUMNS = ("date", "price")

_EXTENSIONS = {"csv": ".csv", "json-lines": ".jsonl"}


@dataclass(frozen=True)
class PriceSeriesFile:
    """A parsed price file: ISO date strings and the matching prices."""

    dates: tuple[str, ...]
    prices: np.ndarray

    def __post_init__(self) -> None:
        prices = np.asarray(self.prices, dtype=float)
        prices.setflags(write=False)
        object.__setattr__(self, "prices", prices)

    @property
    def n(self) -> int:
        return len(self.dates)


def load_prices(path: Path | str) -> PriceSeriesFile:
    """Parse a ``date,price`` CSV, validating order, types and positivity."""
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise ParseError(f"{path}: cannot read price file: {exc}") from None
    if not rows:
        raise ParseError(f"{path}: empty price file")
    header = tuple(cell.strip().lower() for cell in rows[0])
    if header != PRICE_COLUMNS:
        raise ParseError(
            f"{path}: line 1: expected header {','.join(PRICE_COLUMNS)!r}, "
            f"got {','.join(rows[0])!r}"
        )
    dates: list[str] = []
    prices: list[float] = []
    previous: date | None = None
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue  # tolerate a trailing blank line
        if len(row) != 2:
            raise ParseError(f"{path}: line {line_no}: expected 2 fields, got {len(row)}")
        raw_date, raw_price = row[0].strip(), row[1].strip()
        try:
            parsed = date.fromisoformat(raw_date)
        except ValueError:
            raise ParseError(f"{path}: line {line_no}: invalid ISO date {raw_date!r}") from None
        if previous is not None and parsed <= previous:
            raise ParseError(f"{path}: line {line_no}: dates must be strictly ascending")
        previous = parsed
        try:
            price = float(raw_price)
        except ValueError:
            raise ParseError(f"{path}: line {line_no}: invalid price {raw_price!r}") from None
        if not np.isfinite(price) or price <= 0.0:
            raise ParseError(f"{path}: line {line_no}: prices must be positive, got {raw_price}")
        dates.append(raw_date)
        prices.append(price)
    if len(prices) < 2:
        raise ParseError(f"{path}: a price series needs at least two rows")
    return PriceSeriesFile(dates=tuple(dates), prices=np.array(prices))


def percent_log_losses(prices: np.ndarray) -> np.ndarray:
    """Percent log-losses of consecutive prices; positive means loss."""
    prices = np.asarray(prices, dtype=float)
    if prices.size < 2:
        raise ValidationError("log losses need at least two prices")
    if np.any(prices <= 0.0) or not np.all(np.isfinite(prices)):
        raise ValidationError("prices must be positive and finite")
    return -100.0 * np.diff(np.log(prices))


def ingest(path: Path | str) -> tuple[tuple[str, ...], np.ndarray]:
    """Load a price CSV and convert it to dated percent log-losses.

    Returns ``(dates, losses)`` where ``dates[t]`` is the date on which
    ``losses[t]`` was realized (the first price date drops out).
    """
    series = load_prices(path)
    return series.dates[1:], percent_log_losses(series.prices)


@dataclass(frozen=True)
class Table:
    """A named rectangular result with typed cells.

    Cells may be floats, ints, bools, strings or None; the writer and reader
    below round-trip all of them losslessly.
    """

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValidationError(
                    f"table {self.name!r}: row {i} has {len(row)} cells, "
                    f"expected {len(self.columns)}"
                )

    def column(self, name: str) -> tuple:
        try:
            k = self.columns.index(name)
        except ValueError:
            raise ValidationError(f"table {self.name!r} has no column {name!r}") from None
        return tuple(row[k] for row in self.rows)


def table_path(directory: Path | str, name: str, fmt: str) -> Path:
    if fmt not in _EXTENSIONS:
        raise ValidationError(f"unknown table format {fmt!r}")
    return Path(directory) / f"{name}{_EXTENSIONS[fmt]}"


def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _cell_value(text: str):
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _json_cell(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def write_table(table: Table, directory: Path | str, fmt: str) -> Path:
    """Write ``table`` under ``directory`` and return the file path."""
    target = table_path(directory, table.name, fmt)
    target.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow([_cell_text(cell) for cell in row])
    else:
        with target.open("w", encoding="utf-8") as handle:
            for row in table.rows:
                record = {c: _json_cell(v) for c, v in zip(table.columns, row)}
                handle.write(json.dumps(record, sort_keys=False) + "\n")
    return target


def read_table(path: Path | str) -> Table:
    """Read a table written by :func:`write_table`, restoring cell types."""
    path = Path(path)
    if path.suffix == ".csv":
        try:
            with path.open(newline="", encoding="utf-8") as handle:
                rows = list(csv.reader(handle))
        except OSError as exc:
            raise ParseError(f"{path}: cannot read table: {exc}") from None
        if not rows:
            raise ParseError(f"{path}: empty table")
        columns = tuple(rows[0])
        data = tuple(tuple(_cell_value(cell) for cell in row) for row in rows[1:] if row)
        return Table(name=path.stem, columns=columns, rows=data)
    if path.suffix == ".jsonl":
        records = []
        try:
            with path.open(encoding="utf-8") as handle:
                for line_no, line in enumerate(handle, start=1):
                    if not line.strip():
                        continue
                    try:
                        records.append(json.loads(line))
                    except json.JSONDecodeError as exc:
                        raise ParseError(f"{path}: line {line_no}: {exc}") from None
        except OSError as exc:
            raise ParseError(f"{path}: cannot read table: {exc}") from None
        if not records:
            raise ParseError(f"{path}: empty table")
        columns = tuple(records[0])
        data = tuple(tuple(record.get(c) for c in columns) for record in records)
        return Table(name=path.stem, columns=columns, rows=data)
    raise ParseError(f"{path}: unknown table extension {path.suffix!r}")
