"""Flat-file formats: dataset CSV, sweep result CSV and single-test result files.

Dataset CSV layout::

    p,n
    <p>,<n>
    n rows of p+1 X samples
    n rows of p+1 W samples
    one row of n responses

Floats are written with ``repr`` (17 significant digits), so a write/read
round trip is exact.
"""

from __future__ import annotations

import csv
import os
from dataclasses import fields, is_dataclass
from pathlib import Path

import numpy as np

from .errors import IoError, ParseError
from .spectra import Dataset

__all__ = [
    "RESULT_COLUMNS",
    "read_dataset",
    "write_dataset",
    "write_result",
    "read_result",
    "format_outcome",
]

RESULT_COLUMNS = (
    "beta_id", "n", "p", "alpha", "nu_sobolev", "rho", "nu_instr", "gamma", "test",
    "scheme", "B", "reps", "rejection_rate", "se", "failures", "seed", "wall_ms",
)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _open_write(path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from exc


def write_dataset(data: Dataset, path) -> None:
    with _open_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "n"])
        w.writerow([data.p, data.n])
        for row in data.X:
            w.writerow([_fmt(v) for v in row])
        for row in data.W:
            w.writerow([_fmt(v) for v in row])
        w.writerow([_fmt(v) for v in data.Y])


def _parse_floats(row: list[str], expected: int, line: int, what: str) -> list[float]:
    if len(row) != expected:
        raise ParseError(f"{what} row has {len(row)} columns, expected {expected}", line)
    try:
        return [float(v) for v in row]
    except ValueError as exc:
        raise ParseError(f"{what} row: {exc}", line) from None


def read_dataset(path) -> Dataset:
    p = Path(path)
    if not p.is_file():
        raise IoError(f"no such file: {path}")
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    rows = [(i + 1, r) for i, r in enumerate(csv.reader(text.splitlines())) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise ParseError("missing 'p,n' header and size row", 1)
    (l0, head), (l1, sizes) = rows[0], rows[1]
    if [h.strip() for h in head] != ["p", "n"]:
        raise ParseError(f"expected header 'p,n', got {','.join(head)!r}", l0)
    if len(sizes) != 2:
        raise ParseError("size row must hold exactly two integers", l1)
    try:
        p_order, n = int(sizes[0]), int(sizes[1])
    except ValueError:
        raise ParseError(f"size row is not two integers: {','.join(sizes)!r}", l1) from None
    if p_order < 1 or n < 1:
        raise ParseError("p and n must be positive", l1)
    body = rows[2:]
    if len(body) != 2 * n + 1:
        line = body[-1][0] if body else l1
        raise ParseError(f"expected {2 * n + 1} data rows (n X, n W, 1 Y), found {len(body)}", line)
    m = p_order + 1
    X = [_parse_floats(r, m, ln, "X") for ln, r in body[:n]]
    W = [_parse_floats(r, m, ln, "W") for ln, r in body[n : 2 * n]]
    ln, yrow = body[2 * n]
    Y = _parse_floats(yrow, n, ln, "Y")
    return Dataset(np.array(X), np.array(W), np.array(Y))


def outcome_items(outcome) -> list[tuple[str, object]]:
    """Scalar fields of a test outcome as ``(key, value)`` pairs; replicates last."""
    if not is_dataclass(outcome):
        raise TypeError(f"expected a dataclass outcome, got {type(outcome).__name__}")
    items = []
    replicates = None
    for f in fields(outcome):
        v = getattr(outcome, f.name)
        if f.name == "replicates":
            replicates = v
            continue
        if hasattr(v, "value"):  # enums
            v = v.value
        items.append((f.name, v))
    if replicates is not None:
        items.append(("replicates", " ".join(_fmt(x) for x in replicates)))
    return items


def format_outcome(outcome, include_replicates: bool = False) -> str:
    lines = []
    for k, v in outcome_items(outcome):
        if k == "replicates" and not include_replicates:
            continue
        lines.append(f"{k}={_fmt(v)}")
    return "\n".join(lines)


def write_result(outcome, path) -> None:
    """Write a test outcome as a two-column ``key,value`` CSV."""
    with _open_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in outcome_items(outcome):
            w.writerow([k, _fmt(v)])


def _coerce(value: str):
    if value in ("true", "false"):
        return value == "true"
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def read_result(path) -> dict:
    if not os.path.isfile(path):
        raise IoError(f"no such file: {path}")
    out: dict = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["key", "value"]:
            raise ParseError("expected header 'key,value'", 1)
        for ln, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ParseError(f"expected 2 columns, got {len(row)}", ln)
            k, v = row
            if k == "replicates":
                out[k] = np.array([float(x) for x in v.split()]) if v else np.array([])
            else:
                out[k] = _coerce(v)
    return out


def result_row(record: dict) -> list[str]:
    return [_fmt(record[c]) for c in RESULT_COLUMNS]

