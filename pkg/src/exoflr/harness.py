"""Monte Carlo estimation of empirical size and power.

Every repetition ``r`` of a cell draws its dataset from the substream
``(cell.seed, r, 0)`` and, for bootstrap tests, its replicates from
``(cell.seed, r, 1, b)``.  Results therefore depend only on the cell, never
on its position in a sweep or on how repetitions are spread over workers.
"""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from .bootstrap import BootstrapScheme, bootstrap_test
from .dgp import DgpConfig, sample_dataset
from .errors import (
    CellFailed,
    DegenerateCrossSpectrum,
    DegenerateSpectrum,
    DegenerateStudentization,
    IoError,
    NoSelectedFrequencies,
    ParseError,
)
from .exotest import asymptotic_test
from .io import RESULT_COLUMNS, result_row
from .rng import seed_sequence, substream

__all__ = [
    "SweepCell",
    "CellResult",
    "run_cell",
    "run_sweep",
    "parse_config",
    "load_config",
    "FULL_SCALE",
]

log = logging.getLogger(__name__)

# Full-scale replication counts; desk-scale defaults are smaller.
FULL_SCALE = {"reps": 1000, "B": 500}

RECOVERABLE = (DegenerateStudentization, NoSelectedFrequencies, DegenerateSpectrum, DegenerateCrossSpectrum)


@dataclass(frozen=True)
class SweepCell:
    dgp: DgpConfig = field(default_factory=DgpConfig)
    test: str = "bootstrap"  # "asymptotic" or "bootstrap"
    scheme: str = "rademacher"
    B: int = 300
    alpha: float = 1e-4
    nu_sobolev: float = 0.0
    gamma: float = 0.05
    reps: int = 300
    seed: int = 0
    K: int | None = None

    def __post_init__(self):
        if self.test not in ("asymptotic", "bootstrap"):
            raise ValueError(f"test must be 'asymptotic' or 'bootstrap', got {self.test!r}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.test == "bootstrap":
            object.__setattr__(self, "scheme", BootstrapScheme.parse(self.scheme).value)


@dataclass(frozen=True)
class CellResult:
    cell: SweepCell
    rejections: int
    reps_done: int
    failures: int
    wall_time: float

    @property
    def rejection_rate(self) -> float:
        return self.rejections / self.reps_done

    @property
    def se(self) -> float:
        r = self.rejection_rate
        return math.sqrt(r * (1.0 - r) / self.reps_done)

    def record(self, timing: bool = True) -> dict:
        c, d = self.cell, self.cell.dgp
        boot = c.test == "bootstrap"
        return {
            "beta_id": d.beta_id,
            "n": d.n,
            "p": d.p,
            "alpha": c.alpha,
            "nu_sobolev": c.nu_sobolev,
            "rho": d.rho,
            "nu_instr": d.nu_instr,
            "gamma": c.gamma,
            "test": c.test,
            "scheme": c.scheme if boot else "",
            "B": c.B if boot else "",
            "reps": c.reps,
            "rejection_rate": self.rejection_rate,
            "se": self.se,
            "failures": self.failures,
            "seed": c.seed,
            "wall_ms": int(round(self.wall_time * 1000)) if timing else 0,
        }


def _one_rep(cell: SweepCell, r: int) -> bool | None:
    """Decision of repetition ``r``; ``None`` when the pipeline degenerates."""
    data = sample_dataset(cell.dgp, substream(cell.seed, r, 0))
    try:
        if cell.test == "asymptotic":
            out = asymptotic_test(data, cell.alpha, cell.nu_sobolev, cell.gamma, K=cell.K)
        else:
            out = bootstrap_test(
                data,
                cell.alpha,
                cell.nu_sobolev,
                scheme=cell.scheme,
                B=cell.B,
                gamma=cell.gamma,
                seed=seed_sequence(cell.seed, r, 1),
                K=cell.K,
            )
    except RECOVERABLE as exc:
        log.debug("rep %d failed: %s", r, exc)
        return None
    return out.reject


def _rep_chunk(cell: SweepCell, rs: Sequence[int]) -> list[bool | None]:
    return [_one_rep(cell, r) for r in rs]


def run_cell(cell: SweepCell, workers: int = 1) -> CellResult:
    """Rejection frequency over ``cell.reps`` independent repetitions."""
    start = time.perf_counter()
    reps = list(range(cell.reps))
    if workers <= 1:
        decisions = _rep_chunk(cell, reps)
    else:
        chunks = [reps[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_rep_chunk, [cell] * len(chunks), chunks))
        decisions = [None] * cell.reps
        for idx, part in zip(chunks, parts):
            for r, d in zip(idx, part):
                decisions[r] = d
    failures = sum(d is None for d in decisions)
    done = cell.reps - failures
    if done == 0:
        raise CellFailed(f"all {cell.reps} repetitions failed for {cell}")
    rejections = sum(bool(d) for d in decisions if d is not None)
    return CellResult(cell, rejections, done, failures, time.perf_counter() - start)


def run_sweep(
    cells: Sequence[SweepCell],
    output=None,
    workers: int = 1,
    timing: bool = True,
) -> list[CellResult]:
    """Run cells in order and write one CSV row per cell to ``output``.

    ``output`` may be a path, a writable text stream or ``None``.  With
    ``timing=False`` the ``wall_ms`` column is written as 0 so reruns are
    byte-identical.
    """
    cells = list(cells)
    if not cells:
        raise ValueError("empty sweep: no cells to run")
    fh, close = None, False
    if isinstance(output, (str, Path)):
        try:
            fh = open(output, "w", newline="", encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {output}: {exc.strerror}") from exc
        close = True
    elif output is not None:
        fh = output
    results = []
    try:
        writer = None
        if fh is not None:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RESULT_COLUMNS)
        for i, cell in enumerate(cells):
            res = run_cell(cell, workers=workers)
            log.info(
                "cell %d/%d n=%d rate=%.3f se=%.3f (%.1fs)",
                i + 1, len(cells), cell.dgp.n, res.rejection_rate, res.se, res.wall_time,
            )
            results.append(res)
            if writer is not None:
                writer.writerow(result_row(res.record(timing)))
                fh.flush()
    finally:
        if close:
            fh.close()
    return results


# ---------------------------------------------------------------------------
# config files

_DGP_KEYS = {f.name: f.type for f in fields(DgpConfig)} | {"beta": "int"}
_CELL_KEYS = {"test", "scheme", "B", "alpha", "nu_sobolev", "gamma", "reps", "seed", "K"}
_INT_KEYS = {"n", "p", "beta_id", "beta", "B", "reps", "seed", "K"}


def _convert(key: str, value: str, line: int):
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in ("test", "scheme"):
            return value.strip().lower()
        return float(value)
    except ValueError:
        raise ParseError(f"bad value for {key!r}: {value!r}", line) from None


def _build_cell(params: dict, line: int) -> SweepCell:
    dgp_args = {}
    cell_args = {}
    for k, v in params.items():
        if k == "beta":
            k = "beta_id"
        if k in _CELL_KEYS:
            cell_args[k] = v
        else:
            dgp_args[k] = v
    if "seed" in cell_args:
        dgp_args["seed"] = cell_args["seed"]
    try:
        return SweepCell(dgp=DgpConfig(**dgp_args), **cell_args)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid cell: {exc}", line) from None


def parse_config(text: str, full_scale: bool = False) -> list[SweepCell]:
    """Parse a ``key = value`` sweep config with one ``[cell]`` block per cell.

    Keys given before the first ``[cell]`` (optionally under ``[defaults]``)
    apply to every cell.  ``#`` starts a comment.
    """
    defaults: dict = {}
    blocks: list[tuple[int, dict]] = []
    current = defaults
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            name = line.strip("[]").strip().lower()
            if name == "cell":
                current = {}
                blocks.append((ln, current))
            elif name == "defaults" and not blocks:
                current = defaults
            else:
                raise ParseError(f"unknown section [{name}]", ln)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", ln)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _DGP_KEYS and key not in _CELL_KEYS:
            raise ParseError(f"unknown key {key!r}", ln)
        current[key] = _convert(key, value, ln)
    if not blocks:
        raise ParseError("config defines no [cell] block", None)
    cells = []
    for ln, block in blocks:
        params = {**defaults, **block}
        if full_scale:
            params.update(FULL_SCALE)
        cells.append(_build_cell(params, ln))
    return cells


def load_config(path, full_scale: bool = False) -> list[SweepCell]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_config(text, full_scale=full_scale)


def with_reps(cells: Iterable[SweepCell], **changes) -> list[SweepCell]:
    return [replace(c, **changes) for c in cells]
