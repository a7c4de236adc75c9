"""Batch runs over (family, parameter, modulus) cells with deterministic output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .constructions import FAMILIES, ConstructionError, ConstructionOutput, construct
from .cosine import CertificationError, cosine_from_b2, evaluate_grid
from .residue import analyze_set

log = logging.getLogger(__name__)

COLUMNS = (
    "family", "param", "N", "k", "ell", "m", "dev_l2", "dev_linf", "bound", "branch",
    "ratio_l2", "uniformity", "N_m", "d0", "epsilon", "dichotomy",
)
THREADS_ENV = "SIDONLAB_THREADS"


class ExperimentError(Exception):
    pass


@dataclass
class ExperimentConfig:
    families: list[str]
    primes: list[int]
    # explicit list, or a rule "lo..hi" whose ends may use N, e.g. "2..floor(N^{1/6})"
    moduli: Union[list[int], str]
    c: float = 1.0
    grid_factor: int = 8
    output: Optional[str] = None
    format: str = "csv"
    check_f: bool = False

    def __post_init__(self):
        if not self.families or not self.primes or not self.moduli:
            raise ExperimentError("families, primes and moduli must all be nonempty")
        unknown = sorted(set(self.families) - set(FAMILIES))
        if unknown:
            raise ExperimentError(f"unknown families: {', '.join(unknown)}")
        if self.format not in ("csv", "json"):
            raise ExperimentError(f"format must be csv or json, got {self.format!r}")
        if self.grid_factor < 8:
            raise ExperimentError("grid_factor must be at least 8")
        if isinstance(self.moduli, str):
            parse_moduli_rule(self.moduli)
        elif any(int(m) < 1 for m in self.moduli):
            raise ExperimentError("moduli must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "params" in d and "primes" not in d:
            d["primes"] = d.pop("params")
        known = set(cls.__dataclass_fields__)
        extra = sorted(set(d) - known)
        if extra:
            raise ExperimentError(f"unknown config keys: {', '.join(extra)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ExperimentError(str(exc)) from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ExperimentError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)


_BOUND = re.compile(r"^(?:(floor|ceil)\()?\s*N\s*\^\s*\{?\s*(\d+)\s*/\s*(\d+)\s*\}?\s*\)?$")


def _iroot(n: int, b: int) -> int:
    """floor(n ** (1/b)) for integers, exactly."""
    x = int(round(n ** (1.0 / b)))
    while x**b > n:
        x -= 1
    while (x + 1) ** b <= n:
        x += 1
    return x


def _eval_bound(text: str, N: int) -> int:
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return int(text)
    if text == "N":
        return N
    m = _BOUND.match(text)
    if not m:
        raise ExperimentError(f"cannot parse modulus bound {text!r}")
    how, a, b = m.group(1) or "floor", int(m.group(2)), int(m.group(3))
    lo = _iroot(N**a, b)
    if how == "ceil" and lo**b < N**a:
        lo += 1
    return lo


def parse_moduli_rule(rule: str) -> tuple[str, str]:
    parts = rule.split("..")
    if len(parts) != 2:
        raise ExperimentError(f"modulus rule must look like 'lo..hi', got {rule!r}")
    for part in parts:
        _eval_bound(part, 64)
    return parts[0], parts[1]


def moduli_for(config: ExperimentConfig, N: int) -> list[int]:
    if isinstance(config.moduli, str):
        lo, hi = parse_moduli_rule(config.moduli)
        return list(range(max(1, _eval_bound(lo, N)), _eval_bound(hi, N) + 1))
    return sorted({int(m) for m in config.moduli})


def _thread_count() -> int:
    cap = os.environ.get(THREADS_ENV)
    n = min(4, os.cpu_count() or 1)
    if cap:
        try:
            n = max(1, min(n, int(cap)))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, cap)
    return n


def _build(family: str, param: int) -> ConstructionOutput:
    try:
        return construct(family, param)
    except ConstructionError as exc:
        raise ExperimentError(f"cell ({family}, {param}): {exc}") from None


def check_f_nonnegative(out: ConstructionOutput, grid_factor: int) -> float:
    """Grid minimum of |sum e^{iax}|^2; raises if it dips below -1e-6 k."""
    poly = cosine_from_b2(out.set)
    size = max(grid_factor * poly.lambda_max, 64)
    low = float(evaluate_grid(poly, size).min())
    if low < -1e-6 * out.set.k:
        raise CertificationError(f"{out.family}({out.parameter}): f dips to {low} on the grid")
    return low


def run_experiment(config: ExperimentConfig) -> Iterator[dict]:
    """Rows in (family, param, m) order; every construction is built before the first row."""
    cells = [(f, int(p)) for f in sorted(set(config.families)) for p in sorted(set(config.primes))]
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        built = list(pool.map(lambda fp: _build(*fp), cells))
        if config.check_f:
            list(pool.map(lambda o: check_f_nonnegative(o, config.grid_factor), built))
    for (family, param), out in zip(cells, built):
        ms = moduli_for(config, out.set.N)
        if not ms:
            log.info("skipping cell (%s, %d): empty modulus range %r", family, param, config.moduli)
            continue
        for m in ms:
            yield analyze_set(out.set, m, config.c).row(family, param)


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    s = f"{float(v):.6g}"
    if math.isfinite(v) and not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([format_value(row[c]) for c in COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: Sequence[dict]) -> str:
    return json.dumps([{c: row[c] for c in COLUMNS} for row in rows], indent=1) + "\n"


def render(rows: Sequence[dict], fmt: str) -> str:
    return rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)


def run_to_file(config: ExperimentConfig, path: Union[str, Path, None] = None) -> Path:
    """Run and write atomically; nothing is left behind if any cell fails."""
    path = Path(path or config.output or f"experiment.{config.format}")
    tmp = path.with_name(path.name + ".partial")
    try:
        rows = list(run_experiment(config))
        tmp.write_text(render(rows, config.format), encoding="utf-8")
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    log.info("wrote %d rows to %s", len(rows), path)
    return path
