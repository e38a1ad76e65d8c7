"""Benchmark sweeps over the integrand catalog, with CSV/JSON reports.

A sweep runs the adaptive integrator across a frequency grid (and parameter
list where the family takes one), timing each point by averaging over a
number of repeat runs after one untimed warmup.  Errors are measured against
the closed form when the entry has one, otherwise against the adaptive Gauss
oracle.

Report columns: entry,lambda,param,re,im,abs_error,runtime_ns,rects,fevals,
subints.  Floats carry 17 significant digits so values round-trip exactly.
The depth_exceeded flag is a programmatic field only (it drives CLI exit
codes) and is not serialized.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass

import numpy as np

from .adapt import AdaptiveConfig, adaptive_integrate
from .catalog import CatalogEntry
from .oracle import adaptive_gauss


@dataclass(frozen=True)
class SweepRow:
    entry: str
    lam: float
    param: int | None
    value: complex
    abs_error: float | None
    runtime_ns: int
    rects: int
    fevals: int
    subints: int
    depth_exceeded: bool = False


def log_lambda_grid(lo_exp: float, hi_exp: float, count: int) -> np.ndarray:
    """Frequencies 10^x at `count` equispaced exponents x in [lo_exp, hi_exp]."""
    if count < 1:
        raise ValueError("count must be at least 1")
    return np.logspace(lo_exp, hi_exp, count)


def run_sweep(
    entry: CatalogEntry,
    lams,
    params=None,
    cfg: AdaptiveConfig | None = None,
    repeats: int = 1,
    compute_error: bool = True,
    oracle_tol: float = 1e-14,
) -> list[SweepRow]:
    """Run the integrator over lams x params and collect one row per point."""
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    cfg = cfg or AdaptiveConfig()
    if params is None:
        params = [None]
    rows: list[SweepRow] = []
    for param in params:
        for lam in lams:
            lam = float(lam)
            F = entry.make(lam, param)
            res = adaptive_integrate(F, cfg=cfg)  # warmup, also the reported run
            t = 0
            for _ in range(repeats):
                t0 = time.perf_counter_ns()
                adaptive_integrate(F, cfg=cfg)
                t += time.perf_counter_ns() - t0
            abs_error = None
            if compute_error:
                ref = entry.reference(lam, param)
                if ref is None:
                    ref = adaptive_gauss(F, tol=oracle_tol)
                abs_error = abs(res.value - ref)
            rows.append(
                SweepRow(
                    entry=entry.name,
                    lam=lam,
                    param=entry._resolve_param(param),
                    value=complex(res.value),
                    abs_error=abs_error,
                    runtime_ns=int(t // repeats),
                    rects=len(res.mesh),
                    fevals=res.fevals,
                    subints=res.sub_intervals,
                    depth_exceeded=res.depth_exceeded,
                )
            )
    return rows


_HEADER = ["entry", "lambda", "param", "re", "im", "abs_error", "runtime_ns", "rects", "fevals", "subints"]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_report(rows: list[SweepRow], format: str = "csv") -> str:
    """Serialize sweep rows; `format` is "csv" or "json"."""
    if not rows:
        raise ValueError("report must contain at least one row")
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_HEADER)
        for r in rows:
            w.writerow(
                [
                    r.entry,
                    _fmt(r.lam),
                    "" if r.param is None else r.param,
                    _fmt(r.value.real),
                    _fmt(r.value.imag),
                    "" if r.abs_error is None else _fmt(r.abs_error),
                    r.runtime_ns,
                    r.rects,
                    r.fevals,
                    r.subints,
                ]
            )
        return buf.getvalue()
    if format == "json":
        payload = [
            {
                "entry": r.entry,
                "lambda": r.lam,
                "param": r.param,
                "re": r.value.real,
                "im": r.value.imag,
                "abs_error": r.abs_error,
                "runtime_ns": r.runtime_ns,
                "rects": r.rects,
                "fevals": r.fevals,
                "subints": r.subints,
            }
            for r in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown format {format!r}")


def parse_report(text: str, format: str = "csv") -> list[SweepRow]:
    """Inverse of emit_report; depth flags are not serialized and read False."""
    rows: list[SweepRow] = []
    if format == "csv":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if header != _HEADER:
            raise ValueError(f"unexpected header {header}")
        for rec in reader:
            if not rec:
                continue
            entry, lam, param, re_, im_, err, rt, rects, fevals, subints = rec
            rows.append(
                SweepRow(
                    entry=entry,
                    lam=float(lam),
                    param=None if param == "" else int(param),
                    value=complex(float(re_), float(im_)),
                    abs_error=None if err == "" else float(err),
                    runtime_ns=int(rt),
                    rects=int(rects),
                    fevals=int(fevals),
                    subints=int(subints),
                )
            )
        return rows
    if format == "json":
        for rec in json.loads(text):
            rows.append(
                SweepRow(
                    entry=rec["entry"],
                    lam=float(rec["lambda"]),
                    param=rec["param"],
                    value=complex(rec["re"], rec["im"]),
                    abs_error=rec["abs_error"],
                    runtime_ns=int(rec["runtime_ns"]),
                    rects=int(rec["rects"]),
                    fevals=int(rec["fevals"]),
                    subints=int(rec["subints"]),
                )
            )
        return rows
    raise ValueError(f"unknown format {format!r}")
