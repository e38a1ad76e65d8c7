"""Command-line interface.

Subcommands:
  integrate  evaluate one catalog integrand and print value/diagnostics
  bench      sweep a frequency grid and emit a CSV/JSON report
  mesh       dump the accepted adaptive mesh as CSV
  backends   time the compiled kernels against the pure-numpy fallback

Exit status is nonzero when an adaptive run hit a depth cap (the value may
not be at tolerance) unless --allow-partial is given.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import _kernels
from .adapt import AdaptiveConfig, adaptive_integrate, mesh_dump
from .bench import emit_report, log_lambda_grid, run_sweep
from .catalog import ENTRIES, get_entry
from .linsolve import SolveConfig


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--entry", required=True, choices=sorted(ENTRIES), help="catalog integrand")
    p.add_argument("--param", type=int, default=None, help="family shape parameter (n or m)")
    p.add_argument("--k", type=int, default=7, help="bivariate collocation order")
    p.add_argument("--eps", type=float, default=1e-12, help="subdivision tolerance")
    p.add_argument("--beta", type=float, default=0.1, help="boundary tolerance safety factor")
    p.add_argument("--beta0", type=float, default=0.5, help="truncation tolerance weight")
    p.add_argument("--k1d", type=int, default=12, help="boundary collocation order")
    p.add_argument("--solver", choices=("svd", "rrqr"), default="svd", help="dense solve method")
    p.add_argument(
        "--nondelaminating",
        action="store_true",
        help="use the monolithic single-solve variant instead of fiber solves",
    )
    p.add_argument(
        "--allow-partial",
        action="store_true",
        help="exit 0 even when a depth cap was hit",
    )


def _config(args: argparse.Namespace) -> AdaptiveConfig:
    return AdaptiveConfig(
        k=args.k,
        eps_sub=args.eps,
        beta0=args.beta0,
        beta=args.beta,
        k1d=args.k1d,
        solver=SolveConfig(method=args.solver),
        use_nondelaminating=args.nondelaminating,
    )


def _finish(depth_exceeded: bool, allow_partial: bool) -> int:
    if depth_exceeded and not allow_partial:
        print(
            "warning: depth cap reached; result may be below tolerance "
            "(pass --allow-partial to suppress this exit status)",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_integrate(args: argparse.Namespace) -> int:
    entry = get_entry(args.entry)
    F = entry.make(args.lam, args.param)
    cfg = _config(args)
    t0 = time.perf_counter_ns()
    res = adaptive_integrate(F, cfg=cfg)
    dt_ms = (time.perf_counter_ns() - t0) / 1e6
    print(f"value: {res.value.real:.17g} {res.value.imag:+.17g}i")
    ref = entry.reference(args.lam, args.param)
    if ref is not None:
        print(f"abs error vs closed form: {abs(res.value - ref):.3e}")
    print(
        f"rectangles: {len(res.mesh)}  estimates: {res.rect_evals}  "
        f"fevals: {res.fevals}  sub-intervals: {res.sub_intervals}"
    )
    print(f"time: {dt_ms:.2f} ms")
    return _finish(res.depth_exceeded, args.allow_partial)


def _parse_log_range(spec: str) -> np.ndarray:
    try:
        lo, hi, count = spec.split(":")
        return log_lambda_grid(float(lo), float(hi), int(count))
    except ValueError as exc:
        raise SystemExit(f"bad --lambda-log-range {spec!r}; expected LO:HI:COUNT") from exc


def _cmd_bench(args: argparse.Namespace) -> int:
    entry = get_entry(args.entry)
    lams = _parse_log_range(args.lambda_log_range)
    params = None if args.param is None else [args.param]
    rows = run_sweep(
        entry,
        lams,
        params=params,
        cfg=_config(args),
        repeats=args.repeats,
        compute_error=not args.no_error,
    )
    text = emit_report(rows, format=args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return _finish(any(r.depth_exceeded for r in rows), args.allow_partial)


def _cmd_mesh(args: argparse.Namespace) -> int:
    entry = get_entry(args.entry)
    F = entry.make(args.lam, args.param)
    res = adaptive_integrate(F, cfg=_config(args))
    lines = ["x0,x1,y0,y1,depth,direction,grad_ratio,low_freq"]
    for rec in mesh_dump(res):
        lines.append(
            f"{rec['x0']:.17g},{rec['x1']:.17g},{rec['y0']:.17g},{rec['y1']:.17g},"
            f"{rec['depth']},{rec['direction']},{rec['grad_ratio']:.17g},"
            f"{int(rec['low_freq'])}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(res.mesh)} rectangles to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return _finish(res.depth_exceeded, args.allow_partial)


def _time_backend(name: str, fibers: int, repeats: int) -> dict:
    backend = _kernels.available_backends()[name]
    rng = np.random.default_rng(11)
    k = 7
    from .cheb import cheb_nodes, diff_matrix

    D = diff_matrix(k)
    xs = cheb_nodes(k)
    gv = np.ascontiguousarray(200.0 * xs[None, :] + rng.uniform(0, 1, (fibers, 1)))
    fv = np.ascontiguousarray(
        rng.standard_normal((fibers, k)) + 1j * rng.standard_normal((fibers, k))
    )
    scales = np.full(fibers, 0.5)
    args = (D, gv, fv, scales, 5e-13, 0, False, 1e-15, 400)
    backend.levin_fixed_batch(*args)  # warm any compilation
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        backend.levin_fixed_batch(*args)
        best = min(best, time.perf_counter_ns() - t0)
    return {"name": name, "kernel_ns": best}


def _cmd_backends(args: argparse.Namespace) -> int:
    names = sorted(_kernels.available_backends())
    print(f"available: {', '.join(names)}  (active: {_kernels.active().name})")
    results = [_time_backend(n, args.fibers, args.repeats) for n in names]
    # end-to-end comparison on a mid-frequency catalog run
    entry = get_entry("saddle")
    F = entry.make(100.0)
    previous = _kernels.active().name
    try:
        for r in results:
            _kernels.use_backend(r["name"])
            adaptive_integrate(F)  # warm
            t0 = time.perf_counter_ns()
            adaptive_integrate(F)
            r["run_ns"] = time.perf_counter_ns() - t0
    finally:
        _kernels.use_backend(previous)
    print(f"{'backend':>8}  {'fiber batch':>14}  {'saddle lam=100':>16}")
    for r in results:
        print(f"{r['name']:>8}  {r['kernel_ns']/1e6:>11.3f} ms  {r['run_ns']/1e6:>13.2f} ms")
    if len(results) == 2:
        a, b = sorted(results, key=lambda r: r["kernel_ns"])
        ratio = b["kernel_ns"] / max(a["kernel_ns"], 1)
        print(f"fastest kernel: {a['name']} ({ratio:.1f}x over {b['name']})")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="oscquad",
        description="Adaptive Levin quadrature for bivariate oscillatory integrals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("integrate", help="evaluate one integrand")
    _add_run_options(p_int)
    p_int.add_argument("--lambda", dest="lam", type=float, required=True, help="frequency")
    p_int.set_defaults(func=_cmd_integrate)

    p_bench = sub.add_parser("bench", help="sweep frequencies and report")
    _add_run_options(p_bench)
    p_bench.add_argument(
        "--lambda-log-range",
        required=True,
        metavar="LO:HI:COUNT",
        help="log10 frequency grid, e.g. 1:4:100",
    )
    p_bench.add_argument("--repeats", type=int, default=1, help="timed runs per point")
    p_bench.add_argument("--format", choices=("csv", "json"), default="csv")
    p_bench.add_argument("--out", default=None, help="write report to this path")
    p_bench.add_argument(
        "--no-error", action="store_true", help="skip reference/oracle error computation"
    )
    p_bench.set_defaults(func=_cmd_bench)

    p_mesh = sub.add_parser("mesh", help="dump the accepted mesh as CSV")
    _add_run_options(p_mesh)
    p_mesh.add_argument("--lambda", dest="lam", type=float, required=True, help="frequency")
    p_mesh.add_argument("--out", default=None, help="write CSV to this path")
    p_mesh.set_defaults(func=_cmd_mesh)

    p_back = sub.add_parser("backends", help="compare compiled vs fallback kernels")
    p_back.add_argument("--fibers", type=int, default=512, help="fiber batch size")
    p_back.add_argument("--repeats", type=int, default=5, help="timing repeats")
    p_back.set_defaults(func=_cmd_backends)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
