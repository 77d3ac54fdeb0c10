"""Command-line front end: thresholds, transfer curves, tensors, self checks.

Every run is deterministic, so identical invocations produce byte-identical
output.  Floats are printed with 12 significant digits, enough to compare
against published 5-6 digit thresholds without ambiguity.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import coupled, de, exitchart, oracles, transfer


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _de_options(args) -> de.DeOptions:
    return de.DeOptions(max_iters=args.max_iters, conv_tol=args.conv_tol,
                        success_tol=args.success_tol, bisect_tol=args.bisect_tol)


def _options_dict(opts: de.DeOptions) -> dict:
    return {"max_iters": opts.max_iters, "conv_tol": opts.conv_tol,
            "success_tol": opts.success_tol, "bisect_tol": opts.bisect_tol}


def _grid(args) -> np.ndarray:
    if args.eps_step <= 0:
        raise ValueError("--eps-step must be positive")
    if not 0 <= args.eps_min <= args.eps_max <= 1:
        raise ValueError("need 0 <= --eps-min <= --eps-max <= 1")
    n = int(round((args.eps_max - args.eps_min) / args.eps_step)) + 1
    grid = args.eps_min + args.eps_step * np.arange(n)
    return grid[grid <= args.eps_max + 1e-12]


def _emit(args, ensemble: dict, options: dict, results: dict,
          csv_rows: list[tuple], csv_header: tuple) -> None:
    if args.format == "json":
        doc = {"ensemble": ensemble, "options": options,
               "results": _round_floats(results)}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [",".join(csv_header)]
        for row in csv_rows:
            lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v)
                                  for v in row))
        text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _cmd_threshold(args) -> int:
    spec = de.EnsembleSpec(args.dv, args.dc, args.m)
    opts = _de_options(args)
    th = de.bp_threshold(spec, opts)
    _emit(args, _ensemble_dict(args), _options_dict(opts), {"eps_bp": th},
          [("eps_bp", th)], ("quantity", "value"))
    return 0


def _cmd_exit(args) -> int:
    spec = de.EnsembleSpec(args.dv, args.dc, args.m)
    opts = _de_options(args)
    grid = _grid(args)
    curve = exitchart.bp_exit_curve(spec, grid, opts)
    options = _options_dict(opts) | {"eps_min": args.eps_min,
                                     "eps_max": args.eps_max,
                                     "eps_step": args.eps_step}
    _emit(args, _ensemble_dict(args), options,
          {"eps": curve.eps.tolist(), "h": curve.h.tolist()},
          list(zip(curve.eps.tolist(), curve.h.tolist())), ("eps", "h"))
    return 0


def _cmd_map_bound(args) -> int:
    spec = de.EnsembleSpec(args.dv, args.dc, args.m)
    opts = _de_options(args)
    bound = exitchart.map_bound(spec, opts)
    results = {"eps_map_bound": bound, "design_rate": spec.rate}
    _emit(args, _ensemble_dict(args), _options_dict(opts), results,
          [("eps_map_bound", bound), ("design_rate", spec.rate)],
          ("quantity", "value"))
    return 0


def _cmd_sc_threshold(args) -> int:
    chain = coupled.build_chain(args.dv, args.dc, args.L)
    opts = _de_options(args)
    th = coupled.sc_bp_threshold(chain, args.m, opts)
    results = {"eps_bp": th, "design_rate": chain.rate,
               "eps_sh": 1.0 - chain.rate}
    _emit(args, _ensemble_dict(args), _options_dict(opts), results,
          [("eps_bp", th), ("design_rate", chain.rate),
           ("eps_sh", 1.0 - chain.rate)], ("quantity", "value"))
    return 0


def _cmd_sc_exit(args) -> int:
    chain = coupled.build_chain(args.dv, args.dc, args.L)
    opts = _de_options(args)
    grid = _grid(args)
    curve = coupled.sc_exit_curve(chain, args.m, grid, opts)
    options = _options_dict(opts) | {"eps_min": args.eps_min,
                                     "eps_max": args.eps_max,
                                     "eps_step": args.eps_step}
    _emit(args, _ensemble_dict(args), options,
          {"eps": curve.eps.tolist(), "h": curve.h.tolist()},
          list(zip(curve.eps.tolist(), curve.h.tolist())), ("eps", "h"))
    return 0


def _cmd_coeffs(args) -> int:
    build = (transfer.check_coefficients if args.kind == "check"
             else transfer.variable_coefficients)
    tensor = build(args.m)
    m1 = args.m + 1
    rows = [(i, j, k, float(tensor.coeff[i, j, k]))
            for i in range(m1) for j in range(m1) for k in range(m1)]
    results = {"kind": args.kind,
               "entries": [[i, j, k, v] for i, j, k, v in rows]}
    _emit(args, {"m": args.m}, {}, results, rows, ("i", "j", "k", "value"))
    return 0


def _ensemble_dict(args) -> dict:
    d = {"dv": args.dv, "dc": args.dc, "m": args.m}
    if getattr(args, "L", None) is not None:
        d["L"] = args.L
    return d


def _run_self_check(seed: int) -> int:
    failures = 0
    for name, passed, detail in oracles.self_check(seed):
        tag = "ok" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        print(f"{tag:4s} {name}{suffix}")
        failures += not passed
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nbldpc",
        description="Erasure-channel decoding thresholds and transfer curves "
                    "for nonbinary LDPC ensembles and coupled chains.")
    p.add_argument("--self-check", action="store_true",
                   help="run the built-in brute-force validation suite and exit")
    p.add_argument("--seed", type=int, default=12345,
                   help="seed for the Monte-Carlo part of --self-check")

    ens = argparse.ArgumentParser(add_help=False)
    ens.add_argument("--dv", type=int, required=True, help="variable node degree")
    ens.add_argument("--dc", type=int, required=True, help="check node degree")
    ens.add_argument("--m", type=int, required=True, help="bits per code symbol")

    tol = argparse.ArgumentParser(add_help=False)
    d = de.DeOptions()
    tol.add_argument("--max-iters", type=int, default=d.max_iters)
    tol.add_argument("--conv-tol", type=float, default=d.conv_tol)
    tol.add_argument("--success-tol", type=float, default=d.success_tol)
    tol.add_argument("--bisect-tol", type=float, default=d.bisect_tol)

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--format", choices=("json", "csv"), default="json")
    io.add_argument("--output", help="write to this path instead of stdout")
    io.add_argument("--trace", metavar="PATH",
                    help="dump per-iteration recovered mass as CSV iter,pos,p0 "
                         "(iteration count restarts for every inner DE run)")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--eps-min", type=float, default=0.0)
    grid.add_argument("--eps-max", type=float, default=1.0)
    grid.add_argument("--eps-step", type=float, default=0.01)

    chain = argparse.ArgumentParser(add_help=False)
    chain.add_argument("--L", type=int, required=True,
                       help="termination length of the coupled chain")

    sub = p.add_subparsers(dest="command")
    sub.add_parser("threshold", parents=[ens, tol, io],
                   help="BP threshold of the regular ensemble").set_defaults(
        func=_cmd_threshold)
    sub.add_parser("exit", parents=[ens, tol, io, grid],
                   help="BP transfer curve h(eps) on a grid").set_defaults(
        func=_cmd_exit)
    sub.add_parser("map-bound", parents=[ens, tol, io],
                   help="area-rule upper bound on the MAP threshold").set_defaults(
        func=_cmd_map_bound)
    sub.add_parser("sc-threshold", parents=[ens, chain, tol, io],
                   help="BP threshold of the terminated coupled chain").set_defaults(
        func=_cmd_sc_threshold)
    sub.add_parser("sc-exit", parents=[ens, chain, tol, io, grid],
                   help="chain-averaged transfer curve").set_defaults(
        func=_cmd_sc_exit)
    coeffs = sub.add_parser("coeffs", parents=[io],
                            help="dump a transfer tensor as (i,j,k,value) triples")
    coeffs.add_argument("--m", type=int, required=True)
    coeffs.add_argument("--kind", choices=("check", "variable"), required=True)
    coeffs.set_defaults(func=_cmd_coeffs)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.self_check:
        return _run_self_check(args.seed)
    if not getattr(args, "func", None):
        parser.print_help()
        return 2

    trace_fh = None
    if getattr(args, "trace", None):
        trace_fh = open(args.trace, "w")
        trace_fh.write("iter,pos,p0\n")

        def hook(it, p0_by_pos):
            for pos, p0 in enumerate(p0_by_pos):
                trace_fh.write(f"{it},{pos},{_fmt(p0)}\n")

        de.set_trace_hook(hook)
    try:
        return args.func(args)
    except (ValueError, IndexError, exitchart.MapBoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        de.set_trace_hook(None)
        if trace_fh:
            trace_fh.close()


if __name__ == "__main__":
    sys.exit(main())
