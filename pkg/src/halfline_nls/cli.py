"""Command-line front end.

Subcommands: classify, gate, spectral, poles, build, eval, eval-closed,
verify.  Exit codes: 0 success, 2 malformed input, 3 not admissible,
4 evaluation hit a singular point.  Grid output is CSV "x,t,re_u,im_u" with
17 significant digits; report-style commands can also render figures to files
next to the delimited output via --figure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import admissibility, closedform, dressing, scalarfuncs, spectral, verify
from .errors import GateNotPassed, HalflineNLSError, SingularSystem
from .pairs import PeriodicPair

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_ADMISSIBLE = 3
EXIT_SINGULAR = 4


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _write(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _triple_from_args(args) -> closedform.ExponentialTriple:
    return closedform.ExponentialTriple(
        alpha=args.alpha, omega=args.omega, c=complex(args.c_re, args.c_im)
    )


def _pair_from_args(args) -> PeriodicPair:
    if getattr(args, "pair", None):
        with open(args.pair) as fh:
            return PeriodicPair.from_json_dict(json.load(fh))
    if args.alpha is None or args.omega is None:
        raise ValueError("either --pair or --alpha/--omega/--c-re/--c-im required")
    return PeriodicPair.exponential(args.alpha, args.omega,
                                    complex(args.c_re, args.c_im))


def _add_triple_flags(p, required=False):
    p.add_argument("--alpha", type=float, required=required)
    p.add_argument("--omega", type=float, required=required)
    p.add_argument("--c-re", type=float, default=0.0, dest="c_re")
    p.add_argument("--c-im", type=float, default=0.0, dest="c_im")


def _add_pair_flags(p):
    p.add_argument("--pair", help="JSON boundary-pair file")
    _add_triple_flags(p)


def _add_grid_flags(p, x1=5.0, t1=None, nx=51, nt=41):
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--x1", type=float, default=x1)
    p.add_argument("--nx", type=int, default=nx)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=t1)
    p.add_argument("--nt", type=int, default=nt)


def _grid_from_args(args, default_t1: float):
    if args.nx < 2 or args.nt < 2:
        raise ValueError("nx and nt must be >= 2")
    if args.x0 < 0 or args.t0 < 0:
        raise ValueError("grid must lie in the quarter plane x >= 0, t >= 0")
    t1 = args.t1 if args.t1 is not None else default_t1
    return np.linspace(args.x0, args.x1, args.nx), np.linspace(args.t0, t1, args.nt)


def _u_csv(xs, ts, u, threads: int = 1) -> str:
    def row_block(i):
        x = float(xs[i])
        lines = []
        for t in ts:
            v = u(x, float(t))
            lines.append(f"{_fmt(x)},{_fmt(float(t))},{_fmt(v.real)},{_fmt(v.imag)}")
        return "\n".join(lines)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            blocks = list(ex.map(row_block, range(len(xs))))
    else:
        blocks = [row_block(i) for i in range(len(xs))]
    return "x,t,re_u,im_u\n" + "\n".join(blocks) + "\n"


def _heatmap(xs, ts, u, path: str, title: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    vals = np.empty((len(xs), len(ts)))
    for i, x in enumerate(xs):
        for j, t in enumerate(ts):
            try:
                vals[i, j] = abs(u(float(x), float(t)))
            except HalflineNLSError:
                vals[i, j] = np.nan
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    pc = ax.pcolormesh(ts, xs, vals, shading="auto")
    fig.colorbar(pc, ax=ax, label="|u|")
    ax.set_xlabel("t")
    ax.set_ylabel("x")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _build_pole_data(pair: PeriodicPair, n_max: int) -> scalarfuncs.PoleData:
    report = admissibility.verdict(pair, n_max=n_max)
    if not report.admissible:
        raise GateNotPassed(report.reason)
    sf = scalarfuncs.ScalarFunctions(pair)
    return scalarfuncs.h_residues(pair, report.pole_candidates, sf=sf)


# -- subcommands -------------------------------------------------------------

def cmd_classify(args) -> int:
    triple = _triple_from_args(args)
    family, ver = closedform.classify(triple)
    out = {"family": family.value, "verdict": ver.value}
    _write(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK if ver is closedform.Verdict.EVENTUALLY_ADMISSIBLE else EXIT_NOT_ADMISSIBLE


def cmd_gate(args) -> int:
    pair = _pair_from_args(args)
    report = admissibility.verdict(pair, n_max=args.n_max)
    _write(json.dumps(report.to_json_dict(), indent=2) + "\n", args.output)
    return EXIT_OK if report.admissible else EXIT_NOT_ADMISSIBLE


def cmd_spectral(args) -> int:
    pair = _pair_from_args(args)
    ks = np.linspace(args.k_min, args.k_max, args.n) + 1j * args.imag
    samples = spectral.sample_grid(pair, ks)
    lines = ["k_re,k_im,re_qb,im_qb,re_pb,im_pb,re_ab2,im_ab2"]
    for s in samples:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (s.k.real, s.k.imag, s.qb.real, s.qb.imag,
                          s.pb.real, s.pb.imag, s.ab2.real, s.ab2.imag)
            )
        )
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_poles(args) -> int:
    pair = _pair_from_args(args)
    upper, real = admissibility.locate_poles(pair, n_max=args.n_max)
    out = {
        "upper": [[[k.real, k.imag], [r.real, r.imag]] for k, r in upper],
        "real": [[[k.real, k.imag], [r.real, r.imag]] for k, r in real],
    }
    _write(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_build(args) -> int:
    pair = _pair_from_args(args)
    try:
        pole_data = _build_pole_data(pair, args.n_max)
    except GateNotPassed as exc:
        _write(json.dumps({"error": str(exc)}, indent=2) + "\n", args.output)
        return EXIT_NOT_ADMISSIBLE
    _write(json.dumps(pole_data.to_json_dict(), indent=2) + "\n", args.output)
    return EXIT_OK


def _descriptor_from_args(args) -> scalarfuncs.PoleData:
    with open(args.descriptor) as fh:
        return scalarfuncs.PoleData.from_json_dict(json.load(fh))


def cmd_eval(args) -> int:
    pole_data = _descriptor_from_args(args)
    tau = 2.0 * math.pi / abs(pole_data.omega) if pole_data.omega else 2.0 * math.pi
    xs, ts = _grid_from_args(args, 2.0 * tau)
    sol = dressing.DressedSolution(pole_data)
    try:
        csv = _u_csv(xs, ts, sol.u, args.threads)
    except SingularSystem as exc:
        sys.stderr.write(f"singular dressing system: {exc}\n")
        return EXIT_SINGULAR
    _write(csv, args.output)
    if args.figure:
        _heatmap(xs, ts, sol.u, args.figure, "dressed solution")
    return EXIT_OK


def cmd_eval_closed(args) -> int:
    if args.example == "two-pole":
        u = closedform.u_section5
        tau = 2.0 * math.pi
        title = "two-pole reference solution"
    else:
        if args.alpha is None or args.omega is None:
            raise ValueError("--alpha/--omega required unless --example two-pole")
        a_, w_ = args.alpha, args.omega
        u = lambda x, t: closedform.u_family_d(a_, w_, x, t)  # noqa: E731
        tau = 2.0 * math.pi / abs(w_)
        title = "single-exponential closed form"
    xs, ts = _grid_from_args(args, 2.0 * tau)
    csv = _u_csv(xs, ts, u, args.threads)
    _write(csv, args.output)
    if args.figure:
        _heatmap(xs, ts, u, args.figure, title)
    return EXIT_OK


def cmd_verify(args) -> int:
    pair = None
    if args.descriptor:
        pole_data = _descriptor_from_args(args)
        if args.alpha is not None and args.omega is not None:
            pair = PeriodicPair.exponential(args.alpha, args.omega,
                                            complex(args.c_re, args.c_im))
    else:
        pair = _pair_from_args(args)
        try:
            pole_data = _build_pole_data(pair, args.n_max)
        except GateNotPassed as exc:
            _write(json.dumps({"error": str(exc)}, indent=2) + "\n", args.output)
            return EXIT_NOT_ADMISSIBLE
    tau = 2.0 * math.pi / abs(pole_data.omega) if pole_data.omega else 2.0 * math.pi
    xs, ts = _grid_from_args(args, 2.0 * tau)
    sol = dressing.DressedSolution(pole_data)
    try:
        rep = verify.verify_solution(sol.u, pair, tau, xs, ts)
    except SingularSystem as exc:
        sys.stderr.write(f"singular dressing system: {exc}\n")
        return EXIT_SINGULAR
    _write(json.dumps(rep.to_json_dict(), indent=2) + "\n", args.output)
    if args.figure:
        _heatmap(xs, ts, sol.u, args.figure, "verified solution")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="halfline-nls")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="family membership of an exponential triple")
    _add_triple_flags(p, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gate", help="full admissibility report for a pair")
    _add_pair_flags(p)
    p.add_argument("--n-max", type=int, default=32)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("spectral", help="spectral quotients along a k-line")
    _add_pair_flags(p)
    p.add_argument("--k-min", type=float, default=-10.0)
    p.add_argument("--k-max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--imag", type=float, default=0.0, help="Im k offset of the line")
    p.add_argument("--output")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("poles", help="lattice poles and residues of pb")
    _add_pair_flags(p)
    p.add_argument("--n-max", type=int, default=32)
    p.add_argument("--output")
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("build", help="run the pipeline to a solution descriptor")
    _add_pair_flags(p)
    p.add_argument("--n-max", type=int, default=32)
    p.add_argument("--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="evaluate a dressed solution on a grid")
    p.add_argument("--descriptor", required=True)
    _add_grid_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output")
    p.add_argument("--figure", help="write an |u| heatmap PNG")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("eval-closed", help="evaluate a closed-form solution")
    _add_triple_flags(p)
    p.add_argument("--example", choices=["two-pole"])
    _add_grid_flags(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_eval_closed)

    p = sub.add_parser("verify", help="black-box verification report")
    p.add_argument("--descriptor")
    _add_pair_flags(p)
    p.add_argument("--n-max", type=int, default=32)
    _add_grid_flags(p, x1=3.0, nx=13, nt=9)
    p.add_argument("--output")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except SingularSystem as exc:
        sys.stderr.write(f"singular point: {exc}\n")
        return EXIT_SINGULAR
    except HalflineNLSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOT_ADMISSIBLE


if __name__ == "__main__":
    sys.exit(main())
