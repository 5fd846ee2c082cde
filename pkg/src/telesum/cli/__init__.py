"""Command-line front end: ``telesum {pdf,cdf,charfn,verify,simulate,general}``.

Exit status is 0 on success, 1 on a numeric or check failure and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .. import __version__
from ..errors import TelesumError
from ..telegraph import TelegraphParams
from .tables import DistributionTable, Table, render_svg

__all__ = ["main", "build_parser"]


def _params_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("process parameters")
    g.add_argument("--c", type=float, default=1.0, help="speed of both processes (default 1)")
    g.add_argument("--lambda", dest="lam", type=float, default=1.0, help="switching rate of both (default 1)")
    g.add_argument("--c1", type=float)
    g.add_argument("--c2", type=float)
    g.add_argument("--lambda1", dest="lam1", type=float)
    g.add_argument("--lambda2", dest="lam2", type=float)
    g.add_argument("--x01", type=float, default=0.0, help="start of the first process")
    g.add_argument("--x02", type=float, default=0.0, help="start of the second process")
    g.add_argument("--t", type=float, default=2.0, help="time (default 2)")
    return p


def _grid_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("grid and output")
    g.add_argument("--grid-min", type=float)
    g.add_argument("--grid-max", type=float)
    g.add_argument("--grid-n", type=int, default=None, help="default 1001 (401 for charfn)")
    g.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    g.add_argument("-o", "--output", help="write to a file instead of stdout")
    return p


def build_parser():
    parser = argparse.ArgumentParser(
        prog="telesum", description="Law of the sum of two independent telegraph processes."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    par, grid = _params_parser(), _grid_parser()

    sub.add_parser("pdf", parents=[par, grid], help="density table (equal parameters)")
    sub.add_parser("cdf", parents=[par, grid], help="distribution function table (equal parameters)")
    ch = sub.add_parser("charfn", parents=[par, grid], help="characteristic functions on a xi grid")

    v = sub.add_parser("verify", parents=[par], help="run the identity and oracle checks")
    v.add_argument("--json", action="store_true", help="machine-readable report")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    s = sub.add_parser("simulate", parents=[par], help="Monte Carlo run, optionally compared with the law")
    s.add_argument("--paths", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int)
    s.add_argument("--compare", action="store_true")
    s.add_argument("--ks-threshold", type=float, help="default 5/sqrt(paths), i.e. 0.005 at 10^6")

    gen = sub.add_parser("general", parents=[par, grid], help="general-case table by numeric inversion")
    gen.add_argument("--tol", type=float, default=1e-5)
    return parser


def _sum_params(args):
    from ..sumdist import SumParams

    p1 = TelegraphParams(args.c if args.c1 is None else args.c1, args.lam if args.lam1 is None else args.lam1)
    p2 = TelegraphParams(args.c if args.c2 is None else args.c2, args.lam if args.lam2 is None else args.lam2)
    return SumParams(p1, p2, args.x01, args.x02)


def _closed(args, parser):
    sp = _sum_params(args)
    if not sp.closed_form:
        parser.error(f"'{args.command}' needs equal parameters and zero starts; use 'general'")
    return sp.p1


def _header(args, **extra):
    head = {"version": __version__, "t": repr(args.t)}
    if args.c1 is None and args.c2 is None and args.lam1 is None and args.lam2 is None:
        head.update(c=repr(args.c), **{"lambda": repr(args.lam)})
    else:
        sp = _sum_params(args)
        head.update(c1=repr(sp.p1.c), c2=repr(sp.p2.c), lambda1=repr(sp.p1.lam), lambda2=repr(sp.p2.lam))
    if args.x01 or args.x02:
        head.update(x01=repr(args.x01), x02=repr(args.x02))
    head.update(extra)
    return head


def _grid(args, lo, hi, nudge):
    a = lo if args.grid_min is None else args.grid_min
    b = hi if args.grid_max is None else args.grid_max
    if args.grid_n < 2 or not a < b:
        raise TelesumError("grid needs grid-min < grid-max and at least two points")
    x = np.linspace(a, b, args.grid_n)
    # keep boundary zeros apart from the atoms there
    x[0] = max(x[0], lo + nudge) if x[0] <= lo + nudge else x[0]
    x[-1] = min(x[-1], hi - nudge) if x[-1] >= hi - nudge else x[-1]
    return x


def _emit(args, table: Table, ycol, step=False, title=""):
    if args.format == "csv":
        text = table.to_csv()
    elif args.format == "json":
        text = table.to_json()
    else:
        text = render_svg(table, ycol, step=step, title=title)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def distribution_table(p: TelegraphParams, t, x, header=None):
    from ..sumdist import sum_atoms, sum_cdf, sum_pdf_ac

    atoms = [(a.location, a.mass) for a in sum_atoms(p, t)]
    return DistributionTable(x, sum_pdf_ac(p, x, t), sum_cdf(p, x, t), header, atoms)


def cmd_pdf(args, parser):
    p = _closed(args, parser)
    ct = p.c * args.t
    x = _grid(args, -2 * ct, 2 * ct, 1e-9 * ct)
    table = distribution_table(p, args.t, x, _header(args))
    _emit(args, table, "pdf_ac", title=f"p_ac(x, {args.t:g})")
    return 0


def cmd_cdf(args, parser):
    p = _closed(args, parser)
    ct = p.c * args.t
    x = _grid(args, -2 * ct, 2 * ct, 1e-9 * ct)
    table = distribution_table(p, args.t, x, _header(args))
    _emit(args, table, "cdf", step=True, title=f"Phi(x, {args.t:g})")
    return 0


def cmd_charfn(args, parser):
    from ..sumdist import general_charfn, sum_charfn, w_hat

    sp = _sum_params(args)
    scale = max(sp.p1.lam / sp.p1.c, sp.p2.lam / sp.p2.c)
    lo = 0.0 if args.grid_min is None else args.grid_min
    hi = 4.0 * scale if args.grid_max is None else args.grid_max
    xi = np.linspace(lo, hi, args.grid_n)
    if sp.closed_form:
        data = np.column_stack([xi, sum_charfn(sp.p1, xi, args.t), w_hat(sp.p1, xi, args.t)])
        table = Table(("xi", "psi", "w_hat"), data, _header(args))
    else:
        val = general_charfn(sp, xi, args.t)
        table = Table(("xi", "re", "im"), np.column_stack([xi, val.real, val.imag]), _header(args))
    _emit(args, table, table.columns[1], title=f"characteristic function, t={args.t:g}")
    return 0


def cmd_general(args, parser):
    from ..sumdist import general_law

    sp = _sum_params(args)
    law = general_law(sp, args.t, tol=args.tol)
    lo, hi = law.support
    x = _grid(args, lo, hi, 1e-9 * (hi - lo))
    table = DistributionTable(
        x, law.pdf_ac(x), law.cdf(x), _header(args, method="inversion"), [tuple(a) for a in law.atoms]
    )
    _emit(args, table, "pdf_ac", title=f"general case, t={args.t:g}")
    return 0


def cmd_verify(args, parser):
    from .verify import run_checks

    p = _closed(args, parser)
    rep = run_checks(p, args.t, inject_fault=args.inject_fault)
    sys.stdout.write(rep.to_json() if args.json else rep.to_text())
    return 0 if rep.ok else 1


def cmd_simulate(args, parser):
    from ..mc import SimConfig, atom_z_scores, ks_distance, simulate_sum
    from ..sumdist import general_law, sum_law

    if args.paths < 1:
        parser.error("--paths must be positive")
    sp = _sum_params(args)
    cfg = SimConfig(args.seed, args.paths, args.t, args.workers)
    samples = simulate_sum(sp, cfg)
    pos = samples.positions
    lines = [
        f"paths {len(samples)}",
        f"seed {args.seed}",
        f"mean {np.mean(pos):.10g}",
        f"std {np.std(pos):.10g}",
        f"range [{pos.min():.17g}, {pos.max():.17g}]",
        f"no-switch fraction {np.count_nonzero(samples.no_switch) / len(samples):.10g}",
    ]
    status = 0
    if args.compare:
        if sp.closed_form:
            law, grid, source = sum_law(sp.p1, args.t), None, "closed form"
        else:
            law, grid, source = general_law(sp, args.t), 4001, "numeric inversion"
        thr = args.ks_threshold if args.ks_threshold is not None else 5.0 / math.sqrt(args.paths)
        ks = ks_distance(samples, law, model_grid=grid)
        lines.append(f"model {source}")
        z = atom_z_scores(samples, law.atoms)
        for a, zv in zip(law.atoms, z):
            lines.append(f"atom {a.location:.17g} mass {a.mass:.10g} z {zv:+.4f}")
        verdict = "pass" if ks <= thr else "FAIL"
        lines.append(f"ks {ks:.6g} threshold {thr:.6g} {verdict}")
        status = 0 if ks <= thr else 1
    sys.stdout.write("\n".join(lines) + "\n")
    return status


_COMMANDS = {
    "pdf": cmd_pdf,
    "cdf": cmd_cdf,
    "charfn": cmd_charfn,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "general": cmd_general,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid_n", 0) is None:
        args.grid_n = 401 if args.command == "charfn" else 1001
    try:
        return _COMMANDS[args.command](args, parser)
    except TelesumError as exc:
        print(f"telesum: error: {exc}", file=sys.stderr)
        return 1
