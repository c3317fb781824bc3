"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 computational failure
(enumeration budget exceeded, solver did not converge).
"""
import argparse
import io
import json
import math
import os
import sys

from . import distance_bounds as db
from . import wp_bounds as wp
from .holonomy import ConstructionError, EnumerationBudgetError, NonHyperbolicError
from .holonomy import enumerate_geodesics, records_to_csv, representation
from .hyp_trig import HyperbolicDomainError
from .pants_graph import (
    GraphError,
    build_joined_tree,
    build_tree_for_genus,
    min_length_through_center,
    surface_from_tree,
)
from .reports import BoundReport, line_plot_svg, reports_to_csv, reports_to_json, table_to_csv
from .surface_models import CHAIN_CUFF, SolverError, family_spec, solve_c1, solve_c2_t2

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 2, 3
CUTOFF_MARGIN = 1.05


class UsageError(ValueError):
    pass


def worker_count():
    """Worker cap from ``SYSTOLIC_ATLAS_THREADS``; computations here run in one thread."""
    raw = os.environ.get("SYSTOLIC_ATLAS_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"SYSTOLIC_ATLAS_THREADS must be a positive integer, got {raw!r}")
    if n < 1:
        raise UsageError(f"SYSTOLIC_ATLAS_THREADS must be a positive integer, got {raw!r}")
    return n


def genus_range(text):
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b or a single genus, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty genus range {text!r}")
    return range(lo, hi + 1)


def positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(x) and x > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def _emit(text, path, out):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


# ------------------------------------------------------------------- tree
def cmd_tree(args, out):
    tree = build_joined_tree(args.n) if args.n is not None else build_tree_for_genus(args.genus)
    graph = surface_from_tree(tree)
    stats = {
        "vertices": tree.n_vertices,
        "leaves": len(tree.leaves),
        "genus": graph.genus,
        "center_leaf_distance": tree.center_leaf_distance(),
        "min_length_through_center": min_length_through_center(graph),
    }
    doc = {"tree": tree.to_dict(), "gluing_graph": graph.to_dict(), "stats": stats}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out, out)
    return EXIT_OK


# ---------------------------------------------------------------- systole
def _systole_spec(args):
    if args.family == "rot":
        if args.param is not None:
            if args.c is not None or args.t is not None:
                raise UsageError("--param excludes --c and --t")
            if args.param == "c1":
                return family_spec("rot", args.genus, c=solve_c1(args.genus), t=0.0)
            c2, t2, _ = solve_c2_t2(args.genus)
            return family_spec("rot", args.genus, c=c2, t=t2)
        if args.c is None:
            raise UsageError("--family rot needs --param or --c")
        return family_spec("rot", args.genus, c=args.c, t=args.t or 0.0)
    if args.param is not None or args.c is not None or args.t is not None:
        raise UsageError("--param, --c and --t only apply to --family rot")
    if args.family == "chain":
        return family_spec("chain", args.genus, cuff=args.cuff)
    return family_spec("tree", args.genus)


def cmd_systole(args, out):
    worker_count()
    spec = _systole_spec(args)
    cutoff = args.cutoff
    if cutoff is None:
        if args.param is None:
            raise UsageError("--cutoff is required (it may be omitted only with --param)")
        # the systole at the named parameters is c itself
        cutoff = CUTOFF_MARGIN * spec.c
    records = enumerate_geodesics(representation(spec.to_fn_surface()), cutoff, args.budget)
    if not records:
        raise UsageError(f"no closed geodesic of length <= {cutoff}; raise --cutoff above the systole")
    buf = io.StringIO()
    records_to_csv(records, buf)
    sys_len = records[0].length
    count = sum(1 for r in records if r.length - sys_len <= 1e-9)
    summary = f"# family={spec.family} genus={spec.g} cutoff={cutoff:.15g} systole={sys_len:.15g} count={count}\n"
    if args.out:
        _emit(buf.getvalue(), args.out, out)
        out.write(summary)
    else:
        out.write(buf.getvalue() + summary)
    return EXIT_OK


# ----------------------------------------------------------------- bounds
def _wp_report(g, args):
    consts = wp.WpConstants(eps=args.epsilon)
    x = math.log(g)
    Q = wp.inj_profile_log(x, consts)
    L = math.log(x)
    value = wp.eliminate_sys(Q, L, consts) if Q > 0 else 0.0
    c_g = L
    return BoundReport(
        "wp_lower_bound",
        value,
        "lower",
        {"g": g, "epsilon": consts.eps, "a_sys": consts.a_sys, "b_inj": consts.b_inj, "mp_B": args.mp_B},
        "max(0,(sqrt(2Q)-sqrt(L))/(a+sqrt(2)*b)), Q=log(g)/4-(3/4+eps/2)*loglog(g), L=loglog(g)",
        value <= 0,
        {
            "Q": Q,
            "L": L,
            "stated_threshold": wp.stated_wp_threshold_log(x),
            "failure_probability_bound": wp.mp_tail(c_g, args.mp_B),
        },
    )


def _teich_report(g, args):
    x = math.log(g)
    lhs, rhs, defined = wp.teich_inequality_log(x)
    value = wp.teich_threshold_log(x)
    return BoundReport(
        "teich_threshold",
        value,
        "value",
        {"g": g, "mp_B": args.mp_B},
        "1/5*loglog(g)",
        not (defined and lhs > rhs and value > 0),
        {
            "inequality_lhs": lhs if defined else None,
            "inequality_rhs": rhs,
            "inequality_holds": bool(defined and lhs > rhs),
            "failure_probability_bound": wp.mp_tail(value, args.mp_B) if value > 0 else None,
        },
    )


def _bound_rows(args):
    which = args.which
    if which in ("wp", "teich") and args.mp_B is None:
        raise UsageError(f"--which {which} needs an explicit --mp-B (the tail constant has no known value)")
    for g in args.genus_range:
        if which == "hole":
            yield g, lambda g=g: db.thm_hole_bound(g)
        elif which == "small":
            yield g, lambda g=g: db.dist_small_total(g)
        elif which == "large":
            yield g, lambda g=g: db.dist_large_lower(g, args.cuff)
        elif which == "wp":
            yield g, lambda g=g: _wp_report(g, args)
        else:
            yield g, lambda g=g: _teich_report(g, args)


def _validate_range(which, genera):
    low = {"hole": 3, "small": 2, "large": 13, "wp": 3, "teich": 3}[which]
    if genera[0] < low:
        raise UsageError(f"--which {which} needs genus >= {low}, got {genera[0]}")


def cmd_bounds(args, out, err):
    worker_count()
    _validate_range(args.which, args.genus_range)
    reports, failed = [], 0
    for g, make in _bound_rows(args):
        try:
            reports.append(make())
        except (SolverError, NonHyperbolicError, ConstructionError, ArithmeticError) as exc:
            failed += 1
            err.write(f"g={g}: {type(exc).__name__}: {exc}\n")
    if not reports:
        return EXIT_COMPUTE
    text = reports_to_json(reports) if args.format == "json" else reports_to_csv(reports)
    _emit(text, args.out, out)
    return EXIT_OK


# ------------------------------------------------------------- thresholds
def cmd_thresholds(args, out):
    if not 1.0 < args.log_g_min < args.log_g_max:
        raise UsageError("need 1 < --log-g-min < --log-g-max")
    import numpy as np

    consts = wp.WpConstants(eps=args.epsilon)
    grid = np.geomspace(args.log_g_min, args.log_g_max, args.points)
    rows = wp.threshold_table(grid, consts)
    header = ["log_g", "teich_threshold", "wp_stated_threshold", "wp_recomputed_bound"]
    _emit(table_to_csv(header, rows), args.out, out)
    return EXIT_OK


def cmd_coefficients(args, out):
    import numpy as np

    consts = wp.WpConstants(eps=args.epsilon)
    xs = np.geomspace(1e3, 1e6, 60)
    rows = [
        ("closed_form", wp.leading_coefficient(consts), wp.STATED_COEFFICIENT),
        (
            "fit_log_g_1e3_1e6",
            wp.fit_sqrt_coefficient(lambda x: wp.wp_recomputed_log(x, consts), xs),
            wp.fit_sqrt_coefficient(wp.stated_wp_threshold_log, xs),
        ),
    ]
    buf = io.StringIO()
    buf.write("method,recomputed,stated,difference\n")
    for name, a, b in rows:
        buf.write(f"{name},{a:.15g},{b:.15g},{a - b:.15g}\n")
    _emit(buf.getvalue(), args.out, out)
    return EXIT_OK


# ------------------------------------------------------- dilatation plot
def cmd_plot_dilatation(args, out):
    c1, c2, t2 = db._params(args.genus)
    theta = db.collar_theta(args.genus, c2)
    if args.zero_twist:
        t2 = 0.0
    phis, ks = db.dilatation_curve(t2, theta, args.points)
    phi_star, k_star = db.sup_dilatation(t2, theta)
    svg = line_plot_svg(
        list(phis),
        list(ks),
        mark=(phi_star, k_star),
        title=f"Dilatation of the twist map, genus {args.genus}",
        xlabel="phi",
        ylabel="K(phi)",
    )
    csv_path = args.csv or os.path.splitext(args.out)[0] + ".csv"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(table_to_csv(["phi", "K"], zip(phis.tolist(), ks.tolist())))
    out.write(
        f"genus={args.genus} c2={c2:.15g} t2={t2:.15g} theta={theta:.15g} "
        f"phi_star={phi_star:.15g} K_star={k_star:.15g} half_log_K_star={0.5 * math.log(k_star):.15g}\n"
    )
    return EXIT_OK


# ---------------------------------------------------------------- parser
def build_parser():
    p = argparse.ArgumentParser(prog="systolic-atlas", description="Systole and distance-bound toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tree", help="build the trivalent tree and its gluing graph")
    grp = t.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int, help="depth of the joined tree")
    grp.add_argument("--genus", type=int, help="genus of the tree surface")
    t.add_argument("--out")

    s = sub.add_parser("systole", help="enumerate closed geodesics up to a cutoff")
    s.add_argument("--family", choices=["tree", "rot", "chain"], required=True)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--cutoff", type=positive_float)
    s.add_argument("--param", choices=["c1", "c2"], help="rotation family at a solved parameter point")
    s.add_argument("--c", type=positive_float, help="rotation family cuff length")
    s.add_argument("--t", type=float, help="rotation family twist")
    s.add_argument("--cuff", type=positive_float, default=CHAIN_CUFF, help="chain family cuff length")
    s.add_argument("--budget", type=int, default=None, help="tile budget for the enumeration")
    s.add_argument("--out")

    b = sub.add_parser("bounds", help="evaluate a family of bounds over a genus range")
    b.add_argument("--which", choices=["hole", "small", "large", "wp", "teich"], required=True)
    b.add_argument("--genus-range", type=genus_range, required=True, help="a..b (inclusive)")
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    b.add_argument("--epsilon", type=positive_float, default=wp.DEFAULTS.eps)
    b.add_argument("--mp-B", dest="mp_B", type=positive_float, help="tail constant B (required for wp, teich)")
    b.add_argument("--cuff", type=positive_float, default=CHAIN_CUFF, help="chain cuff length for --which large")
    b.add_argument("--out")

    th = sub.add_parser("thresholds", help="threshold table on a logarithmic grid of log g")
    th.add_argument("--log-g-min", type=float, default=1e2)
    th.add_argument("--log-g-max", type=float, default=1e6)
    th.add_argument("--points", type=int, default=9)
    th.add_argument("--epsilon", type=positive_float, default=wp.DEFAULTS.eps)
    th.add_argument("--out")

    co = sub.add_parser("coefficients", help="recomputed vs stated leading coefficient of the WP bound")
    co.add_argument("--epsilon", type=positive_float, default=wp.DEFAULTS.eps)
    co.add_argument("--out")

    d = sub.add_parser("plot-dilatation", help="SVG plot and CSV of K(phi) at the solved (c2, t2)")
    d.add_argument("--genus", type=int, required=True)
    d.add_argument("--out", required=True, help="SVG path")
    d.add_argument("--csv", help="companion CSV path (default: next to the SVG)")
    d.add_argument("--points", type=int, default=2001)
    d.add_argument("--zero-twist", action="store_true", help="force t2 = 0 (identity map, K = 1)")
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        if args.command == "tree":
            return cmd_tree(args, out)
        if args.command == "systole":
            return cmd_systole(args, out)
        if args.command == "bounds":
            return cmd_bounds(args, out, err)
        if args.command == "thresholds":
            return cmd_thresholds(args, out)
        if args.command == "coefficients":
            return cmd_coefficients(args, out)
        return cmd_plot_dilatation(args, out)
    except (EnumerationBudgetError, SolverError, NonHyperbolicError, ConstructionError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_COMPUTE
    except (UsageError, GraphError, HyperbolicDomainError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def entry():
    sys.exit(main())
