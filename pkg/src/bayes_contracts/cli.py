"""Command-line interface: ``bayes-contracts {solve,gen,compare,verify}``.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 enumeration cap
exceeded, 4 a verification check failed.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from .agent import make_result
from .exact import (
    DEFAULT_CAP,
    DEFAULT_GRID_BUDGET,
    brute_force_grid,
    solve_by_outcome_enumeration,
    solve_by_type_enumeration,
)
from .exceptions import ContractError, EnumerationCapExceeded, InvalidInstanceError
from .generators import (
    Graph,
    completeness_contract_independent_set,
    completeness_contract_label_cover,
    gen_bi_approx_gap,
    gen_from_graph,
    gen_from_label_cover,
    gen_linear_gap,
    gen_random,
    greedy_maximal_independent_set,
)
from .io import (
    ReportRow,
    format_decimal,
    load_graph,
    load_instance,
    load_label_cover,
    save_contract,
    save_instance,
    write_report,
)
from .linear import best_grid_contract, optimize_linear, to_contract
from .model import as_rational
from .verify import (
    builtin_label_cover,
    find_labeling,
    verify_bi_approx,
    verify_is_complete,
    verify_lc_complete,
    verify_linear_gap,
    verify_bi_approx_gap,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with status 1 instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _vertex_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a vertex list: {text!r}") from exc


def _contract_text(p) -> str:
    return "p=" + ";".join(str(x) for x in p)


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def _instance_id(path) -> str:
    return Path(path).name


# -- solve / compare ---------------------------------------------------------


def _run_method(inst, method, args):
    """``(ReportRow fields, contract)`` for one solver."""
    if method == "types":
        res, wall = _timed(solve_by_type_enumeration, inst, args.cap, args.jobs)
        return res.utility, _contract_text(res.contract), res.contract, wall
    if method == "outcomes":
        res, wall = _timed(solve_by_outcome_enumeration, inst, args.cap, args.jobs)
        return res.utility, _contract_text(res.contract), res.contract, wall
    if method == "linear":
        sweep, wall = _timed(optimize_linear, inst)
        contract = to_contract(sweep.best_alpha, inst)
        return sweep.utility, f"alpha={sweep.best_alpha}", contract, wall
    if method == "grid":
        if args.rho is None:
            raise _UsageError("--method grid needs --rho")
        (lc, u), wall = _timed(best_grid_contract, inst, args.rho)
        return u, f"alpha={lc.alpha}", to_contract(lc, inst), wall
    if method == "brute":
        (c, u), wall = _timed(brute_force_grid, inst, args.resolution, DEFAULT_GRID_BUDGET)
        return u, _contract_text(c), c, wall
    raise _UsageError(f"unknown method {method!r}")


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    utility, detail, contract, wall = _run_method(inst, args.method, args)
    row = ReportRow(_instance_id(args.instance), args.method, utility, detail, wall)
    result = make_result(inst, contract)
    sidecar = args.contract_out
    if args.out:
        write_report([row], args.out, timing=not args.no_timing)
        sidecar = sidecar or str(Path(args.out).with_suffix(".contract.json"))
    if sidecar:
        save_contract(
            contract,
            sidecar,
            {"method": args.method, "utility": str(utility), "profile": list(result.profile)},
        )
    print(f"method: {args.method}")
    if detail.startswith("alpha="):
        print(f"best_alpha: {detail[len('alpha='):]}")
    print(f"utility: {utility} ({format_decimal(utility)})")
    print(f"contract: {' '.join(str(x) for x in contract.p)}")
    print(f"profile: {' '.join(str(a) for a in result.profile)}")
    return EXIT_OK


def cmd_compare(args) -> int:
    inst = load_instance(args.instance)
    iid = _instance_id(args.instance)
    rows, utilities, refused = [], {}, None
    for method in ("types", "outcomes", "linear", "grid"):
        try:
            utility, detail, _, wall = _run_method(inst, method, args)
        except EnumerationCapExceeded as exc:
            print(f"skipping {method}: {exc}", file=sys.stderr)
            refused = exc
            continue
        utilities[method] = utility
        rows.append(ReportRow(iid, method, utility, detail, wall))
    if not {"types", "outcomes"} & utilities.keys():
        raise refused
    opt = utilities.get("types", utilities.get("outcomes"))
    lin = utilities["linear"]
    ratio = opt / lin if lin > 0 else None
    rows.append(ReportRow(iid, "ratio_opt_over_linear", ratio, "" if ratio is not None else "inf"))
    if args.out:
        write_report(rows, args.out, timing=not args.no_timing)
    for row in rows:
        shown = "inf" if row.utility is None else f"{row.utility} ({format_decimal(row.utility)})"
        print(f"{row.method}: {shown} {row.detail}".rstrip())
    return EXIT_OK


# -- gen ---------------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise _UsageError(f"--family {args.family} needs {' '.join(missing)}")


def _graph_from_args(args) -> Graph:
    if args.graph is not None:
        return load_graph(args.graph, args.vertices)
    if args.vertices is None:
        raise _UsageError("give --graph FILE or --vertices N (edgeless graph)")
    return Graph.edgeless(args.vertices)


def _label_cover_from_args(args):
    if args.labelcover is not None:
        return load_label_cover(args.labelcover)
    return builtin_label_cover()


def cmd_gen(args) -> int:
    family = args.family
    contract = None
    if family == "thm1":
        _need(args, "ell")
        inst = gen_linear_gap(args.ell)
    elif family == "thm4":
        _need(args, "rho")
        inst = gen_bi_approx_gap(args.rho)
    elif family == "graph":
        G = _graph_from_args(args)
        inst = gen_from_graph(G)
        if args.contract_out:
            vs = args.independent_set or greedy_maximal_independent_set(G)
            contract = completeness_contract_independent_set(G, vs)
    elif family == "labelcover":
        _need(args, "rho")
        lc, labeling = _label_cover_from_args(args)
        inst = gen_from_label_cover(lc, args.rho)
        if args.contract_out:
            labeling = labeling or find_labeling(lc)
            if labeling is None:
                raise ValueError("no satisfying labeling for the completeness contract")
            contract = completeness_contract_label_cover(lc, labeling, args.rho)
    else:
        _need(args, "seed", "types", "actions", "outcomes")
        inst = gen_random(args.seed, args.types, args.actions, args.outcomes)
    save_instance(inst, args.out)
    if contract is not None:
        save_contract(contract, args.contract_out, {"family": family})
    ell, n, m = inst.shape
    print(f"wrote {args.out}: {ell} types, {n} actions, {m} outcomes")
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    family = args.family
    if family == "thm1":
        _need(args, "ell")
        v = verify_linear_gap(args.ell, args.jobs)
    elif family == "thm4":
        _need(args, "rho")
        v = verify_bi_approx_gap(args.rho, args.jobs)
    elif family == "is-complete":
        v = verify_is_complete(_graph_from_args(args), args.independent_set)
    elif family == "lc-complete":
        _need(args, "rho")
        if args.labelcover is None:
            v = verify_lc_complete(args.rho)
        else:
            lc, labeling = load_label_cover(args.labelcover)
            v = verify_lc_complete(args.rho, lc, labeling)
    else:
        _need(args, "rho")
        if args.instance is not None:
            inst = load_instance(args.instance)
        else:
            _need(args, "seed")
            inst = gen_random(args.seed, args.types or 2, args.actions or 3, args.outcomes or 3)
        v = verify_bi_approx(inst, args.rho, args.jobs)
    print(v.render())
    return EXIT_OK if v.passed else EXIT_CHECK_FAILED


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bayes-contracts", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")

    p = sub.add_parser("solve", help="run one solver on an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--method", required=True, choices=["types", "outcomes", "linear", "grid", "brute"])
    p.add_argument("--rho", type=_rational, help="multiplicative loss for --method grid")
    p.add_argument("--resolution", type=int, default=16, help="grid step for --method brute")
    p.add_argument("--out", help="CSV report path (omit to print the summary only)")
    p.add_argument("--contract-out", help="contract sidecar (default: <out>.contract.json)")
    p.add_argument("--no-timing", action="store_true", help="leave wall_time empty")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="write an instance of a family")
    p.add_argument("--family", required=True, choices=["thm1", "thm4", "graph", "labelcover", "random"])
    p.add_argument("--ell", type=int)
    p.add_argument("--rho", type=_rational)
    p.add_argument("--graph", help="edge-list file, one 'u v' pair per line")
    p.add_argument("--vertices", type=int, help="vertex count (edgeless graph without --graph)")
    p.add_argument("--independent-set", type=_vertex_list)
    p.add_argument("--labelcover", help="label-cover JSON file (default: built-in 2-edge instance)")
    p.add_argument("--seed", type=int)
    p.add_argument("--types", type=int)
    p.add_argument("--actions", type=int)
    p.add_argument("--outcomes", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--contract-out", help="also write the completeness contract")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="run every applicable solver and report OPT/linear")
    p.add_argument("--instance", required=True)
    p.add_argument("--rho", type=_rational, required=True)
    p.add_argument("--out", help="CSV report path (omit to print the summary only)")
    p.add_argument("--no-timing", action="store_true")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="check a family's inequalities at a given size")
    p.add_argument(
        "--family", required=True, choices=["thm1", "thm4", "is-complete", "lc-complete", "bi-approx"]
    )
    p.add_argument("--ell", type=int)
    p.add_argument("--rho", type=_rational)
    p.add_argument("--graph")
    p.add_argument("--vertices", type=int)
    p.add_argument("--independent-set", type=_vertex_list)
    p.add_argument("--labelcover")
    p.add_argument("--instance")
    p.add_argument("--seed", type=int)
    p.add_argument("--types", type=int)
    p.add_argument("--actions", type=int)
    p.add_argument("--outcomes", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvalidInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ContractError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
