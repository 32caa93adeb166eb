"""Command-line front end.

Subcommands: pq, eta, graph, schur, affine, ode, chevalley, verify, cache.
Outputs are deterministic for a fixed seed and version: JSON with sorted
keys, RFC-4180-style CSV, or DOT.  Exit codes: 0 success, 1 validation
error, 2 computational error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, numtoda
from .affine import AffineWeylGroup, p_series, rational_guess
from .blowup_poly import (
    brute_force_so_order,
    chevalley_order,
    closed_form_p,
    p_epsilon,
)
from .errors import TodaLabError, ValidationError
from .rootdata import LieType, compact_dual_info, conventions_table
from .schurtau import (
    hirota_residual,
    minimal_degrees,
    nu_degrees,
    real_root_count_experiment,
    tau_functions,
)
from .signflow import all_minus, eta_table, format_signs, parse_signs
from .todagraph import build_graph, graph_to_dict, matching_report, to_dot
from .weyl import WeylGroup, cache_clear, cache_entries, resolve_cache_dir
from . import verify as verify_mod

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse mistakes are validation errors: exit 1
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def _sign_vector(args, rank: int):
    if args.sign is None:
        return all_minus(rank)
    eps = parse_signs(args.sign)
    if len(eps) != rank:
        raise ValidationError(
            f"sign vector {args.sign!r} has length {len(eps)}, expected {rank}"
        )
    return eps


def _emit(text: str, args):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, args):
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args)


def _emit_csv(rows, header, args):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    _emit(buf.getvalue(), args)


def _group(args, t: LieType) -> WeylGroup:
    kwargs = {"cache_dir": args.cache_dir}
    if args.cap is not None:
        kwargs["cap"] = args.cap
    return WeylGroup.generate(t, **kwargs)


# -- subcommand handlers -------------------------------------------------------


def cmd_pq(args):
    t = LieType.parse(args.type)
    eps = _sign_vector(args, t.rank)
    poly = p_epsilon(_group(args, t), eps)
    payload = {
        "type": str(t),
        "sign": format_signs(eps),
        "coeffs": list(poly.coeffs),
        "p": str(poly),
    }
    if eps == all_minus(t.rank):
        closed = closed_form_p(t)
        payload["p"] = str(closed)
        payload["closed_form_exponents"] = list(closed.exponents)
        payload["matches_closed_form"] = closed.expand() == poly
    if args.format == "text":
        _emit(f"{t} {format_signs(eps)}: {poly}\n", args)
    else:
        _emit_json(payload, args)
    return 0


def cmd_eta(args):
    t = LieType.parse(args.type)
    eps = _sign_vector(args, t.rank)
    table = eta_table(_group(args, t), eps)
    rows = list(table.as_rows())
    if args.format == "csv":
        _emit_csv([(r["word"], r["length"], r["eta"], r["sign"]) for r in rows],
                  ("word", "length", "eta", "sign"), args)
    elif args.format == "text":
        lines = [f"{r['word']:>12}  l={r['length']}  eta={r['eta']}  {r['sign']}"
                 for r in rows]
        _emit("\n".join(lines) + "\n", args)
    else:
        _emit_json({"type": str(t), "sign": format_signs(eps), "table": rows,
                    "max_eta": table.max_value()}, args)
    return 0


def cmd_graph(args):
    t = LieType.parse(args.type)
    eps = _sign_vector(args, t.rank)
    graph = build_graph(_group(args, t), eps)
    if args.format == "dot":
        _emit(to_dot(graph), args)
    else:
        doc = graph_to_dict(graph)
        report = matching_report(graph)
        doc["matching"] = report.is_matching
        if report.is_matching:
            doc["betti"] = list(report.betti)
        _emit_json(doc, args)
    return 0


def cmd_schur(args):
    t = LieType.parse(args.type)
    if args.experiment == "real-roots":
        rep = real_root_count_experiment(t, samples=args.samples, seed=args.seed)
        _emit_json(rep.as_dict(), args)
        return 0
    system = tau_functions(t)
    payload = {
        "type": str(t),
        "variables": list(system.ring.names),
        "weights": list(system.ring.weights),
        "taus": [tau.to_json()["monomials"] for tau in system.taus],
        "taus_pretty": [str(tau) for tau in system.taus],
        "minimal_degrees": list(minimal_degrees(system)),
        "nu_degrees": list(nu_degrees(system)),
        "notes": list(system.notes),
    }
    if args.hirota:
        fits = []
        for k in range(1, t.rank + 1):
            a0, residual = hirota_residual(system, k)
            fits.append({"k": k, "a0": str(a0), "residual_zero": residual.is_zero()})
        payload["hirota"] = fits
    _emit_json(payload, args)
    return 0


def cmd_affine(args):
    t = LieType("A", args.rank, affine=True)
    eps = parse_signs(args.sign) if args.sign else all_minus(args.rank + 1)
    if len(eps) != args.rank + 1:
        raise ValidationError(
            f"affine sign vector needs length {args.rank + 1}, got {len(eps)}"
        )
    group = AffineWeylGroup(t)
    series = p_series(t, eps, args.lmax, group=group)
    payload = series.as_dict()
    payload["counts_per_length"] = group.count_per_length(args.lmax)
    if args.guess:
        try:
            guess = rational_guess(series)
        except TodaLabError as exc:
            payload["rational_guess"] = None
            payload["rational_guess_error"] = exc.code
        else:
            payload["rational_guess"] = str(guess) if guess is not None else None
    _emit_json(payload, args)
    return 0


def cmd_ode(args):
    t = LieType.parse(args.type)
    a0 = [float(x) for x in args.a.split(",")]
    b0 = [float(x) for x in args.b.split(",")]
    if len(a0) != t.rank or len(b0) != t.rank:
        raise ValidationError(f"need {t.rank} comma-separated values for --a and --b")
    traj = numtoda.ode_integrate(t, a0, b0, (args.t0, args.t1))
    if args.format == "csv":
        header = (["t"] + [f"a{i+1}" for i in range(t.rank)]
                  + [f"b{i+1}" for i in range(t.rank)])
        taus = traj.tau
        if taus is not None:
            header += [f"tau{j}" for j in range(1, t.rank + 1)]
        rows = []
        for i, tt in enumerate(traj.t):
            row = [f"{tt:.12g}"] + [f"{x:.12g}" for x in traj.a[i]] \
                + [f"{x:.12g}" for x in traj.b[i]]
            if taus is not None:
                row += [f"{x:.12g}" for x in taus[i]]
            rows.append(row)
        _emit_csv(rows, header, args)
        return 0
    # between-events convention: drift is measured away from any divergence
    drift = traj.invariant_drift(a_bound=100.0) if traj.events \
        else traj.invariant_drift()
    payload = {
        "type": str(t),
        "status": traj.status,
        "samples": len(traj.t),
        "t_final": float(traj.t[-1]),
        "invariant_drift": drift,
        "events": [
            {"tau_index": e.tau_index, "time": e.time, "bracket": list(e.bracket)}
            for e in traj.events
        ],
    }
    _emit_json(payload, args)
    return 0


def cmd_chevalley(args):
    t = LieType.parse(args.type)
    info = compact_dual_info(t)
    payload = {
        "type": str(t),
        "dual_compact": info.name,
        "dim": info.dim,
        "rank": info.g,
        "degrees": list(info.degrees),
        "r": info.r,
        "p": str(closed_form_p(t)),
    }
    if args.q is not None:
        payload["q"] = args.q
        payload["order"] = chevalley_order(t, args.q)
        if args.brute:
            n = {"A1": 2, "A2": 3}.get(str(t))
            if n is None:
                raise ValidationError("--brute supports only A1 (SO2) and A2 (SO3)")
            payload["brute_force_order"] = brute_force_so_order(n, args.q)
            payload["matches"] = payload["brute_force_order"] == payload["order"]
    _emit_json(payload, args)
    return 0


def cmd_verify(args):
    results = verify_mod.run(args.scope, include_e7=args.include_e7)
    n_fail = sum(1 for r in results if not r.passed)
    if args.out:
        payload = {
            "scope": args.scope,
            "passed": len(results) - n_fail,
            "failed": n_fail,
            "results": [
                {"criterion": r.number, "title": r.title, "passed": r.passed,
                 "detail": r.detail, "seconds": round(r.seconds, 3)}
                for r in results
            ],
        }
        _emit_json(payload, args)
    else:
        for res in results:
            sys.stdout.write(res.line() + "\n")
    return 0  # criterion failures are data, not command errors


def cmd_cache(args):
    d = resolve_cache_dir(args.cache_dir)
    if args.action == "list":
        entries = cache_entries(args.cache_dir)
        _emit_json({"cache_dir": str(d) if d else None, "entries": entries}, args)
        return 0
    removed = cache_clear(args.cache_dir)
    _emit_json({"cache_dir": str(d) if d else None, "removed": removed}, args)
    return 0


def cmd_conventions(args):
    _emit_json(conventions_table(), args)
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="todalab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"todalab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json", "text"), typed=True):
        if typed:
            p.add_argument("--type", required=True, help="Lie type, e.g. B3")
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--out", help="write output to this file instead of stdout")
        p.add_argument("--cache-dir", help="Weyl group cache directory "
                                           "(default: $TODA_CACHE_DIR)")
        p.add_argument("--cap", type=int, help="group-size cap override")
        p.add_argument("--threads", type=int, default=0,
                       help="max worker threads (reserved; computation is "
                            "deterministic regardless)")

    p = sub.add_parser("pq", help="blow-up polynomial p_eps(q)")
    common(p)
    p.add_argument("--sign", help="sign vector like '--+' (default all minus)")
    p.set_defaults(fn=cmd_pq)

    p = sub.add_parser("eta", help="eta table for one sign vector")
    common(p, fmt=("json", "csv", "text"))
    p.add_argument("--sign")
    p.set_defaults(fn=cmd_eta)

    p = sub.add_parser("graph", help="blow-up graph, components, matching report")
    common(p, fmt=("json", "dot"))
    p.add_argument("--sign")
    p.set_defaults(fn=cmd_graph)

    p = sub.add_parser("schur", help="tau functions, degrees, Hirota fit, experiments")
    common(p)
    p.add_argument("--experiment", choices=["real-roots"])
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hirota", action="store_true", help="include Hirota constants")
    p.set_defaults(fn=cmd_schur)

    p = sub.add_parser("affine", help="affine A(1) series and reconstruction")
    common(p, typed=False)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--sign", help="l+1 signs (default all minus)")
    p.add_argument("--lmax", type=int, default=12)
    p.add_argument("--guess", action="store_true", help="attempt rational reconstruction")
    p.set_defaults(fn=cmd_affine)

    p = sub.add_parser("ode", help="integrate the flow; CSV trajectory dumps")
    common(p, fmt=("json", "csv"))
    p.add_argument("--a", required=True, help="comma-separated a_i(0)")
    p.add_argument("--b", required=True, help="comma-separated b_i(0)")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=10.0)
    p.set_defaults(fn=cmd_ode)

    p = sub.add_parser("chevalley", help="compact-dual data and point counts")
    common(p)
    p.add_argument("--q", type=int, help="odd prime power")
    p.add_argument("--brute", action="store_true",
                   help="cross-check against brute-force enumeration (A1/A2)")
    p.set_defaults(fn=cmd_chevalley)

    p = sub.add_parser("verify", help="run the self-verification matrix")
    p.add_argument("--scope", choices=["fast", "full"], default="fast")
    p.add_argument("--include-e7", action="store_true",
                   help="opt in to the full E7 enumeration (~30 s, ~2 GB)")
    p.add_argument("--out", help="write a JSON report here instead of the table")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("cache", help="cache admin")
    p.add_argument("action", choices=["list", "clear"])
    p.add_argument("--cache-dir")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_cache)

    p = sub.add_parser("conventions", help="dump the node-numbering conventions table")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_conventions)

    return parser


_NUMERIC_LIST = set("0123456789.,+-eE")


def _glue_sign_values(argv):
    """Join option values that argparse would mistake for flags.

    ``--sign ---`` and ``--a -1,-1`` are natural spellings; rewrite them to
    the ``=`` form (with a leading space for the pathological bare ``--``,
    which parse_signs strips)."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok == "--sign" and nxt and set(nxt) <= set("+-"):
            out.append(f"--sign= {nxt}")
            i += 2
        elif tok in ("--a", "--b") and nxt and nxt.startswith("-") \
                and set(nxt) <= _NUMERIC_LIST:
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_sign_values(list(argv)))
        return args.fn(args)
    except ValidationError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return 1
    except TodaLabError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return 2
    except BrokenPipeError:
        return 0  # downstream pager closed early


if __name__ == "__main__":
    sys.exit(main())
