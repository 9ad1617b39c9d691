"""Command-line harness: verifications, exact tables, convergence experiments.

Subcommands
    identities   exact closed-form identity checks up to an order bound
    constants    exact A(h), B_alpha with tail bounds, frequency constants
    tables       star-intersection area tables as CSV of exact rationals
    converge     StatRecord experiments (S_h / moment / LU / partial) as CSV
    orbit        kappa-sequence dump for a transfer-map orbit
    visible      coprime lattice-point counts against the 6/pi^2 density

Standard output carries data only; progress notes go to standard error.  A
run manifest (command, parameters, artifact version, wall-clock duration,
worker count) is written next to --out files, embedded in JSON output, or
sent to standard error otherwise.  Numeric payloads are deterministic: the
same manifest reproduces byte-identical data for any worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from . import __version__, bcz, stats
from .geometry import ConvexPolygon, Point2, polygon_area
from .stats import StatRecord


def _rat(value: Fraction) -> str:
    return str(value)


def _real(value: float) -> str:
    if isinstance(value, Fraction):
        value = float(value)
    return format(value, ".15g")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _parse_fraction_list(text: str) -> list[Fraction]:
    return [_parse_fraction(part) for part in text.split(",") if part]


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("FAREY_INDEX_WORKERS", "1")))
    except ValueError:
        return 1


@dataclass
class RunManifest:
    command: str
    parameters: dict
    artifact_version: str
    duration_seconds: float
    workers: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


class _Output:
    """Routes the data payload and its manifest per the output options."""

    def __init__(self, args, command: str, parameters: dict, workers: int = 1):
        self.out_path: Optional[str] = getattr(args, "out", None)
        self.command = command
        self.parameters = parameters
        self.workers = workers
        self.started = time.monotonic()
        self.buffer = io.StringIO()

    def write(self, text: str) -> None:
        self.buffer.write(text)

    def manifest(self) -> RunManifest:
        return RunManifest(
            command=self.command,
            parameters=self.parameters,
            artifact_version=__version__,
            duration_seconds=round(time.monotonic() - self.started, 6),
            workers=self.workers,
        )

    def finish(self) -> None:
        payload = self.buffer.getvalue()
        manifest = self.manifest()
        if self.out_path:
            with open(self.out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(payload)
            with open(self.out_path + ".manifest.json", "w", encoding="utf-8") as fh:
                fh.write(manifest.to_json() + "\n")
        else:
            sys.stdout.write(payload)
            sys.stdout.flush()
            print(f"manifest: {manifest.to_json()}", file=sys.stderr)


def _progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_identities(args) -> int:
    if args.q < 1:
        _progress("identities: --q must be >= 1")
        return 2
    out = _Output(args, "identities", {"q_max": args.q})
    failures = []
    for q in range(1, args.q + 1):
        total = stats.sum_index(q)
        expected = 3 * stats.totient_summatory(q) - 1
        if total != expected:
            failures.append(f"Q={q}: index sum {total} != {expected}")
        lhs, rhs = stats.hall_shiu_identity(q)
        if lhs != rhs:
            failures.append(f"Q={q}: count identity {lhs} != {rhs}")
    if args.q >= 1:
        lhs1, rhs1 = stats.hall_shiu_identity(1)
        out.write(f"# Q=1 boundary: count identity gives {lhs1} == {rhs1} (holds)\n")
    for line in failures:
        out.write(line + "\n")
    verdict = "PASS" if not failures else "FAIL"
    out.write(f"identities: {verdict} ({args.q - len(failures)}/{args.q})\n")
    out.finish()
    return 0 if not failures else 1


def cmd_constants(args) -> int:
    h_list = args.h or [1]
    alpha_list = args.alpha or []
    k_max = args.k or 1
    out = _Output(
        args,
        "constants",
        {"h": h_list, "alpha": [str(a) for a in alpha_list], "k_max": k_max, "tol": args.tol},
    )
    data: dict = {"A": {}, "B": {}, "frequencies": []}
    exit_code = 0
    try:
        for h in h_list:
            _progress(f"computing A({h}) ...")
            data["A"][str(h)] = _rat(bcz.autocorrelation_constant(h))
        for alpha in alpha_list:
            result = bcz.b_alpha(alpha, tol=args.tol)
            data["B"][str(alpha)] = {
                "value": _rat(result.value) if result.exact else _real(result.value),
                "tail_bound": _real(result.tail_bound),
                "terms": result.terms,
                "exact": result.exact,
            }
        closed_l = lambda k: 4 * (Fraction(1, (k + 1) ** 2) - Fraction(1, k + 1) + Fraction(1, k + 2))
        closed_u = lambda k: Fraction(0) if k == 1 else 4 * (
            Fraction(1, k) - Fraction(1, k + 1) - Fraction(1, (k + 1) ** 2)
        )
        for k in range(1, k_max + 1):
            l_k = bcz.lower_frequency(k)
            u_k = bcz.upper_frequency(k)
            if l_k != closed_l(k) or u_k != closed_u(k):
                _progress(f"frequency mismatch against closed form at k={k}")
                exit_code = 1
            data["frequencies"].append({"k": k, "l": _rat(l_k), "u": _rat(u_k)})
    except bcz.TailCertificateError as exc:
        _progress(f"tail certificate failure: {exc}")
        return 1

    if args.format == "json":
        document = dict(data)
        document["manifest"] = asdict(out.manifest())
        out.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
    else:
        for h in h_list:
            out.write(f"A({h}) = {data['A'][str(h)]}\n")
        for alpha in alpha_list:
            entry = data["B"][str(alpha)]
            suffix = " (exact)" if entry["exact"] else f" +/- {entry['tail_bound']}"
            out.write(f"B({alpha}) = {entry['value']}{suffix}\n")
        for row in data["frequencies"]:
            out.write(f"l({row['k']}) = {row['l']}\tu({row['k']}) = {row['u']}\n")
    out.finish()
    return exit_code


def cmd_tables(args) -> int:
    if args.h < 1 or args.M < 2:
        _progress("tables: need --h >= 1 and --M >= 2")
        return 2
    out = _Output(args, "tables", {"h": args.h, "M": args.M})
    _progress(f"computing {args.M}x{args.M} star-intersection table for h={args.h} ...")
    table = bcz.intersection_area_table(args.h, args.M)
    symmetric = all(
        table[m][n] == table[n][m] for m in range(args.M) for n in range(m + 1, args.M)
    )
    if args.format == "json":
        document = {
            "h": args.h,
            "entries": [[_rat(v) for v in row] for row in table],
            "manifest": asdict(out.manifest()),
        }
        out.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["m/n"] + [str(n) for n in range(1, args.M + 1)])
        for m in range(args.M):
            writer.writerow([str(m + 1)] + [_rat(v) for v in table[m]])
    out.finish()
    if not symmetric:
        _progress("tables: symmetry violation in computed table")
        return 1
    return 0


def cmd_converge(args) -> int:
    q_list = args.q_list or ([args.q] if args.q else [])
    if not q_list or sorted(q_list) != q_list:
        _progress("converge: need an ascending --q-list")
        return 2
    workers = args.workers
    out = _Output(
        args,
        "converge",
        {
            "stat": args.stat,
            "q_list": q_list,
            "h": args.h,
            "alpha": [str(a) for a in (args.alpha or [])],
            "k": args.k,
            "t": [str(t) for t in (args.t or [])],
        },
        workers=workers,
    )
    records: list[StatRecord] = []
    for q in q_list:
        _progress(f"converge {args.stat}: Q={q}")
        if args.stat == "S_h":
            for h in args.h or [1]:
                if args.t:
                    for t in args.t:
                        records.append(stats.autocorr_record(q, h, t, workers=workers))
                else:
                    records.append(stats.autocorr_record(q, h, workers=workers))
        elif args.stat == "moment":
            for alpha in args.alpha or [Fraction(1)]:
                if alpha == 2:
                    records.append(stats.second_moment_record(q, workers=workers))
                else:
                    records.append(stats.moment_record(q, alpha, workers=workers))
        elif args.stat == "LU":
            for k in args.k or [1]:
                for t in args.t or [Fraction(1)]:
                    rec_l, rec_u = stats.lu_records(q, k, t, workers=workers)
                    records.append(rec_l)
                    records.append(rec_u)
        elif args.stat == "partial":
            for t in args.t or [Fraction(1)]:
                records.append(stats.partial_record(q, t, workers=workers))
        else:
            _progress(f"converge: unknown stat {args.stat}")
            return 2

    rows = []
    for rec in records:
        prediction = (
            _rat(rec.prediction)
            if isinstance(rec.prediction, Fraction)
            else _real(rec.prediction)
        )
        abs_dev = abs(rec.ratio - 1) if not math.isnan(rec.ratio) else math.nan
        exact = (
            str(rec.exact_value)
            if isinstance(rec.exact_value, (int, Fraction))
            else _real(rec.exact_value)
        )
        rows.append(
            [
                rec.order,
                rec.stat,
                rec.parameter,
                exact,
                prediction,
                _real(rec.ratio),
                _real(abs_dev),
                rec.error_bound_form,
            ]
        )
    header = ["Q", "stat", "param", "exact", "prediction", "ratio", "abs_dev", "error_bound"]
    if args.format == "json":
        document = {
            "rows": [dict(zip(header, row)) for row in rows],
            "manifest": asdict(out.manifest()),
        }
        out.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    out.finish()
    return 0


def cmd_orbit(args) -> int:
    if args.x is not None and args.y is not None:
        start = (args.x, args.y)
    elif args.q:
        start = (Fraction(1, args.q), Fraction(1))
    else:
        _progress("orbit: give --q or both --x and --y")
        return 2
    r = args.r if args.r is not None else (stats.totient_summatory(args.q) if args.q else 10)
    out = _Output(args, "orbit", {"x": str(start[0]), "y": str(start[1]), "r": r})
    state = bcz.orbit(Point2(Fraction(start[0]), Fraction(start[1])), r)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["i", "L_i", "kappa_i"])
    for i, value in enumerate(state.L):
        kappa = str(state.kappas[i - 1]) if 1 <= i <= len(state.kappas) else ""
        writer.writerow([i, _rat(value), kappa])
    out.finish()
    return 0


def cmd_visible(args) -> int:
    if args.square:
        region = ConvexPolygon(((0, 0), (1, 0), (1, 1), (0, 1)))
        label = "unit_square"
    elif args.star:
        region = bcz.region_star_polygon(args.star)
        label = f"star_{args.star}"
    elif args.k:
        region = bcz.region_polygon(args.k)
        label = f"region_{args.k}"
    else:
        region = bcz.FAREY_TRIANGLE
        label = "triangle"
    out = _Output(args, "visible", {"region": label, "scale": args.scale})
    count = stats.visible_points_count(region, args.scale)
    area = polygon_area(region)
    predicted = 6 * float(area) * args.scale**2 / math.pi**2
    ratio = count / predicted if predicted else math.nan
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["region", "scale", "count", "area", "predicted", "ratio"])
    writer.writerow([label, args.scale, count, _rat(area), _real(predicted), _real(ratio)])
    out.finish()
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="farey-index",
        description="Exact Farey index statistics and transfer-map geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write the data payload to this file")
        p.add_argument(
            "--format", choices=("csv", "json"), default="csv", help="payload format"
        )
        p.add_argument(
            "--workers",
            type=int,
            default=_default_workers(),
            help="subinterval chunk count (default $FAREY_INDEX_WORKERS or 1)",
        )

    p = sub.add_parser("identities", help="exact identity checks for all Q <= bound")
    p.add_argument("--q", type=int, required=True, help="largest order to check")
    add_common(p)
    p.set_defaults(fn=cmd_identities)

    p = sub.add_parser("constants", help="exact A(h), B_alpha, frequency constants")
    p.add_argument("--h", type=_parse_int_list, help="comma list of lags")
    p.add_argument("--alpha", type=_parse_fraction_list, help="comma list of exponents")
    p.add_argument("--k", type=int, help="largest frequency index to print")
    p.add_argument("--tol", type=float, default=1e-8, help="B_alpha tail tolerance")
    add_common(p)
    p.set_defaults(fn=cmd_constants)

    p = sub.add_parser("tables", help="star-intersection area table as CSV")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    add_common(p)
    p.set_defaults(fn=cmd_tables)

    p = sub.add_parser("converge", help="exact statistics against predictions")
    p.add_argument("stat", choices=("S_h", "moment", "LU", "partial"))
    p.add_argument("--q", type=int, help="single order (alternative to --q-list)")
    p.add_argument("--q-list", dest="q_list", type=_parse_int_list, help="ascending comma list of orders")
    p.add_argument("--h", type=_parse_int_list, help="comma list of lags (S_h)")
    p.add_argument("--alpha", type=_parse_fraction_list, help="comma list of exponents (moment)")
    p.add_argument("--k", type=_parse_int_list, help="comma list of index values (LU)")
    p.add_argument("--t", type=_parse_fraction_list, help='comma list of rational cutoffs, e.g. "1/3"')
    add_common(p)
    p.set_defaults(fn=cmd_converge)

    p = sub.add_parser("orbit", help="kappa-sequence dump for a map orbit")
    p.add_argument("--q", type=int, help="start at (1/Q, 1), the orbit of F_Q")
    p.add_argument("--x", type=_parse_fraction, help="explicit start x")
    p.add_argument("--y", type=_parse_fraction, help="explicit start y")
    p.add_argument("--r", type=int, help="number of steps (default N(Q))")
    add_common(p)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("visible", help="coprime lattice points in a scaled region")
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--k", type=int, help="count inside region k")
    p.add_argument("--star", type=int, help="count inside star region k")
    p.add_argument("--square", action="store_true", help="count inside the unit square")
    add_common(p)
    p.set_defaults(fn=cmd_visible)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, bcz.TailCertificateError) as exc:
        _progress(f"error: {exc}")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
