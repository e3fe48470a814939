"""Command line interface: ``fieldrat <subcommand> ...``.

Every run prints a versioned JSON (or CSV) payload and writes a run manifest
recording the arguments and a SHA-256 digest of the output, so that
``fieldrat replay m.json`` can confirm a byte-identical rerun.

Exit codes: 0 success, 2 invalid parameters, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from fractions import Fraction

from . import SCHEMA_VERSION, __version__
from .conductor import (
    LocalFieldParams,
    big_str,
    cyclotomic_ratio,
    depth_bound_v1,
    depth_bound_v2,
    frac_str,
    lcm_phi_le,
    sylow_order_bound,
)
from .genus import AngleSet, dejong_genus_bound, ehr_bound, fermat_data, madan_madden_min_exponent, max_genus_lp
from .plancherel import DensitySpec, serre_decay_experiment, trace_points
from .polynomial import IntPolynomial
from .vaaler import TorusInterval, samples_csv_rows, vaaler_pair
from .weil import WeilParams, count_weil_integers, enumerate_weil_polynomials, enumeration_payload, hecke_trace_candidates, is_weil_polynomial

log = logging.getLogger("fieldrat")

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 2, 3


class Output:
    """A JSON payload plus an optional table for CSV output."""

    def __init__(self, payload: dict, header=None, rows=None):
        self.payload = payload
        self.command = None
        self.header = header
        self.rows = rows

    def render(self, fmt: str) -> str:
        if fmt == "json":
            doc = {"schema_version": SCHEMA_VERSION, "command": self.command, "result": self.payload}
            return json.dumps(doc, indent=2, sort_keys=True) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.rows is not None:
            w.writerow(["schema_version"] + list(self.header))
            w.writerows([SCHEMA_VERSION] + list(r) for r in self.rows)
        else:
            w.writerow(["schema_version", "key", "value"])
            for k, v in self.payload.items():
                w.writerow([SCHEMA_VERSION, k, v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)])
        return buf.getvalue()


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def _int_list(text: str) -> list[int]:
    return [int(float(t)) if "e" in t.lower() else int(t) for t in text.split(",") if t.strip()]


# -- handlers -----------------------------------------------------------------


def cmd_weil_enum(args) -> Output:
    params = WeilParams(args.q, args.weight)
    polys = enumerate_weil_polynomials(params, args.degree, args.irreducible, workers=args.workers)
    payload = enumeration_payload(params, args.degree, polys)
    payload["irreducible_only"] = args.irreducible
    payload["count"] = len(polys)
    rows = [[str(p), json.dumps(p.to_json())] for p in polys]
    return Output(payload, ["polynomial", "coefficients_low_first"], rows)


def cmd_weil_check(args) -> Output:
    params = WeilParams(args.q, args.weight)
    poly = IntPolynomial(_int_list(args.coeffs))
    verdict = is_weil_polynomial(poly, params)
    payload = {"polynomial": poly.to_json(), "q": args.q, "w": args.weight, "weil": bool(verdict)}
    if verdict:
        payload.update(
            mult_plus=verdict.mult_plus,
            mult_minus=verdict.mult_minus,
            real_weil_part=verdict.real_weil_part.to_json(),
            sturm_count=verdict.sturm_count,
            epsilon=verdict.epsilon,
        )
    else:
        payload.update(stage=verdict.stage, reason=verdict.reason)
    return Output(payload)


def cmd_weil_count(args) -> Output:
    c = count_weil_integers(args.q, args.weight, args.dmax)
    rows = [[d, c.by_degree[d], c.cumulative[d]] for d in sorted(c.by_degree)]
    payload = {"q": args.q, "w": args.weight, "by_degree": {str(d): n for d, n in c.by_degree.items()},
               "cumulative": {str(d): n for d, n in c.cumulative.items()}}
    return Output(payload, ["degree", "count", "cumulative"], rows)


def cmd_hecke(args) -> Output:
    polys = hecke_trace_candidates(args.p, args.k, args.A)
    payload = {"p": args.p, "k": args.k, "A": args.A, "count": len(polys), "polynomials": [p.to_json() for p in polys]}
    return Output(payload, ["polynomial"], [[str(p)] for p in polys])


def cmd_bounds(args) -> Output:
    if args.kind == "depth":
        field = LocalFieldParams(args.p, args.eK, args.fK)
        fn = depth_bound_v1 if args.method == "v1" else depth_bound_v2
        return Output(fn(args.n, args.A, field).to_json())
    if args.kind == "cyclotomic":
        r = cyclotomic_ratio(args.n, args.N)
        payload = r.to_json()
        payload["verdict"] = "<= n^n" if r.within_bound else "> n^n"
        return Output(payload)
    if args.kind == "lcm-phi":
        return Output({"B": args.B, "lcm": big_str(lcm_phi_le(args.B))})
    if args.kind == "sylow":
        return Output({"n": args.n, "p": args.p, "A": args.A, "sylow_order_bound": big_str(sylow_order_bound(args.n, args.p, args.A))})
    raise ValueError(f"unknown bound {args.kind}")


def cmd_vaaler(args) -> Output:
    parts = args.interval.split(",")
    if len(parts) != 2:
        raise ValueError("--interval takes a,b")
    a, b = (_fraction(p) for p in parts)
    I = TorusInterval.from_endpoints(a, b)
    lo, hi = vaaler_pair(I, args.kappa)
    gap = hi.exact_mean - lo.exact_mean
    payload = {
        "interval": [frac_str(I.a), frac_str(I.b)],
        "length": frac_str(I.length),
        "kappa": args.kappa,
        "minorant_mean": frac_str(lo.exact_mean),
        "majorant_mean": frac_str(hi.exact_mean),
        "mean_gap": frac_str(gap),
        "mean_gap_float": float(gap),
        "minorant": lo.to_json(),
        "majorant": hi.to_json(),
    }
    if args.emit_csv:
        with open(args.emit_csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "minorant", "indicator", "majorant"])
            w.writerows([[repr(float(v)) for v in row] for row in samples_csv_rows(I, args.kappa, args.samples)])
        payload["csv"] = args.emit_csv
    return Output(payload)


def _density(text: str, rank: int = 1) -> DensitySpec:
    if text == "lebesgue":
        return DensitySpec.lebesgue(rank)
    with open(text, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        return DensitySpec.from_json(data)
    # a bare list of [knot, value] tables, one per coordinate
    return DensitySpec.from_tables(data)


def cmd_simulate(args) -> Output:
    density = _density(args.density)
    sizes = _int_list(args.sizes)
    rows = serre_decay_experiment(args.q, args.k, args.A, sizes, args.seed, density)
    Z = trace_points(args.q, args.k, args.A)
    cols = ["size", "kappa", "exact", "lower", "upper", "ceiling"]
    payload = {
        "q": args.q,
        "k": args.k,
        "A": args.A,
        "seed": args.seed,
        "density": density.to_json(),
        "admissible_points": Z,
        "empty_admissible_set": not Z,
        "rows": rows,
    }
    return Output(payload, cols, [[r[c] for c in cols] for r in rows])


def cmd_genus(args) -> Output:
    if args.kind == "lp":
        S = AngleSet.parse(args.angles)
        return Output(max_genus_lp(args.q, S, args.nmax, args.mode).to_json())
    if args.kind == "ehr":
        return Output({"q": args.q, "s": args.s, "bound": ehr_bound(args.q, args.s), "log": "natural"})
    if args.kind == "fermat":
        rec = fermat_data(args.p, args.r)
        return Output({
            "p": rec.p,
            "r": rec.r,
            "genus": rec.genus,
            "angles": rec.angles.to_json(),
            "point_count": str(rec.point_count),
            "expected_count": str(rec.expected_count),
            "maximal": rec.maximal,
        })
    if args.kind == "dejong":
        return Output(dejong_genus_bound(args.q, args.d, args.c).to_json())
    if args.kind == "madan":
        return Output({"g": args.g, "c": args.c, "min_exponent": madan_madden_min_exponent(args.g, args.c),
                       "caveat": "implicit constant c is a free parameter"})
    raise ValueError(f"unknown genus command {args.kind}")


def cmd_reproduce(args) -> Output:
    """Headline numbers of every module in one payload."""
    e = enumerate_weil_polynomials(WeilParams(2, 1), 2)
    lp1 = max_genus_lp(3, AngleSet.parse("pi/2"), 4)
    lp2 = max_genus_lp(2, AngleSet.parse("pi"), 4)
    dj = dejong_genus_bound(2, 1)
    lo, hi = vaaler_pair(TorusInterval(Fraction(0), Fraction(1, 2)), 10)
    rows = serre_decay_experiment(2, 2, 1, [100, 1000, 10000, 100000], args.seed)
    payload = {
        "weil_q2_w1_m2": [str(p) for p in e],
        "count_q2_w1_d6": count_weil_integers(2, 1, 6).cumulative[6],
        "depth_v1_n1_A1_p5": frac_str(depth_bound_v1(1, 1, LocalFieldParams(5)).depth),
        "lcm_phi_2": lcm_phi_le(2),
        "vaaler_gap_kappa10": frac_str(hi.exact_mean - lo.exact_mean),
        "lp_q3_half_pi_N4": frac_str(lp1.optimum),
        "lp_q2_pi_N4": frac_str(lp2.optimum),
        "fermat": {p: fermat_data(p).maximal for p in (2, 3, 5)},
        "dejong_q2_d1": dj.to_json(),
        "serre_decay": rows,
    }
    return Output(payload)


# -- parser -------------------------------------------------------------------


def _kappa(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("kappa must be >= 1")
    return k


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fieldrat", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--format", choices=("json", "csv"), default=None, help="output format (default json; csv for simulate)")
    ap.add_argument("--out", help="write output here instead of stdout")
    ap.add_argument("--manifest", help="run manifest path (default <out>.manifest.json, else stderr)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weil-enum", help="enumerate Weil polynomials")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--weight", type=int, default=1)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--irreducible", action="store_true")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $FIELDRAT_THREADS or 1)")
    p.set_defaults(func=cmd_weil_enum)

    p = sub.add_parser("weil-check", help="certify a single polynomial")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--weight", type=int, default=1)
    p.add_argument("--coeffs", required=True, help="integer coefficients, lowest degree first, comma separated")
    p.set_defaults(func=cmd_weil_check)

    p = sub.add_parser("weil-count", help="count irreducible Weil polynomials per degree")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--weight", type=int, default=1)
    p.add_argument("--dmax", type=int, required=True)
    p.set_defaults(func=cmd_weil_count)

    p = sub.add_parser("hecke", help="candidate minimal polynomials of Hecke eigenvalues")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--A", type=int, default=1)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("bounds", help="depth and conductor bounds")
    bsub = p.add_subparsers(dest="kind", required=True)
    b = bsub.add_parser("depth")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--A", type=int, required=True)
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--eK", type=int, default=1)
    b.add_argument("--fK", type=int, default=1)
    b.add_argument("--method", choices=("v1", "v2"), default="v1")
    b = bsub.add_parser("cyclotomic")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--N", type=int, required=True)
    b = bsub.add_parser("lcm-phi")
    b.add_argument("--B", type=int, required=True)
    b = bsub.add_parser("sylow")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--A", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("vaaler", help="interval majorant and minorant")
    p.add_argument("--interval", required=True, help="a,b with 0 <= a,b <= 1 (a > b wraps)")
    p.add_argument("--kappa", type=_kappa, required=True)
    p.add_argument("--emit-csv", help="write (x, minorant, indicator, majorant) samples here")
    p.add_argument("--samples", type=int, default=512)
    p.set_defaults(func=cmd_vaaler)

    p = sub.add_parser("simulate", help="decay of the admissible-set fraction with family size")
    p.add_argument("--density", default="lebesgue", help="'lebesgue' or a JSON file of piecewise-linear tables")
    p.add_argument("--sizes", default="100,1000,10000,100000")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--A", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate, default_format="csv")

    p = sub.add_parser("genus", help="genus bounds")
    gsub = p.add_subparsers(dest="kind", required=True)
    g = gsub.add_parser("lp")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--angles", required=True, help='e.g. "0.5pi,1pi"')
    g.add_argument("--nmax", type=int, default=None)
    g.add_argument("--mode", choices=("auto", "exact", "float"), default="auto")
    g = gsub.add_parser("ehr")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--s", type=int, required=True)
    g = gsub.add_parser("fermat")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--r", type=int, default=1)
    g = gsub.add_parser("dejong")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--c", type=float, default=1.0)
    g = gsub.add_parser("madan")
    g.add_argument("--g", type=float, required=True)
    g.add_argument("--c", type=float, default=1.0)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("reproduce", help="headline numbers from every module")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("replay", help="rerun a manifest and compare output digests")
    p.add_argument("manifest_path")
    p.set_defaults(func=None)
    return ap


_GLOBAL = {"format", "out", "manifest", "verbose", "func", "default_format", "command"}


def _manifest(args, argv, text: str) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _GLOBAL}
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "fieldrat",
        "version": __version__,
        "subcommand": args.command,
        "parameters": params,
        "seed": params.get("seed"),
        "format": args.format,
        "argv": list(argv),
        "output_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
    }


def _run(args) -> str:
    args.format = args.format or getattr(args, "default_format", "json")
    out = args.func(args)
    out.command = args.command
    return out.render(args.format)


def _replay(path: str) -> int:
    with open(path, encoding="utf-8") as fh:
        m = json.load(fh)
    argv = [a for a in m["argv"]]
    # drop output redirection so the rerun only computes the digest
    cleaned, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--out", "--manifest"):
            skip = True
            continue
        if a.startswith(("--out=", "--manifest=")):
            continue
        cleaned.append(a)
    args = build_parser().parse_args(cleaned)
    text = _run(args)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    same = digest == m["output_sha256"]
    print(json.dumps({"manifest": path, "expected": m["output_sha256"], "actual": digest, "identical": same}, indent=2))
    return EXIT_OK if same else EXIT_INTERNAL


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    sys.set_int_max_str_digits(0)
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "replay":
            return _replay(args.manifest_path)
        text = _run(args)
    except (ValueError, TypeError, OSError) as exc:
        print(f"fieldrat: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (AssertionError, ArithmeticError, RuntimeError) as exc:
        print(f"fieldrat: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    manifest = json.dumps(_manifest(args, argv, text), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    mpath = args.manifest or (args.out + ".manifest.json" if args.out else None)
    if mpath:
        with open(mpath, "w", encoding="utf-8") as fh:
            fh.write(manifest)
    else:
        sys.stderr.write(manifest)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
