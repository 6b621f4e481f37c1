"""Command-line interface: ``bandgap {spectrum,gaps,design,cf,upsilon,plotdata}``.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 2 bad
input, 3 unsupported exact mode, 4 failed design verification, 5 any other
domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import contfrac, designer, diophantine, spectrum
from .errors import BandgapError, ParseError, Unsupported, VerificationFailed
from .exactreal import format_exact, parse_exact, to_float

EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_VERIFY = 4
EXIT_DOMAIN = 5


def _threads(args) -> int:
    env = os.environ.get("BANDGAP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParseError(f"BANDGAP_THREADS={env!r} is not an integer") from None
    if args.threads:
        return args.threads
    return os.cpu_count() or 1


def _lattice(args) -> spectrum.Lattice:
    return spectrum.Lattice.parse(args.lengths, args.alpha)


def _g(x) -> str:
    return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.12g}"


def _emit_json(obj, out):
    out.write(spectrum.dumps(obj) + "\n")


def cmd_spectrum(args, out):
    lat = _lattice(args)
    rows = []
    for E in args.energy:
        k = math.sqrt(E) if E > 0 else float("nan")
        inside = spectrum.is_in_spectrum(lat, E)
        try:
            f, g = spectrum.F(lat, k), spectrum.G(lat, k)
        except spectrum.AtDiscontinuity:
            f = g = float("nan")
        rows.append({"E": E, "k": k, "F": f, "G": g, "in_spectrum": inside})
    if args.format == "json":
        _emit_json([{key: spectrum.fmt_float(v) if isinstance(v, float) else v for key, v in r.items()} for r in rows], out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["E", "k", "F", "G", "in_spectrum"])
        for r in rows:
            w.writerow([_g(r["E"]), _g(r["k"]), _g(r["F"]), _g(r["G"]), int(r["in_spectrum"])])
    else:
        for r in rows:
            state = "band" if r["in_spectrum"] else "gap"
            out.write(f"E={_g(r['E'])}  k={_g(r['k'])}  F={_g(r['F'])}  G={_g(r['G'])}  {state}\n")
    return 0


def _write_report(report: spectrum.GapReport, fmt: str, out):
    if fmt == "json":
        out.write(report.to_json() + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["ell", "m", "lower_E", "upper_E"])
        for g in report.gaps:
            w.writerow([g.ell, g.m, _g(g.lower_E), _g(g.upper_E)])
    else:
        lat = report.lattice
        out.write(f"lengths: {', '.join(lat.length_strings())}  alpha: {_g(lat.alpha)}  k_max: {_g(report.k_max)}\n")
        out.write(f"finiteness: {report.finiteness.value}  certified: {report.certified}\n")
        if report.spectral_bottom_E is not None:
            out.write(f"spectral bottom E: {_g(report.spectral_bottom_E)}\n")
        out.write(f"{len(report.gaps)} gap(s)\n")
        for g in report.gaps:
            out.write(f"  ({_g(g.lower_E)}, {_g(g.upper_E)})  anchor ell={g.ell} m={g.m}\n")


def cmd_gaps(args, out):
    if not args.kmax > 0:
        raise ParseError("--kmax must be positive")
    report = spectrum.scan_gaps(_lattice(args), args.kmax, threads=_threads(args))
    _write_report(report, args.format, out)
    return 0


def cmd_design(args, out):
    if args.spec:
        with open(args.spec, encoding="utf-8") as fp:
            spec = designer.DesignSpec.from_dict(json.load(fp))
    else:
        if not args.twos:
            raise ParseError("design needs --twos or --spec")
        try:
            twos = tuple(int(t) for t in args.twos.split(","))
        except ValueError:
            raise ParseError(f"bad --twos {args.twos!r}") from None
        spec = designer.DesignSpec(twos, args.d, parse_exact(args.a), args.alpha)
    result = designer.predict_gaps(spec)
    top = max(q for _, q in result.predicted_anchors) * math.pi / float(spec.base_length)
    verification = designer.verify_design(result, args.kmax_factor * top, threads=_threads(args))
    if args.format == "json":
        _emit_json(verification.to_dict(), out)
    else:
        out.write(f"gamma = {format_exact(result.gamma)} = {result.gamma_cf}\n")
        lo, hi = result.alpha_window
        out.write(f"alpha window [{_g(lo)}, {_g(hi)}], chosen alpha {_g(result.chosen_alpha)}\n")
        _write_report(verification.report, "human", out)
    return 0


def cmd_cf(args, out):
    text = args.value.strip()
    if text.startswith("["):
        cf = contfrac.parse_cf(text)
        x = contfrac.value(cf)
    else:
        x = parse_exact(text)
        if isinstance(x, float):
            raise ParseError(f"{text!r} is not an exact value")
        cf = contfrac.expand(x, args.max_terms)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        convs = contfrac.convergents(cf, args.terms - 1)
    if args.format == "json":
        _emit_json(
            {
                "cf": str(cf),
                "value": format_exact(x),
                "float": spectrum.fmt_float(to_float(x)),
                "convergents": [[c.index, c.p, c.q] for c in convs],
            },
            out,
        )
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "p", "q"])
        for c in convs:
            w.writerow([c.index, c.p, c.q])
    else:
        out.write(f"{cf}\n")
        out.write(f"value {format_exact(x)} ~ {_g(to_float(x))}\n")
        out.write(f"{'n':>4} {'p_n':>12} {'q_n':>12}\n")
        for c in convs:
            out.write(f"{c.index:>4} {c.p:>12} {c.q:>12}\n")
    return 0


def cmd_upsilon(args, out):
    x = parse_exact(args.value)
    if isinstance(x, float):
        raise Unsupported(f"{args.value!r} is not an exact quadratic surd")
    est = diophantine.upsilon_upper(x, args.horizon)
    inv = diophantine.upsilon_upper(1 / x, args.horizon)
    data = {
        "value": format_exact(x),
        "horizon": est.horizon,
        "upper": spectrum.fmt_float(est.upper),
        "argmin": est.argmin,
        "certified_lower": str(est.certified_lower) if est.certified_lower is not None else None,
        "inverse_upper": spectrum.fmt_float(inv.upper),
        "inverse_certified_lower": str(inv.certified_lower) if inv.certified_lower is not None else None,
        "markov_upper": spectrum.fmt_float(min(est.upper, inv.upper)),
    }
    if args.format == "json":
        _emit_json(data, out)
    else:
        for key in sorted(data):
            out.write(f"{key}: {data[key]}\n")
    return 0


def cmd_plotdata(args, out):
    try:
        lo, hi = (float(t) for t in args.krange.split(":"))
    except ValueError:
        raise ParseError(f"--krange must look like LO:HI, got {args.krange!r}") from None
    rows = spectrum.band_rows(_lattice(args), lo, hi, args.samples)
    spectrum.write_band_csv(rows, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandgap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def lattice_args(p):
        p.add_argument("--lengths", required=True, help='comma separated, e.g. "(15-1*sqrt(5))/22,1,1"')
        p.add_argument("--alpha", type=float, required=True)

    def fmt_arg(p, default="human"):
        p.add_argument("--format", choices=["json", "csv", "human"], default=default)

    p = sub.add_parser("spectrum", help="test energies for spectral membership")
    lattice_args(p)
    p.add_argument("--energy", type=float, nargs="+", required=True)
    fmt_arg(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("gaps", help="scan gaps up to k_max")
    lattice_args(p)
    p.add_argument("--kmax", type=float, required=True)
    p.add_argument("--threads", type=int)
    fmt_arg(p, "json")
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("design", help="build and verify a lattice with prescribed gaps")
    p.add_argument("--twos", help="positions n of the 2's, e.g. 1,2")
    p.add_argument("--spec", help="DesignSpec JSON file")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--a", default="1")
    p.add_argument("--alpha", type=float)
    p.add_argument("--kmax-factor", type=float, default=1.5)
    p.add_argument("--threads", type=int)
    fmt_arg(p, "json")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("cf", help="continued fraction and convergents")
    p.add_argument("value")
    p.add_argument("--terms", type=int, default=10)
    p.add_argument("--max-terms", type=int, default=contfrac.DEFAULT_MAX_TERMS)
    fmt_arg(p)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("upsilon", help="one-sided approximation constants")
    p.add_argument("value")
    p.add_argument("--horizon", type=int, default=diophantine.DEFAULT_HORIZON)
    fmt_arg(p)
    p.set_defaults(func=cmd_upsilon)

    p = sub.add_parser("plotdata", help="CSV of k, F, G, in_spectrum")
    lattice_args(p)
    p.add_argument("--krange", required=True, help="LO:HI")
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Unsupported as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (BandgapError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
