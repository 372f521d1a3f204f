"""Command-line entry point: ``monodyn <subcommand> [options]``."""

import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from ._fmt import decimal_str, parse_rational
from .errors import (
    CertificationError,
    DegenerateProbeError,
    DomainError,
    InsufficientDataError,
    NonhyperbolicParameterError,
)
from .models import MODEL1, MODEL2, PARAM_NAMES, STANDARD, build_map

OUT_ENV = "MONODYN_OUT"

_EXPECTED = (DomainError, CertificationError, DegenerateProbeError, NonhyperbolicParameterError,
             InsufficientDataError, ValueError, ZeroDivisionError, KeyError)


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _range(text):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")
    lo, hi = _rational(lo), _rational(hi)
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _add_common(p, params=True):
    p.add_argument("--model", type=int, choices=(1, 2), default=2)
    if params:
        for name in ("e", "f", "a", "b", "c", "d", "K"):
            p.add_argument(f"--{name}", type=_rational, default=None)
        p.add_argument("--float-only", action="store_true",
                       help="pass parameters to the simulator as floats, skipping exact parsing")
    p.add_argument("--out", type=Path, default=None, help="output file (default: $%s/<name>)" % OUT_ENV)
    p.add_argument("--threads", type=int, default=1)


def _params(args, exclude=()):
    """Parameter dict for the chosen model; rejects parameters of the other model."""
    model = MODEL1 if args.model == 1 else MODEL2
    names = PARAM_NAMES[model]
    given = {k: getattr(args, k) for k in ("e", "f", "a", "b", "c", "d", "K") if getattr(args, k) is not None}
    foreign = [k for k in given if k not in names]
    if foreign:
        raise DomainError(f"model {args.model} has no parameter(s) {', '.join(foreign)}")
    out = dict(given)
    if model == MODEL2:
        for k, v in STANDARD.items():
            out.setdefault(k, v)
    missing = [k for k in names if k not in out and k not in exclude]
    if missing:
        raise DomainError(f"missing parameter(s): {', '.join('--' + k for k in missing)}")
    for k in exclude:
        out.pop(k, None)
    if getattr(args, "float_only", False):
        out = {k: float(v) for k, v in out.items()}
    return model, out


def _map(args):
    model, params = _params(args)
    return build_map(model, params)


def _out_path(args, default_name):
    if args.out is not None:
        return args.out
    env = os.environ.get(OUT_ENV)
    if env:
        Path(env).mkdir(parents=True, exist_ok=True)
        return Path(env) / default_name
    return None


def _emit(args, text, default_name):
    print(text)
    path = _out_path(args, default_name)
    if path is not None:
        path.write_text(text + "\n")
        print(f"wrote {path}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_stability(args):
    from .models import model2_condition_polys, stability_system
    from .semialg import count_solutions
    from .sim import equilibria

    model, params = _params(args)
    m = build_map(model, params)
    S = stability_system(model).subs(params)
    lines = [f"map: {m.label()}", f"stable positive equilibria: {count_solutions(S)}"]
    for x, s in equilibria(m):
        if x > 0:
            lines.append(f"equilibrium {x:.12g} {s}")
    if model == MODEL2:
        signs = model2_condition_polys().signs(params)
        lines.append("signs: " + " ".join(f"{k}={'+' if v > 0 else '-' if v < 0 else '0'}" for k, v in signs.items()))
    else:
        s = params["e"] ** 2 * params["f"] ** 3
        lines.append(f"e^2 f^3 = {decimal_str(s, 10)} (stable iff < 8/27 = {decimal_str(Fraction(8, 27), 10)})")
    _emit(args, "\n".join(lines), "stability.txt")
    return 0


def cmd_cycles(args):
    from .orbits import STABLE, enumerate_cycles, format_orbits, magnitude

    m = _map(args)
    orbits = enumerate_cycles(m, args.n)
    n_stable = sum(o.stability == STABLE for o in orbits)
    lines = [f"map: {m.label()}", f"{len(orbits)} orbits of order {args.n}, {n_stable} stable",
             format_orbits(orbits, args.places)]
    if args.n > 1:
        for i, o in enumerate(orbits):
            d = magnitude(m, o, Fraction(1, 10**args.places))
            lines.append(f"orbit {i} magnitude in [{decimal_str(d.lo, args.places)}, {decimal_str(d.hi, args.places)}]")
    _emit(args, "\n".join(l for l in lines if l), f"cycles{args.n}.txt")
    return 0


def cmd_thresholds(args):
    from .orbits import find_thresholds, format_thresholds, model1_family_f, model2_family

    if not args.range:
        raise DomainError("thresholds needs --range lo:hi")
    if args.model == 1:
        if args.e is None:
            raise DomainError("model 1 thresholds run along f and need --e")
        family = model1_family_f(args.e)
    else:
        if any(getattr(args, k) is not None for k in ("a", "b", "c", "d")):
            raise DomainError("model 2 thresholds run along K at the standard (a, b, c, d)")
        family = model2_family
    report = find_thresholds(args.n, args.range[0], args.tol, family=family, threads=args.threads)
    _emit(args, format_thresholds(report, args.places), f"thresholds{args.n}.txt")
    return 0


def cmd_chaos(args):
    from .chaos import UNDETERMINED, certify_period3, certify_snapback

    m = _map(args)
    status = 1
    lines = [f"map: {m.label()}"]
    if m.model == MODEL1:
        cert = certify_snapback(m, args.steps, allow_large=args.steps > 2)
        if cert == UNDETERMINED:
            lines.append("snapback: undetermined (parameter on the region boundary)")
        elif cert is None:
            lines.append("snapback: no witness")
        else:
            lines.append(cert.report(args.places))
            status = 0
    cert = certify_period3(m)
    if cert is None:
        lines.append("period3: no 3-cycle")
    else:
        lines.append(cert.report(args.places))
        status = 0
    _emit(args, "\n".join(lines), "chaos.txt")
    return status


def cmd_bif1d(args):
    from .sim import bifurcation_1d

    if not args.vary or len(args.vary) != 1 or not args.range or len(args.range) != 1:
        raise DomainError("bif1d needs one --vary NAME and one --range lo:hi")
    name = args.vary[0]
    model, params = _params(args, exclude=(name,))
    lo, hi = args.range[0]
    b = bifurcation_1d(model, params, name, lo, hi, args.res, float(args.x0), threads=args.threads)
    path = _out_path(args, f"bif1d_{name}.csv")
    if path is not None:
        path.write_text(b.to_csv())
        print(f"wrote {path}", file=sys.stderr)
    for p in (2, 4, 8):
        on = b.onsets(p)
        print(f"period {p} onsets: {', '.join(f'{v:.6g}' for v in on[:10]) or 'none'}")
    return 0


def cmd_bif2d(args):
    from .sim import bifurcation_2d

    if not args.vary or len(args.vary) != 2 or not args.range or len(args.range) != 2:
        raise DomainError("bif2d needs two --vary NAME and two --range lo:hi (x axis first)")
    model, params = _params(args, exclude=tuple(args.vary))
    (xn, yn), ((xl, xh), (yl, yh)) = args.vary, args.range
    g = bifurcation_2d(model, params, (xn, xl, xh, args.res), (yn, yl, yh, args.res), float(args.x0),
                       threads=args.threads)
    path = _out_path(args, f"bif2d_{xn}_{yn}.ppm")
    if path is not None:
        path.write_bytes(g.to_ppm())
        print(f"wrote {path}", file=sys.stderr)
    import numpy as np

    vals, cnt = np.unique(g.cells, return_counts=True)
    print(" ".join(f"{int(v)}:{int(c)}" for v, c in zip(vals, cnt)))
    return 0


def cmd_basins(args):
    from .sim import basins

    if args.float_only:
        raise DomainError("basins certifies equilibria exactly; --float-only is not supported")
    m = _map(args)
    lo, hi = args.range[0] if args.range else (Fraction(0), Fraction(10))
    r = basins(m, lo, hi, args.res, threads=args.threads)
    path = _out_path(args, "basins.csv")
    if path is not None:
        path.write_text(r.to_csv())
        path.with_suffix(".json").write_text(r.to_json())
        print(f"wrote {path}", file=sys.stderr)
    for x, lab, s in r.attractors:
        print(f"{lab} = {x:.6f} ({s})")
    for cls in sorted(r.intervals):
        print(f"{cls}: " + " ".join(f"({a:.6f}, {b:.6f})" for a, b in r.intervals[cls]))
    return 0


def cmd_reproduce(args):
    from .reproduce import ALIASES, TARGETS, run_target

    if args.list or not args.target:
        for name in sorted(TARGETS):
            alias = [a for a, t in ALIASES.items() if t == name]
            print(name + (f" (alias {alias[0]})" if alias else ""))
        return 0
    out = args.out
    if out is None and os.environ.get(OUT_ENV):
        out = Path(os.environ[OUT_ENV])
    records, mismatch = run_target(args.target, out, threads=args.threads)
    if mismatch is not None:
        print(f"{args.target}: MISMATCH at record {mismatch.key!r}: expected {mismatch.expected!r}, "
              f"got {mismatch.got!r}")
        return 1
    print(f"{args.target}: {len(records)}/{len(records)} records match")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="monodyn", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stability", help="stable equilibria and condition signs")
    _add_common(s)
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("cycles", help="enumerate and classify n-cycles")
    _add_common(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--places", type=int, default=10)
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("thresholds", help="parameter values where n-cycle counts change")
    _add_common(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--range", type=_range, action="append")
    s.add_argument("--tol", type=_rational, default=Fraction(1, 10**7))
    s.add_argument("--places", type=int, default=10)
    s.set_defaults(func=cmd_thresholds)

    s = sub.add_parser("chaos", help="Li-Yorke chaos certificates")
    _add_common(s)
    s.add_argument("--steps", type=int, default=2, help="snapback preimage steps m")
    s.add_argument("--places", type=int, default=12)
    s.set_defaults(func=cmd_chaos)

    for name, func, res in (("bif1d", cmd_bif1d, 1001), ("bif2d", cmd_bif2d, 201)):
        s = sub.add_parser(name, help=f"{name[-2:].upper()} bifurcation diagram")
        _add_common(s)
        s.add_argument("--vary", action="append", help="parameter to sweep (repeat for 2-D, x axis first)")
        s.add_argument("--range", type=_range, action="append", help="lo:hi per --vary")
        s.add_argument("--res", type=int, default=res)
        s.add_argument("--x0", type=_rational, default=Fraction(1))
        s.set_defaults(func=func)

    s = sub.add_parser("basins", help="basins of attraction of stable equilibria")
    _add_common(s)
    s.add_argument("--range", type=_range, action="append", help="initial-state range lo:hi (default 0:10)")
    s.add_argument("--res", type=int, default=10000)
    s.set_defaults(func=cmd_basins)

    s = sub.add_parser("reproduce", help="rerun a table or figure counterpart and diff against its golden file")
    s.add_argument("target", nargs="?")
    s.add_argument("--list", action="store_true")
    s.add_argument("--out", type=Path, default=None)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except _EXPECTED as exc:
        print(f"monodyn {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
