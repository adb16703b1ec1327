"""Command-line front end.

    tetrarefl verify EQUATION [--backend ...] [--samples N] [--seed S] [--bound B]
    tetrarefl boundarize MAP [--point P | --match J] [...]
    tetrarefl eval "R[3,4,6]" --map R=3dr --state 1,1,1,1,1,1
    tetrarefl trace A|B [--samples N | --bound B] [--file PATH]
    tetrarefl list

Exit status: 0 pass, 1 fail, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import catalog
from .kernel import (
    CompositeSyntaxError, NotInY, SpaceSignature, UnknownLabel, UnknownMap, boundarize,
    eval_composite, parse_composite,
)
from .scalars import Domain, DomainMismatch, format_value, parse_rational, parse_value
from .symbolic import BudgetExceeded
from .verifier import (
    SYMBOLIC, AppendixParseError, Backend, BackendIncompatible, BoxTooLarge, VerificationReport,
    check_boundary_match, check_equation, is_boundarizable, trace_appendix,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# exhaustive bound by number of slots when --bound is not given
DEFAULT_BOUNDS = {4: 8, 6: 8, 9: 4, 15: 2}
DEFAULT_SAMPLES = 200


class UsageError(Exception):
    pass


def build_parser():
    p = argparse.ArgumentParser(prog="tetrarefl", description=(
        "Check tetrahedron and 3D reflection identities exactly; build and "
        "evaluate boundary maps."))
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, backend=True):
        if backend:
            sp.add_argument("--backend", choices=("symbolic", "sample", "exhaustive"))
            sp.add_argument("--samples", type=int, default=None, help="sample count")
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--bound", type=int, default=None,
                            help="ceiling for integer slots (exhaustive, or sampling range)")
        sp.add_argument("--lambda", dest="lam", default=None,
                        help="electrical parameter p/q, or 'symbolic' to leave it free")
        sp.add_argument("--format", choices=("human", "structured"), default="human")
        sp.add_argument("--timing", action="store_true", help="include elapsed_ms in structured output")

    v = sub.add_parser("verify", help="check a registered equation")
    v.add_argument("equation")
    v.add_argument("--map", action="append", default=[], metavar="NAME=ID",
                   help="rebind a map name, e.g. R=3dr-vec")
    common(v)

    b = sub.add_parser("boundarize", help="evaluate or certify a boundary map")
    b.add_argument("map", help="arity-3 map id, or super-T")
    b.add_argument("--point", help="evaluate J at this comma-separated point")
    b.add_argument("--match", metavar="J", help="compare J with this closed-form map")
    common(b)

    e = sub.add_parser("eval", help="apply a composite to a state")
    e.add_argument("composite")
    e.add_argument("--state", required=True)
    e.add_argument("--map", action="append", default=[], metavar="NAME=ID")
    e.add_argument("--labels", help="space-separated slot labels (default 1..n)")
    common(e, backend=False)

    t = sub.add_parser("trace", help="replay an appendix derivation line by line")
    t.add_argument("appendix", choices=("A", "B", "a", "b"))
    t.add_argument("--file", help="alternative data file")
    common(t)

    sub.add_parser("list", help="list map and equation ids")
    return p


# ---------------------------------------------------------------------------

def _lam(text):
    if text is None or text == SYMBOLIC:
        return text
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"--lambda: {e}") from None


def _map(map_id, lam=None):
    try:
        return catalog.get_map(map_id, lam if lam != SYMBOLIC else None)
    except KeyError as e:
        raise UsageError(e.args[0]) from None


def _bindings(pairs, lam):
    out = {}
    for item in pairs:
        name, sep, mid = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--map expects NAME=ID, got {item!r}")
        out[name] = _map(mid, lam)
    return out


def _backend(args, domains):
    kind = args.backend
    integral = all(d.integral for d in domains)
    if kind is None:
        if integral:
            kind = "exhaustive"
        elif len(domains) >= 9:
            kind = "sample"
        else:
            kind = "symbolic"
    if kind == "symbolic":
        return Backend.symbolic()
    if kind == "sample":
        count = args.samples if args.samples is not None else DEFAULT_SAMPLES
        if count < 1:
            raise UsageError("--samples must be at least 1")
        return Backend.sample(count, args.seed, args.bound)
    bound = args.bound if args.bound is not None else DEFAULT_BOUNDS.get(len(domains), 2)
    if bound < 0:
        raise UsageError("--bound must be nonnegative")
    return Backend.exhaustive(bound)


def _emit(report, args, out):
    if args.format == "structured":
        print(report.to_json(timing=args.timing), file=out)
    else:
        print(report.summary(), file=out)
        if report.details and args.command == "trace":
            for row in report.details:
                print(f"  line {row['line']:>3}  {row['result']}", file=out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _state_report(name, state, args, out, t0):
    values = [format_value(v) for v in state]
    if args.format == "structured":
        report = VerificationReport(name, "exact", None, 1, "pass",
                                    elapsed_ms=int(round((time.perf_counter() - t0) * 1000)),
                                    details=[{"state": values}])
        print(report.to_json(timing=args.timing), file=out)
    else:
        print(", ".join(values), file=out)
    return EXIT_PASS


def cmd_verify(args, out):
    lam = _lam(args.lam)
    try:
        spec = catalog.get_equation(args.equation)
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    overrides = _bindings(args.map, lam)
    maps = spec.maps(overrides)
    try:
        sig = catalog.infer_signature(spec.signature.labels, (spec.lhs, spec.rhs), maps)
    except ValueError as e:
        raise UsageError(str(e)) from None
    report = check_equation(spec, _backend(args, sig.domains), overrides, lam)
    return _emit(report, args, out)


def cmd_boundarize(args, out):
    lam = _lam(args.lam)
    R = _map(args.map, lam)
    if R.arity not in (3, 6):
        raise UsageError(f"{R.id} has arity {R.arity}; boundarize needs an arity-3 map or super-T")
    J = boundarize(R)
    if args.point is not None:
        if lam == SYMBOLIC:
            raise UsageError("--point needs a concrete --lambda")
        t0 = time.perf_counter()
        point = _parse_state(args.point, J.domains)
        try:
            value = J(*point)
        except NotInY as e:
            print(f"not boundarizable at this point: {e}", file=sys.stderr)
            return EXIT_FAIL
        return _state_report(f"boundarize({R.id})", value, args, out, t0)
    if args.match is not None:
        target = _map(args.match, lam)
        report = check_boundary_match(R, target, _backend(args, J.domains), lam)
    else:
        report = is_boundarizable(R, _backend(args, J.domains), lam)
    return _emit(report, args, out)


def _parse_state(text, domains):
    parts = [p for p in text.split(",")] if text.strip() else []
    if len(parts) != len(domains):
        raise UsageError(f"expected {len(domains)} comma-separated values, got {len(parts)}")
    try:
        return tuple(parse_value(p, d) for p, d in zip(parts, domains))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad state {text!r}: {e}") from None


def cmd_eval(args, out):
    t0 = time.perf_counter()
    lam = _lam(args.lam)
    if lam == SYMBOLIC:
        raise UsageError("eval needs a concrete --lambda")
    try:
        expr = parse_composite(args.composite)
    except CompositeSyntaxError as e:
        raise UsageError(f"{e}\n  {args.composite}\n  {' ' * e.pos}^") from None
    maps = _bindings(args.map, lam)
    parts = [p.strip() for p in args.state.split(",")] if args.state.strip() else []
    labels = args.labels.split() if args.labels else [str(i) for i in range(1, len(parts) + 1)]
    if len(labels) != len(parts):
        raise UsageError(f"{len(parts)} state values for {len(labels)} labels")
    domains = {}
    for name, ls in expr:
        if name not in maps:
            raise UsageError(f"no map bound to {name!r}; use --map {name}=ID")
        for l, d in zip(ls, maps[name].domains):
            if domains.setdefault(l, d) != d:
                raise UsageError(f"slot {l} used as both {domains[l].value} and {d.value}")
    unknown = [l for l in domains if l not in labels]
    if unknown:
        raise UsageError(f"labels {unknown} not in the state's labels {labels}")
    state, doms = [], []
    for l, text in zip(labels, parts):
        d = domains.get(l)
        if d is None:
            # untouched slot: any exact number passes through
            q = parse_rational(text)
            d = Domain.INT if q.denominator == 1 else Domain.POS_RATIONAL
            value = q.numerator if q.denominator == 1 else q
        else:
            value = parse_value(text, d)
        state.append(value)
        doms.append(d)
    sig = SpaceSignature(tuple(labels), tuple(doms))
    result = eval_composite(expr, tuple(state), maps, sig)
    return _state_report("eval", result, args, out, t0)


def cmd_trace(args, out):
    lam = _lam(args.lam)
    which = args.appendix.upper()
    if args.backend == "exhaustive" or (args.backend is None and args.bound is not None and which == "B"):
        if which == "A":
            raise UsageError("appendix A acts on rationals; use --backend sample")
        backend = Backend.exhaustive(args.bound if args.bound is not None else 2)
    elif args.backend == "symbolic":
        raise UsageError("trace supports the sample and exhaustive backends")
    else:
        count = args.samples if args.samples is not None else 50
        backend = Backend.sample(count, args.seed, args.bound)
    report = trace_appendix(which, backend, lam=lam, path=args.file)
    return _emit(report, args, out)


def cmd_list(args, out):
    print("maps:", file=out)
    for entry in catalog.catalog():
        doms = " x ".join(d.value for d in entry.map.domains)
        partner = f"  <-> {entry.partner}" if entry.partner else ""
        print(f"  {entry.id:<16} {doms}{partner}", file=out)
    print("equations:", file=out)
    for spec in catalog.equation_registry():
        print(f"  {spec.id:<12} {spec.description}", file=out)
    return EXIT_PASS


COMMANDS = {"verify": cmd_verify, "boundarize": cmd_boundarize, "eval": cmd_eval,
            "trace": cmd_trace, "list": cmd_list}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainMismatch, UnknownLabel, UnknownMap, BackendIncompatible, BoxTooLarge,
            AppendixParseError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"error: {e}; try --backend sample", file=sys.stderr)
        return EXIT_USAGE


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
