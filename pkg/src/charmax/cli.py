"""Command-line harness.

Subcommands: sweep, battery, distance, search-prescribed, mertens,
halasz-check, export.  Exit codes: 0 pass, 1 assertion or baseline
failure, 2 usage/config error, 3 capacity.  Numeric pass/fail logic lives
in the library; this layer only parses flags, routes, and prints.
"""

from __future__ import annotations

import argparse
import inspect
import json
import sys
from fractions import Fraction

from .batteries import BATTERIES, BATTERY_NAMES, run_battery
from .dirichlet import build_group
from .errors import BaselineError, CapacityError, ConfigError, DomainError
from .extremal import PrescribedTargets, prescribed_count_shape, search_prescribed
from .halasz import band_energy_integral, euler_max_check, halasz_bound_check, unimodular_corpus
from .lvalues import (
    mertens_constant,
    mertens_constant_oracle,
    mertens_progression,
    truncation_tail_bound,
)
from .pretentious import CMFunction, distance_sq, min_twisted_distance
from .sweep import (
    SweepConfig,
    load_records,
    make_header,
    render_lines,
    run_sweep,
    write_records,
)

_FORMATS = {"jsonl": "jsonl", "json-lines": "jsonl", "csv": "csv"}


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True, default=str))


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = SweepConfig(
        q_min=args.q_min,
        q_max=args.q_max,
        order=args.order,
        threads=args.threads,
        seed=args.seed,
    )
    records = run_sweep(config)
    fmt = _FORMATS[args.format]
    if args.out is None:
        for line in render_lines(records, make_header(config), fmt=fmt):
            print(line)
    else:
        write_records(records, args.out, make_header(config), fmt=fmt)
    return 0


def _cmd_battery(args: argparse.Namespace) -> int:
    overrides: dict = {}
    if args.baseline is not None:
        overrides["baseline_path"] = args.baseline
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.q_max is not None:
        overrides["q_max"] = args.q_max
    if args.y is not None:
        overrides["y"] = args.y
    allowed = set(inspect.signature(BATTERIES[args.name]).parameters)
    for key in overrides:
        if key not in allowed:
            flag = "--baseline" if key == "baseline_path" else "--" + key.replace("_", "-")
            raise ConfigError(f"battery {args.name!r} does not accept {flag}")
    result = run_battery(args.name, **overrides)
    status = "PASS" if result.passed else "FAIL"
    print(f"battery {result.name}: {status} ({result.cases} cases, {len(result.failures)} failures)")
    for line in result.failures:
        print(f"  FAIL {line}")
    for key in sorted(result.details):
        print(f"  {key} = {result.details[key]}")
    return 0 if result.passed else 1


def _cmd_distance(args: argparse.Namespace) -> int:
    group = build_group(args.q)
    chars = list(group.characters())
    if not 0 <= args.index < len(chars):
        raise ConfigError(f"index must lie in [0, {len(chars)}) for modulus {args.q}")
    chi = chars[args.index]
    bound = int(args.y)
    f = CMFunction.from_character(chi, bound)
    plain = distance_sq(f, CMFunction.constant(1.0, bound), args.y)
    out = {
        "q": args.q,
        "char_index": args.index,
        "order": chi.order,
        "parity": chi.parity,
        "primitive": chi.is_primitive,
        "y": args.y,
        "distance_sq": plain.value,
    }
    if args.T is not None:
        m = min_twisted_distance(f, args.y, args.T, resolution=args.resolution)
        out.update(
            {
                "T": args.T,
                "twist_min": m.value,
                "argmin_t": m.argmin,
                "grid_points": m.grid_points,
                "grid_error_bound": m.grid_error_bound,
            }
        )
    _emit(out)
    return 0


def _parse_targets(raw: str) -> dict[int, Fraction | None]:
    # "2:1/3,5:zero" -> {2: Fraction(1, 3), 5: None}
    out: dict[int, Fraction | None] = {}
    for part in raw.split(","):
        if not part:
            continue
        prime_str, sep, val = part.partition(":")
        if not sep:
            raise ConfigError(f"target {part!r} is not of the form p:angle")
        try:
            p = int(prime_str)
            out[p] = None if val == "zero" else Fraction(val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad target {part!r}: {exc}") from None
    return out


def _cmd_search_prescribed(args: argparse.Namespace) -> int:
    parsed = _parse_targets(args.targets) if args.targets else {}
    targets = PrescribedTargets.from_angles(args.order, parsed)
    matches = search_prescribed(targets, args.q_max, stop_after=args.stop_after)
    for chi in matches:
        _emit(
            {
                "q": chi.modulus,
                "exponents": list(chi.exponents),
                "order": chi.order,
                "parity": chi.parity,
            }
        )
    _emit(
        {
            "count": len(matches),
            "q_max": args.q_max,
            "count_shape": prescribed_count_shape(args.order, targets.y, args.q_max),
            "truncated": args.stop_after is not None and len(matches) >= args.stop_after,
        }
    )
    return 0


def _cmd_mertens(args: argparse.Namespace) -> int:
    cutoff = args.y
    constant = mertens_constant(args.modulus, args.residue, cutoff)
    prog = mertens_progression(cutoff, args.modulus, args.residue)
    out = {
        "modulus": args.modulus,
        "residue": args.residue,
        "cutoff": cutoff,
        "constant": constant,
        "kernel_tail_bound": truncation_tail_bound(cutoff),
        "progression_sum": prog.value,
        "progression_main": prog.main_term,
        "empirical_constant": -prog.constant_estimate,
    }
    if args.oracle:
        out["oracle"] = mertens_constant_oracle(args.modulus, args.residue)
    _emit(out)
    return 0


def _cmd_halasz_check(args: argparse.Namespace) -> int:
    y = args.y
    x = args.x if args.x is not None else y
    if args.seed is not None:
        f = unimodular_corpus(1, int(y), args.seed)[0]
        label = f"corpus[seed={args.seed}]"
    else:
        f = CMFunction.constant(1.0, int(y))
        label = "constant 1"
    report = halasz_bound_check(f, x, y, args.T)
    _emit(
        {
            "f": label,
            "lhs": report.lhs,
            "rhs_main": report.rhs_main,
            "rhs_tail": report.rhs_tail,
            "ratio": report.ratio,
            "params": report.params,
        }
    )
    if args.alpha is not None:
        check = euler_max_check(f, args.alpha, args.T)
        _emit(
            {
                "euler_max": check.lhs,
                "rhs_main": check.rhs_main,
                "ratio": check.ratio,
                "params": check.params,
            }
        )
        integral = band_energy_integral(f, args.T, x, grid=args.grid)
        _emit(
            {
                "band_energy_integral": integral.value,
                "alphas": list(integral.alphas),
                "energies": list(integral.energies),
            }
        )
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    header, records = load_records(args.path)
    write_records(records, args.out, header, fmt=_FORMATS[args.format])
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="charmax")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="maximal character sums over a conductor range")
    p.add_argument("--q-min", type=int, default=3)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=sorted(_FORMATS), default="jsonl")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("battery", help="run one named bound-check battery")
    p.add_argument("name", choices=BATTERY_NAMES)
    p.add_argument("--baseline", default=None, help="override the stored baseline file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--q-max", type=int, default=None)
    p.add_argument("--y", type=float, default=None)
    p.set_defaults(func=_cmd_battery)

    p = sub.add_parser("distance", help="pretentious distance of one character to 1")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--index", type=int, default=0, help="position in the full character list")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--T", type=float, default=None, help="also minimize over twists |t| <= T")
    p.add_argument("--resolution", type=float, default=0.01)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("search-prescribed", help="characters hitting prescribed root values")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--targets", default="", help='e.g. "2:1/3,5:zero" (angles as fractions of a turn)')
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--stop-after", type=int, default=None)
    p.set_defaults(func=_cmd_search_prescribed)

    p = sub.add_parser("mertens", help="Mertens constant for a reduced residue class")
    p.add_argument("modulus", type=int)
    p.add_argument("residue", type=int)
    p.add_argument("--y", type=int, default=10**6, help="prime cutoff")
    p.add_argument("--oracle", action="store_true", help="include the two-cutoff extrapolation")
    p.set_defaults(func=_cmd_mertens)

    p = sub.add_parser("halasz-check", help="mean value of a unimodular function vs its bound")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--x", type=float, default=None, help="defaults to y")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None, help="also report the Euler-product check")
    p.add_argument("--grid", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=None, help="use a corpus function instead of 1")
    p.set_defaults(func=_cmd_halasz_check)

    p = sub.add_parser("export", help="convert a sweep export between formats")
    p.add_argument("path")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=sorted(_FORMATS), default="csv")
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors, 0 for --help
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BaselineError as exc:
        print(f"baseline error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
