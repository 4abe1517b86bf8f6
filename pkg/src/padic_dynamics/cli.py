"""Command-line interface.

Exit codes: 0 ok, 1 search output differs from the golden file, 2 parse
error, 3 invalid configuration, 4 precondition failed (bad reduction, no
1-Lipschitz certificate), 5 internal invariant violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dynamics, p2criterion, search
from .decomposition import decompose, odometer_structure
from .errors import (
    BadReduction,
    DegreeTooSmall,
    InvariantViolation,
    NotCertifiedLipschitz,
    ParseError,
    PrecisionLoss,
    WrongForm,
    ZeroDenominator,
)
from .padic import PrimeContext
from .ratmap import RationalMap, has_good_reduction, reduce_mod_p

EXIT_OK = 0
EXIT_GOLDEN_MISMATCH = 1
EXIT_PARSE = 2
EXIT_CONFIG = 3
EXIT_PRECONDITION = 4
EXIT_INVARIANT = 5


class ConfigError(Exception):
    pass


def _yes(flag) -> str:
    if flag is None:
        return "n/a"
    return "yes" if flag else "no"


def _context(args) -> PrimeContext:
    if args.p is None:
        raise ConfigError("--p is required")
    try:
        return PrimeContext(args.p, args.max_level)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _map(args) -> RationalMap:
    sources = [s for s in (args.expr, args.map, args.coeffs) if s is not None]
    if len(sources) != 1:
        raise ConfigError("give exactly one map: a positional expression, --map or --coeffs")
    return RationalMap.parse(sources[0])


def _require_degree(phi: RationalMap):
    if phi.degree < 2:
        raise ConfigError(f"degree {phi.degree} map given; degree >= 2 required")


# -- subcommands -----------------------------------------------------------------


def cmd_reduce(args, out):
    ctx = _context(args)
    phi = _map(args)
    red = reduce_mod_p(phi, ctx)
    good = has_good_reduction(phi, ctx)
    if args.format == "json":
        doc = {
            "map": str(phi),
            "p": ctx.p,
            "reduction": {"num": list(red.num), "den": list(red.den)},
            "degree": phi.degree,
            "reduced_degree": red.degree,
            "good_reduction": good,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"{red}; good reduction: {_yes(good)}\n")
    return EXIT_OK


def cmd_check(args, out):
    ctx = _context(args)
    phi = _map(args)
    _require_degree(phi)
    v = dynamics.check_minimal_thm11(phi, ctx)
    level = dynamics.minimality_level(ctx.p)
    by_levels = dynamics.check_minimal_levels(phi, ctx)
    agree = v.minimal == by_levels
    if args.format == "json":
        doc = {
            "map": str(phi),
            "p": ctx.p,
            "certificate": v.certificate,
            "transitive_level1": v.transitive_level1,
            "deriv_cond": v.deriv_cond,
            "valuation_cond": v.valuation_cond,
            "extra_cond_p23": v.extra_cond_p23,
            "derivative_mod_p": v.derivative_mod_p,
            "valuation_first_return": v.valuation_first_return,
            "valuation_pth_return": v.valuation_pth_return,
            "minimal_by_first_return": v.minimal,
            f"minimal_at_level_{level}": by_levels,
            "checkers_agree": agree,
            "minimal": v.minimal and by_levels,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK if agree else EXIT_INVARIANT
    p = ctx.p
    lines = [f"map: {phi}", f"p = {p}, 1-Lipschitz certificate: {v.certificate}"]
    lines.append(f"level-1 system transitive: {_yes(v.transitive_level1)}")
    if v.transitive_level1:
        lines.append(f"(phi^{p + 1})'(0) = {v.derivative_mod_p} mod {p}, need 1: {_yes(v.deriv_cond)}")
        lines.append(f"v(phi^{p + 1}(0)) = {v.valuation_first_return}, need 1: {_yes(v.valuation_cond)}")
        if v.extra_cond_p23 is not None:
            lines.append(f"v(phi^{p * (p + 1)}(0)) = {v.valuation_pth_return}, need 2: {_yes(v.extra_cond_p23)}")
    lines.append(f"level-{level} system transitive: {_yes(by_levels)}")
    lines.append(f"checkers agree: {_yes(agree)}")
    if v.minimal and by_levels:
        lines.append("minimal: yes")
    elif not v.transitive_level1:
        lines.append("minimal: no (level-1 not transitive)")
    else:
        lines.append("minimal: no")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK if agree else EXIT_INVARIANT


def cmd_orbit(args, out):
    ctx = _context(args)
    phi = _map(args)
    if args.mod_level < 1:
        raise ConfigError("--mod-level must be positive")
    if args.iters < 0 or args.power < 1:
        raise ConfigError("--iters must be >= 0 and --power >= 1")
    balls = dynamics.residue_orbit(phi, args.start, args.mod_level, args.iters, ctx, power=args.power)
    labels = [b.label for b in balls]
    if args.format == "json":
        doc = {"start": args.start, "level": args.mod_level, "modulus": ctx.p**args.mod_level, "power": args.power, "orbit": labels}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(" -> ".join(labels) + "\n")
    return EXIT_OK


def cmd_decompose(args, out):
    ctx = _context(args)
    phi = _map(args)
    _require_degree(phi)
    report = decompose(phi, ctx)
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "dot":
        out.write(report.to_dot() + "\n")
    else:
        out.write(report.summary() + "\n")
        for c in report.components:
            out.write(f"odometer {c.id}: {odometer_structure(c, ctx.p)}, observed cycle lengths {list(c.observed_lengths)}\n")
    return EXIT_OK


def _criterion_input(args):
    sources = [s for s in (args.expr, args.map, args.coeffs) if s is not None]
    if len(sources) != 1:
        raise ConfigError("give exactly one map: a positional expression, --map or --coeffs")
    text = sources[0].strip()
    if text.startswith("["):
        try:
            flat = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from exc
        if not isinstance(flat, list) or len(flat) < 3 or len(flat) % 2 == 0:
            raise ConfigError("a coefficient tuple needs 2d-1 entries a_0..a_{d-1}, b_1..b_{d-1}")
        d = (len(flat) + 1) // 2
        return (flat[:d], flat[d:])
    return RationalMap.parse(text)


def cmd_criterion(args, out):
    if args.p not in (None, 2):
        raise ConfigError("criterion-p2 works with p = 2 only")
    target = _criterion_input(args)
    if isinstance(target, RationalMap):
        _require_degree(target)
    verdict = p2criterion.check_criterion12(target)
    if args.format == "json":
        doc = {
            "coefficients": [str(c) for c in verdict.coefficients],
            "conditions": [
                {"name": c.name, "passed": c.passed, "residue": c.value, "modulus": c.modulus, "target": c.target}
                for c in verdict.conditions
            ],
            "A_mod2": verdict.A_mod2,
            "A_mod4": verdict.A_mod4,
            "overall": verdict.overall,
        }
        if verdict.witness is not None:
            w = verdict.witness
            doc["conjugated_by"] = [str(w.a), str(w.b), str(w.c), str(w.d)]
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    if verdict.witness is not None:
        w = verdict.witness
        out.write(f"conjugated by z -> ({w.a}z + {w.b}) / ({w.c}z + {w.d})\n")
    out.write("coefficients: " + " ".join(str(c) for c in verdict.coefficients) + "\n")
    out.write("\n".join(verdict.lines()) + "\n")
    return EXIT_OK


def cmd_search(args, out):
    p = 2 if args.p is None else args.p
    try:
        spec = search.SearchSpec(p, args.degree, args.modulus, args.mode)
        ctx = PrimeContext(p, max(args.max_level, 3))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    hits = search.run_search(spec, ctx)
    if args.format == "json":
        out.write(search.render_json(hits, spec))
    else:
        out.write(search.render_text(hits, spec.degree))
    if args.golden:
        try:
            golden = Path(args.golden).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read golden file: {exc}") from exc
        diffs = search.compare_golden(hits, spec.degree, golden)
        if diffs:
            for line in diffs:
                print(f"golden mismatch: {line}", file=sys.stderr)
            return EXIT_GOLDEN_MISMATCH
        print("golden file matches", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "reduce": cmd_reduce,
    "check": cmd_check,
    "orbit": cmd_orbit,
    "decompose": cmd_decompose,
    "criterion-p2": cmd_criterion,
    "search": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="the prime")
    common.add_argument("--max-level", type=int, default=4, help="deepest ball level used (>= 3)")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")

    with_map = argparse.ArgumentParser(add_help=False)
    with_map.add_argument("expr", nargs="?", help="map such as '(2z+3)/((z-1)(z-2))'")
    with_map.add_argument("--map", help="map expression (alternative to the positional form)")
    with_map.add_argument("--coeffs", help='coefficient JSON {"num": [...], "den": [...]}, lowest degree first')

    parser = argparse.ArgumentParser(prog="padic-dynamics", description="Dynamics of rational maps on P^1(Q_p).")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reduce", parents=[common, with_map], help="reduction mod p and good reduction")
    sub.add_parser("check", parents=[common, with_map], help="minimality by both criteria")
    o = sub.add_parser("orbit", parents=[common, with_map], help="orbit of a ball at a fixed level")
    o.add_argument("--start", default="0", help="starting point: a rational or 'inf'")
    o.add_argument("--iters", type=int, default=10)
    o.add_argument("--mod-level", type=int, default=3)
    o.add_argument("--power", type=int, default=1, help="iterate phi^power instead of phi")
    sub.add_parser("decompose", parents=[common, with_map], help="minimal decomposition report")
    sub.add_parser(
        "criterion-p2",
        parents=[common, with_map],
        help="coefficient criterion for p = 2; --coeffs also accepts a flat list a_0..a_{d-1}, b_1..b_{d-1}",
    )
    s = sub.add_parser("search", parents=[common], help="exhaustive coefficient search")
    s.add_argument("--degree", type=int, default=4)
    s.add_argument("--modulus", type=int, default=4)
    s.add_argument("--mode", choices=[m.value for m in search.SearchMode], default="criterion12")
    s.add_argument("--golden", help="compare the text table with this file")
    return parser


_VALUE_OPTIONS = ("--map", "--coeffs", "--start")


def _protect_leading_minus(argv):
    """Let map expressions such as '-(2z+1)/z' through argparse's option handling."""
    out = []
    for tok in argv:
        if tok.startswith("-") and len(tok) > 1 and tok[1] != "-" and tok != "-h":
            if out and out[-1] in _VALUE_OPTIONS:
                out[-1] = f"{out[-1]}={tok}"
            else:
                out.append(f"--map={tok}")
            continue
        out.append(tok)
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_protect_leading_minus(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if args.format == "dot" and args.command != "decompose":
        print("error: --format dot is only available for decompose", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args, out)
    except (ParseError, ZeroDenominator) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, DegreeTooSmall, WrongForm) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BadReduction, NotCertifiedLipschitz) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InvariantViolation, PrecisionLoss) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
