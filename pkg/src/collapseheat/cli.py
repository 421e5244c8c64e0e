"""``collapseheat`` command line.

Every subcommand prints one JSON document on stdout. Exit status is 0 on
success, 1 on invalid input and 2 when a verification fails.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from pathlib import Path

from . import bounds, diagram, observe, oracle
from .constants import default_constants
from .models import CollapseParams, Model, heating_power
from .thermal import DEFAULT_STAR, StarModel, equilibrium_temperature, load_star

EXIT_OK, EXIT_INVALID, EXIT_VERIFY_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _rc_grid(text: str):
    try:
        lo, hi, n = text.split(":")
        return bounds.rc_grid(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected min:max:N with 0 < min < max, got {text!r} ({exc})")


def _params(args) -> CollapseParams:
    model = Model.parse(args.model)
    if model is Model.CSL:
        if args.lam is None:
            raise ValueError("--lambda is required for the CSL model")
        return CollapseParams.csl(args.lam, args.rc)
    return CollapseParams.dp(args.rc, args.dp_prefactor)


def _cmd_heat(args, constants):
    params = _params(args)
    star = load_star(args.star)
    out = {"model": params.model.value, "rc_m": params.r_c, "n_baryons": star.n_baryons}
    if params.model is Model.CSL:
        out["lambda_per_s"] = params.lam
    else:
        out["dp_prefactor"] = params.dp_prefactor
    out["P_heat_W"] = heating_power(params, star.n_baryons, constants)
    if args.command == "equilibrium":
        out["area_model"] = star.area_model.value
        out["T_eq_K"] = equilibrium_temperature(star, out["P_heat_W"], constants)
    return out, EXIT_OK


def _cmd_bound(args, constants):
    star = load_star(args.star)
    scenario = bounds.TemperatureScenario(args.label, args.temperature, args.kind)
    out = {"model": args.model, "temperature_K": args.temperature, "star": star.name}
    if args.model == "dp":
        rc_min = bounds.dp_rc_min(scenario, star, args.dp_prefactor, constants)
        rc_max = bounds.dp_gravitational_upper_bound()
        out.update(rc_min_m=rc_min, rc_max_gravitational_m=rc_max, window_open=rc_min < rc_max)
        return out, EXIT_OK
    if args.rc is not None:
        out["rc_m"] = args.rc
        out["lambda_crit_per_s"] = bounds.csl_lambda_crit(args.rc, scenario, star, constants)
        return out, EXIT_OK
    curve = bounds.build_exclusion_curve(scenario, star, Model.CSL, args.rc_grid, constants)
    out["samples"] = [{"rc_m": rc, "lambda_crit_per_s": lam} for rc, lam in curve.samples]
    return out, EXIT_OK


def _cmd_diagram(args, constants):
    star = load_star(args.star)
    scenarios = bounds.load_scenarios(args.scenarios) if args.scenarios else list(bounds.BUILTIN_SCENARIOS)
    curves = tuple(bounds.build_exclusion_curve(s, star, Model.CSL, args.rc_grid, constants) for s in scenarios)
    overlays = tuple(diagram.load_overlays(args.overlays)) if args.overlays else ()
    markers = tuple(diagram.load_markers(args.markers)) if args.markers else (diagram.GRW_MARKER,)
    grid = args.rc_grid
    spec = diagram.DiagramSpec(curves, rc_range=(float(grid[0]), float(grid[-1])) if grid is not None
                               else (1e-9, 1e-3), overlays=overlays, markers=markers)
    svg, table = diagram.render_diagram(spec)
    Path(args.out).write_text(svg, encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(table, encoding="utf-8")
    out = {"svg": str(args.out), "csv": args.csv, "curves": [c.scenario.to_dict() for c in curves],
           "overlays": [o.label for o in overlays], "markers": [m.label for m in markers],
           "samples": sum(len(c.samples) for c in curves)}
    return out, EXIT_OK


def _cmd_observe(args, constants):
    if args.star == "default":
        star = StarModel("observed", mass=DEFAULT_STAR.mass, radius=args.radius_km * 1e3,
                         n_baryons=DEFAULT_STAR.n_baryons, area_model=args.area)
    else:
        star = load_star(args.star).with_area(args.area)
    obs = observe.Observation.at_parsec(args.magnitude, args.distance_pc, star.radius, constants)
    lum = observe.luminosity_from_magnitude(obs, constants)
    temp = observe.temperature_from_luminosity(lum, star, constants)
    out = {
        "magnitude": args.magnitude,
        "distance_pc": args.distance_pc,
        "radius_m": star.radius,
        "luminosity_W": lum,
        "temperature_K": temp,
        "assumptions": {
            "photometry": observe.BOLOMETRIC_ASSUMPTION,
            "M_bol_sun": constants.M_bol_sun,
            "L_sun_W": constants.L_sun,
            "area_model": star.area_model.value,
            "emissivity": star.emissivity,
        },
    }
    return out, EXIT_OK


def _cmd_verify(args, constants):
    out = {}
    ok = True
    if args.what in ("kernels", "all"):
        reports = oracle.verify_heating_coefficients(constants)
        passed = oracle.all_passed(reports)
        ok &= passed
        out["kernels"] = {"passed": passed, "reports": [r.to_dict() for r in reports]}
        print(_kernel_table(reports), file=sys.stderr)
    if args.what in ("simulator", "all"):
        from .sim import run_independence_check

        report = run_independence_check(args.grid, args.lam, args.rc, args.t_end, backend=args.backend)
        ok &= report.passed
        out["simulator"] = report.to_dict()
        if args.dump:
            report.cases[0].series.to_csv(args.dump)
            out["simulator"]["dump"] = args.dump
    out["passed"] = bool(ok)
    return out, EXIT_OK if ok else EXIT_VERIFY_FAILED


def _kernel_table(reports) -> str:
    head = f"{'model':<5} {'method':<19} {'r_c [m]':>9} {'rel.err':>10} {'tol':>8}  status"
    rows = [head, "-" * len(head)]
    for r in reports:
        rows.append(f"{r.model.value:<5} {r.method.value:<19} {r.r_c:>9.1e} {r.relative_error:>10.2e} "
                    f"{r.tolerance:>8.0e}  {'ok' if r.passed else 'FAIL'}")
    return "\n".join(rows)


@functools.lru_cache(maxsize=1)
def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--constants", choices=["codata", "paper"], default=argparse.SUPPRESS,
                        help="constant profile (default: codata)")

    parser = _Parser(prog="collapseheat", parents=[common],
                     description="Collapse-model heating of neutron stars and the bounds it implies.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    for name, helptext in (("heat", "heating power of a star"), ("equilibrium", "equilibrium temperature")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--model", choices=["csl", "dp"], required=True)
        p.add_argument("--lambda", dest="lam", type=float, help="CSL rate [1/s]")
        p.add_argument("--rc", type=float, required=True, help="regulator length [m]")
        p.add_argument("--dp-prefactor", type=float, default=0.25, choices=[0.25, 0.125])
        p.add_argument("--star", default="default", help="'default' or a star JSON file")

    p = sub.add_parser("bound", parents=[common], help="exclusion bound for one temperature")
    p.add_argument("model", choices=["csl", "dp"])
    p.add_argument("--temperature", type=float, required=True, help="equilibrium temperature [K]")
    p.add_argument("--rc", type=float, help="CSL: single r_c [m] instead of a grid")
    p.add_argument("--rc-grid", type=_rc_grid, default=None, help="CSL grid min:max:N (default 1e-9:1e-3:200)")
    p.add_argument("--dp-prefactor", type=float, default=0.25, choices=[0.25, 0.125])
    p.add_argument("--star", default="default")
    p.add_argument("--label", default="cli")
    p.add_argument("--kind", choices=["observed", "speculative"], default="speculative")

    p = sub.add_parser("diagram", parents=[common], help="CSL parameter diagram (SVG + CSV)")
    p.add_argument("--scenarios", help="scenario JSON (default: built-in set)")
    p.add_argument("--overlays", help="directory of overlay CSV files")
    p.add_argument("--markers", help="marker JSON (default: GRW point)")
    p.add_argument("--out", required=True, help="SVG output path")
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--rc-grid", type=_rc_grid, default=None)
    p.add_argument("--star", default="default")

    p = sub.add_parser("observe", parents=[common], help="magnitude -> luminosity -> temperature")
    p.add_argument("--magnitude", type=float, required=True)
    p.add_argument("--distance-pc", type=float, default=5.0)
    p.add_argument("--radius-km", type=float, default=10.0)
    p.add_argument("--area", choices=["full_sphere", "disk"], default="full_sphere")
    p.add_argument("--star", default="default", help="star JSON overriding --radius-km")

    p = sub.add_parser("verify", parents=[common], help="numerical oracles")
    p.add_argument("what", nargs="?", choices=["kernels", "simulator", "all"], default="all")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--lambda", dest="lam", type=float, default=0.01)
    p.add_argument("--rc", type=float, default=1.0)
    p.add_argument("--t-end", type=float, default=0.5)
    p.add_argument("--backend", choices=["cython", "numpy"], default=None)
    p.add_argument("--dump", help="CSV of the free-Gaussian energy series")
    return parser


_COMMANDS = {
    "heat": _cmd_heat,
    "equilibrium": _cmd_heat,
    "bound": _cmd_bound,
    "diagram": _cmd_diagram,
    "observe": _cmd_observe,
    "verify": _cmd_verify,
}


def run_cli(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INVALID
    try:
        constants = default_constants(getattr(args, "constants", "codata"))
        out, code = _COMMANDS[args.command](args, constants)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"collapseheat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out = {"constants": constants.name, **out}
    json.dump(out, stdout, indent=2)
    stdout.write("\n")
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
