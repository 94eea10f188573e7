#!/usr/bin/env python3
"""
CLI Runner for lamekit

Command-line front end for Lamé spectral curves, elliptic covers, period
matrices and theta reduction. Every command builds a RunReport; `--json`
prints it, otherwise a short text summary is shown.
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from dotenv import load_dotenv
from loguru import logger

from ..algebra import MultiPoly, parse_expression
from ..config import get_settings
from ..covers import load_catalog, search_cover, verify_cover, verify_differential
from ..covers.models import CurveSpec
from ..covers.search import SearchBounds
from ..curves import PlaneCurve
from ..exceptions import LamekitError
from ..lame import band_edges, lame_curve
from ..periods import genus2_periods, genus3_periods
from ..periods.models import decode_complex, encode_complex
from ..theta import (
    ThetaChar,
    genus2_certificate,
    genus3_reduction_chain,
    jacobi_thetas,
    standard_form,
    theta,
    weights_from_periods,
)
from ..theta.reduction import ReductionCertificate, decomposition_breadth
from ..theta.symplectic import transform_tau
from .checks import run_checks
from .report import Assertion, RunReport

# Lamé tables print c * f(-z); c per order
TABULATED_SCALE = {2: 4, 3: 16}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the RunReport as JSON")
    common.add_argument("--seed", type=int, default=None, help="Random seed (default from config)")
    common.add_argument("--eps", type=float, default=None, help="Theta truncation tolerance (default from config)")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="lamekit",
        description="Lamé spectral curves, elliptic covers, period matrices and theta reduction",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Factor table and expanded curve for n = 2, as LaTeX
  lamekit lame --n 2 --format latex

  # Verify every catalog cover
  lamekit covers verify --all

  # Search covers of a curve given as JSON {"k": 2, "p": "..."}
  lamekit covers search --curve curve.json --template cubic-in-z

  # Period matrices
  lamekit periods genus2 --xi 1,2,3
  lamekit periods halphen --lambda1 1.0

  # Riemann theta at a point
  lamekit theta eval --v 0.1+0.2j,0.3 --tau-file tau.json --char "0,0;1/2,0"

  # Martens reduction of a relation matrix, or the Halphen chain
  lamekit reduce --m-file m.json --tau-file tau.json
  lamekit reduce --chain halphen --json

  # Full acceptance suite
  lamekit check all --seed 20240601
""",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    lame = commands.add_parser("lame", parents=[common], help="Lamé spectral curve for order n")
    lame.add_argument("--n", type=int, required=True, help="Lamé order n >= 1")
    lame.add_argument("--format", choices=["text", "latex", "json"], default="text")
    lame.add_argument("--tabulated-form", action="store_true", help="Also print c * f(-z), the tabulated convention")
    lame.add_argument("--g2", type=float, default=None, help="Numeric g2 for the band-edge check")
    lame.add_argument("--g3", type=float, default=None, help="Numeric g3 for the band-edge check")

    covers = commands.add_parser("covers", help="Elliptic cover catalog and search")
    cover_commands = covers.add_subparsers(dest="action", required=True)
    verify = cover_commands.add_parser("verify", parents=[common], help="Verify catalog covers")
    target = verify.add_mutually_exclusive_group(required=True)
    target.add_argument("--all", action="store_true", help="Every catalog entry")
    target.add_argument("--case", action="append", help="One catalog id (repeatable)")
    verify.add_argument("--catalog", type=Path, default=None, help="Catalog JSON (default from config)")
    search = cover_commands.add_parser("search", parents=[common], help="Bounded search for covers")
    source = search.add_mutually_exclusive_group(required=True)
    source.add_argument("--curve", type=Path, help='JSON file {"k": 2, "p": "..."}')
    source.add_argument("--case", help="Use the source curve of a catalog entry")
    search.add_argument("--template", default="cubic-in-z", choices=["cubic-in-z", "linear-in-w", "rational-z"])
    search.add_argument("--max-degree", type=int, default=None)
    search.add_argument("--max-exponent", type=int, default=None)
    search.add_argument("--catalog", type=Path, default=None)

    periods = commands.add_parser("periods", help="Period matrices")
    period_commands = periods.add_subparsers(dest="curve", required=True)
    genus2 = period_commands.add_parser("genus2", parents=[common], help="Genus-2 Lamé curve")
    genus2.add_argument("--xi", default="1,2,3", help="xi1,xi2,xi3 with 0 < xi1 < xi2 < xi3")
    genus2.add_argument("--no-contour", action="store_true", help="Skip the contour-integration cross-check")
    halphen = period_commands.add_parser("halphen", parents=[common], help="Halphen curve")
    halphen.add_argument("--lambda1", type=float, default=None)
    halphen.add_argument("--lambda2", type=float, default=None)
    halphen.add_argument("--g3", type=float, default=None,
                         help="Curve w^3 = (z^2 + 25 g3/4)(z^2 - 135 g3/4); overrides the lambdas")

    theta_parser = commands.add_parser("theta", help="Theta functions")
    theta_commands = theta_parser.add_subparsers(dest="action", required=True)
    evaluate = theta_commands.add_parser("eval", parents=[common], help="Evaluate Theta[a;b](v, tau)")
    evaluate.add_argument("--v", required=True, help="Comma-separated complex entries, e.g. 0.1+0.2j,0.3")
    tau_source = evaluate.add_mutually_exclusive_group(required=True)
    tau_source.add_argument("--tau-file", type=Path, help="JSON tau with [re, im] entries")
    tau_source.add_argument("--tau", help="Inline JSON tau with [re, im] entries")
    evaluate.add_argument("--char", default=None, help="Characteristic 'a1,..;b1,..' (default zero)")
    evaluate.add_argument("--jacobi", action="store_true", help="Genus 1: also print theta1..theta4")

    reduce = commands.add_parser("reduce", parents=[common], help="Martens reduction")
    reduce.add_argument("--m-file", type=Path, help="JSON 2 x 2g integer relation matrix")
    reduce.add_argument("--tau-file", type=Path, help="JSON tau with [re, im] entries")
    reduce.add_argument("--chain", choices=["genus2", "halphen"], default=None,
                        help="Built-in reduction chain instead of --m-file")
    reduce.add_argument("--xi", default="1,2,3", help="xi for --chain genus2")

    check = commands.add_parser("check", parents=[common], help="Acceptance suite")
    check.add_argument("suite", choices=["all"])
    check.add_argument("--catalog", type=Path, default=None, help="Catalog JSON to verify")
    check.add_argument("--skip", action="append", default=[], help="Check name to skip (repeatable)")
    check.add_argument("--track", action="store_true", help="Log the run to MLflow")
    return parser


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as e:
        raise LamekitError(f"Cannot parse complex number {text!r}") from e


def parse_vector(text: str) -> List[complex]:
    return [parse_complex(part) for part in text.split(",")]


def _read_json(path: Path) -> Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise LamekitError(f"Cannot read {path}: {e}") from e


def read_tau(path: Optional[Path] = None, text: Optional[str] = None) -> np.ndarray:
    data = _read_json(path) if path else json.loads(text or "null")
    if isinstance(data, dict):
        data = data.get("tau")
    if data is None:
        raise LamekitError("No tau given")
    return np.atleast_2d(np.asarray(decode_complex(data), dtype=complex))


def read_m(path: Path) -> List[List[int]]:
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("m")
    return [[int(x) for x in row] for row in data]


def run_lame(args) -> RunReport:
    result = lame_curve(args.n)
    edges = band_edges(args.n, args.g2, args.g3)
    outputs: Dict[str, Any] = {**result.to_dict(), "band_edges": edges.to_dict(), "latex": result.to_latex()}
    if args.tabulated_form and args.n in TABULATED_SCALE:
        outputs["tabulated_form"] = str(result.tabulated_form(TABULATED_SCALE[args.n]))
    tol = get_settings().lame.band_edge_tol
    return RunReport(
        command="lame",
        parameters={"n": args.n, "format": args.format, "band_edge_tol": tol},
        outputs=outputs,
        residuals={"band_edges": edges.max_deviation},
        assertions=[Assertion.at_most("band_edges", edges.max_deviation, tol)],
    )


def run_covers(args) -> RunReport:
    if args.action == "verify":
        cat = load_catalog(args.catalog, verify=False)
        ids = cat.ids() if args.all else args.case
        assertions, outputs = [], {}
        for cover_id in ids:
            cover = cat.lookup(cover_id)
            results = [verify_cover(cover), verify_differential(cover)]
            outputs[cover_id] = [r.to_dict() for r in results]
            assertions.extend(Assertion.exact(f"{cover_id}.{r.check}", r.passed) for r in results)
        return RunReport(command="covers verify", parameters={"ids": ids}, outputs=outputs, assertions=assertions)

    if args.curve:
        spec = CurveSpec.model_validate(_read_json(args.curve))
        curve = PlaneCurve(spec.k, MultiPoly.from_expr(parse_expression(spec.p)), args.curve.stem, spec.singular)
    else:
        curve = load_catalog(args.catalog, verify=False).lookup(args.case).source
    defaults = SearchBounds.from_settings()
    bounds = SearchBounds(args.max_degree or defaults.max_degree, args.max_exponent or defaults.max_exponent)
    found = search_cover(curve, args.template, bounds)
    return RunReport(
        command="covers search",
        parameters={"template": args.template, "max_degree": bounds.max_degree, "max_exponent": bounds.max_exponent},
        outputs={"count": len(found), "covers": [c.to_dict() for c in found]},
        assertions=[Assertion.exact("covers_found", bool(found), f"{len(found)} covers")],
    )


def run_periods(args) -> RunReport:
    if args.curve == "genus2":
        xi = [float(x) for x in args.xi.split(",")]
        if len(xi) != 3:
            raise LamekitError(f"--xi needs three values, got {args.xi!r}")
        result = genus2_periods(*xi, contour_check=not args.no_contour)
        assertions = [Assertion.at_most("block_shape", result.shape_residual, 1e-9)]
        if result.contour:
            assertions += [
                Assertion.at_most("contour_deviation", result.contour.max_deviation, 1e-9),
                Assertion.at_most("omega22", result.contour.omega22, 1e-11),
            ]
        return RunReport(command="periods genus2", parameters={"xi": xi}, outputs=result.to_dict(),
                         residuals={a.name: a.value for a in assertions}, assertions=assertions)

    lambda1, lambda2 = args.lambda1, args.lambda2
    if args.g3 is not None:
        lambda1, lambda2 = float(np.sqrt(135 * args.g3 / 4)), float(np.sqrt(25 * args.g3 / 4))
    result = genus3_periods(lambda1, lambda2)
    settings = get_settings().periods
    assertions = [
        Assertion.at_most("bilinear", result.data.residuals.bilinear, settings.bilinear_tol),
        Assertion.at_most("x_relations", max(result.x_relations.values()), 1e-10),
        Assertion.at_most("closed_form", result.closed_form_residual, 1e-8),
    ]
    return RunReport(command="periods halphen", parameters={"lambda1": result.lambdas[0], "lambda2": result.lambdas[1]},
                     outputs=result.to_dict(), residuals={a.name: a.value for a in assertions}, assertions=assertions)


def run_theta(args) -> RunReport:
    tau = read_tau(args.tau_file, args.tau)
    v = parse_vector(args.v)
    char = ThetaChar.parse(args.char) if args.char else None
    eps = args.eps if args.eps is not None else get_settings().theta.eps
    value = theta(v, tau, char, eps)
    outputs: Dict[str, Any] = {"value": encode_complex(value), "char": str(char) if char else "zero"}
    if args.jacobi and tau.shape == (1, 1):
        outputs["jacobi"] = encode_complex(list(jacobi_thetas(v[0], tau[0, 0], eps)))
    return RunReport(command="theta eval", parameters={"v": encode_complex(v), "tau": encode_complex(tau), "eps": eps},
                     outputs=outputs)


def _certificate_report(command: str, certificates: List[ReductionCertificate], parameters: Dict[str, Any]) -> RunReport:
    assertions = [Assertion.exact(f"stage{c.stage}.standard_form", c.check()) for c in certificates]
    return RunReport(
        command=command,
        parameters=parameters,
        outputs={"certificates": [c.to_dict() for c in certificates],
                 "breadth": decomposition_breadth(certificates)},
        assertions=assertions,
    )


def run_reduce(args) -> RunReport:
    if args.chain == "genus2":
        xi = [float(x) for x in args.xi.split(",")]
        periods = genus2_periods(*xi, contour_check=False)
        return _certificate_report("reduce", [genus2_certificate(periods.data.tau)], {"chain": "genus2", "xi": xi})
    if args.chain == "halphen":
        if args.tau_file:
            return _certificate_report("reduce", genus3_reduction_chain(read_tau(args.tau_file)), {"chain": "halphen"})
        periods = genus3_periods()
        weights = weights_from_periods(periods.data.B_periods[0])
        return _certificate_report("reduce", genus3_reduction_chain(periods.data.tau, weights),
                                   {"chain": "halphen", "relation_weights": encode_complex(list(weights))})

    if not args.m_file or not args.tau_file:
        raise LamekitError("reduce needs --m-file and --tau-file, or --chain")
    m = read_m(args.m_file)
    tau = read_tau(args.tau_file)
    result = standard_form(m)
    tau_after = transform_tau(tau, result.transform)
    outputs = {**result.to_dict(), "tau_before": encode_complex(tau), "tau_after": encode_complex(tau_after.tau)}
    return RunReport(command="reduce", parameters={"m_file": str(args.m_file), "tau_file": str(args.tau_file)},
                     outputs=outputs, assertions=[Assertion.exact("standard_form", result.check())])


def run_check(args) -> RunReport:
    report = run_checks(args.seed, args.eps, args.catalog, tuple(args.skip))
    if args.track or get_settings().tracking.enabled:
        from ..tracking import tracker
        tracker.start_run(tags={"command": "check all"})
        try:
            tracker.log_report(report)
        finally:
            tracker.end_run()
    return report


COMMANDS: Dict[str, Callable[[argparse.Namespace], RunReport]] = {
    "lame": run_lame,
    "covers": run_covers,
    "periods": run_periods,
    "theta": run_theta,
    "reduce": run_reduce,
    "check": run_check,
}


def print_report(report: RunReport, args: argparse.Namespace) -> None:
    if args.json:
        print(report.to_json())
        return
    if report.command == "lame":
        fmt = getattr(args, "format", "text")
        if fmt == "latex":
            print(report.outputs["latex"])
        elif fmt == "json":
            print(json.dumps(report.outputs, indent=2, default=str))
        else:
            print(f"n={report.outputs['n']}: f_s = {report.outputs['f_s']['expr']}, f_i = {report.outputs['f_i']['expr']}")
            print(f"w^2 = {report.outputs['expanded']['expr']}")
            if "tabulated_form" in report.outputs:
                print(f"tabulated form: {report.outputs['tabulated_form']}")
    elif report.command == "theta eval":
        re, im = report.outputs["value"]
        print(f"Theta{report.outputs['char']} = {re:.16g} {'+' if im >= 0 else '-'} {abs(im):.16g}i")

    for assertion in report.assertions:
        verdict = "PASS" if assertion.passed else "FAIL"
        bound = f" ({assertion.value:.3e} <= {assertion.threshold:.1e})" if assertion.threshold is not None else ""
        detail = f": {assertion.detail}" if assertion.detail and not assertion.passed else ""
        print(f"  [{verdict}] {assertion.name}{bound}{detail}")
    print(f"\n{'OK' if report.passed else 'FAILED'} in {report.wall_time:.2f}s")


def configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "INFO")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run the command and print its report; returns the exit code"""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.verbose)
    started = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
        if report.command != "check all":
            report.wall_time = time.perf_counter() - started
        print_report(report, args)
    except KeyboardInterrupt:
        print("\n\nInterrupted by user")
        return 1
    except (LamekitError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"\nError: {e}")
        if args.verbose:
            import traceback
            traceback.print_exc()
        return 1

    for failure in report.failures():
        logger.error(f"Failed: {failure.name} {failure.detail}")
    return 0 if report.passed else 1


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
