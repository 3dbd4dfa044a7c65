#!/usr/bin/env python
"""
qsi - command-line front end for quiver representation and semi-invariant analyses.

Every command builds one result dict; --json wraps it in a versioned envelope,
otherwise text_report renders it. Exit codes: 0 success, 1 analysis failure,
2 bad input.
"""

import argparse
import json
import logging
import os
import random
import sys
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from quiver_semi_invariants.algebra.linalg import Field, parse_field
from quiver_semi_invariants.algebra.quiver import (
    Quiver,
    RelationSet,
    dimension_vector,
    euler_form,
    weight,
)
from quiver_semi_invariants.algebra.representations import (
    generic_end_dim,
    generic_self_ext,
    is_brick,
    is_point_of,
    orbit_codim_hereditary,
    orbit_dimension,
    random_point,
    require_acyclic,
)
from quiver_semi_invariants.algebra.roots import (
    canonical_decomposition,
    class_by_euler,
    classify_root,
    report_from_decomposition,
)
from quiver_semi_invariants.algebra.semi_invariants import (
    jacobian_rank,
    minimal_double_weight,
    monomial_pairs,
    multiplicity_free_in_box,
    weight_remainder,
    weight_space_dim_symbolic,
)
from quiver_semi_invariants.errors import BadParams, CyclicQuiver, NoMonomial, QsiError
from quiver_semi_invariants.example_families import (
    CLI_NAMES,
    FixtureId,
    build_fixture,
    verify_example,
)
from quiver_semi_invariants.settings import Settings, get_settings
from quiver_semi_invariants.storage import export_fixture, load_point, load_quiver, load_system
from quiver_semi_invariants.text_report import render

logger = logging.getLogger("qsi")

SCHEMA_VERSION = "1.0"

# multiples k of chi whose weight spaces si-weights reports
CHI_MULTIPLES = 3


@dataclass
class CommandResult:
    result: dict[str, Any]
    ok: bool = True


def _configure_logging() -> None:
    logging.basicConfig(
        level=os.getenv("LOG_LEVEL", "WARNING"),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )


def _field(args: argparse.Namespace, settings: Settings) -> Field:
    return parse_field(args.field, settings.sampling.min_prime)


def _hereditary(q: Quiver, r: RelationSet) -> None:
    if r.elements:
        raise CyclicQuiver("this command needs a quiver without relations")
    require_acyclic(q)


def cmd_euler(args: argparse.Namespace, settings: Settings) -> CommandResult:
    q, _ = load_quiver(args.quiver)
    a = weight(q, args.dim)
    b = weight(q, args.other) if args.other else a
    return CommandResult(
        {
            "dim": a.to_list(),
            "other": b.to_list(),
            "euler": euler_form(q, a, b),
            "tits_form": euler_form(q, a, a),
        }
    )


def cmd_classify(args: argparse.Namespace, settings: Settings) -> CommandResult:
    q, r = load_quiver(args.quiver)
    _hereditary(q, r)
    b = dimension_vector(q, args.dim)
    fld = _field(args, settings)
    root_class = classify_root(q, b, args.seed, args.samples, fld)
    return CommandResult(
        {
            "dim": b.to_list(),
            "class": root_class.value,
            "description": root_class.describe(),
            "euler": euler_form(q, b, b),
            "generic_end_dim": generic_end_dim(q, b, args.samples, args.seed, fld),
        }
    )


def cmd_decompose(args: argparse.Namespace, settings: Settings) -> CommandResult:
    q, r = load_quiver(args.quiver)
    _hereditary(q, r)
    b = dimension_vector(q, args.dim)
    decomposition = canonical_decomposition(
        q, b, args.seed, args.samples, _field(args, settings),
        retries=settings.canonical.certification_retries,
        require_certified=not args.allow_uncertified,
    )
    result = decomposition.to_dict()
    result["dim"] = b.to_list()
    result["classes"] = [class_by_euler(euler_form(q, p, p)).value for p in decomposition.parts]
    return CommandResult(result, decomposition.confident)


def cmd_report(args: argparse.Namespace, settings: Settings) -> CommandResult:
    q, r = load_quiver(args.quiver)
    _hereditary(q, r)
    b = dimension_vector(q, args.dim)
    fld = _field(args, settings)
    decomposition = canonical_decomposition(
        q, b, args.seed, args.samples, fld,
        retries=settings.canonical.certification_retries,
        require_certified=True,
    )
    result = report_from_decomposition(q, decomposition).to_dict()
    result["dim"] = b.to_list()
    result["generic_orbit_codim"] = generic_self_ext(q, b, args.samples, args.seed, fld)
    return CommandResult(result)


def cmd_si_weights(args: argparse.Namespace, settings: Settings) -> CommandResult:
    system = load_system(args.system)
    box = args.box
    mw = minimal_double_weight(system, box)
    dims = []
    for k in range(1, min(CHI_MULTIPLES, box) + 1):
        sigma = mw.chi * k
        dims.append(
            {
                "multiple": k,
                "symbolic": weight_space_dim_symbolic(system, sigma, box),
                "predicted": weight_remainder(sigma, mw, system, box).predicted_dim,
            }
        )
    result: dict[str, Any] = {
        "vertices": list(system.vertices),
        "minimal_weight": mw.to_dict(system),
        "dims": dims,
        "pairs": [
            {"p": system.label(p.p), "q": system.label(p.q), "coprime": p.coprime}
            for p in monomial_pairs(mw)
        ],
        "relations": len(system.relations),
        "jacobian_rank": jacobian_rank(
            system, args.seed, settings.si_ring.jacobian_points, settings.si_ring.jacobian_coordinate_max
        ),
        "multiplicity": multiplicity_free_in_box(system, box).to_dict(),
    }
    if args.weight:
        sigma = weight(Quiver(vertices=system.vertices), args.weight)
        try:
            remainder: dict[str, Any] | None = weight_remainder(sigma, mw, system, box).to_dict()
        except NoMonomial as e:
            logger.info(f"No remainder for {sigma}: {e}")
            remainder = None
        result["weight"] = {
            "sigma": sigma.to_list(),
            "dim": weight_space_dim_symbolic(system, sigma, box),
            "remainder": remainder,
        }
    return CommandResult(result)


def _fixture_id(args: argparse.Namespace) -> FixtureId:
    return FixtureId(kind=CLI_NAMES[args.fixture], n=args.n)


def cmd_verify_example(args: argparse.Namespace, settings: Settings) -> CommandResult:
    report = verify_example(_fixture_id(args), args.seed)
    return CommandResult(report.model_dump(mode="json"), report.passed)


def cmd_orbit(args: argparse.Namespace, settings: Settings) -> CommandResult:
    q, r = load_quiver(args.quiver)
    fld = _field(args, settings)
    if args.point:
        v = load_point(args.point, q, settings.sampling.min_prime)
    else:
        if args.dim is None:
            raise BadParams("orbit needs --point, or --dim for a generic point of a quiver without relations")
        _hereditary(q, r)
        v = random_point(q, dimension_vector(q, args.dim), random.Random(args.seed), fld)
    hereditary = not r.elements and q.is_acyclic()
    brick = is_brick(v)
    return CommandResult(
        {
            "dim": v.dim.to_list(),
            "field": v.field.name,
            "gl_dim": v.dim.gl_dimension(),
            "end_dim": brick.end_dim,
            "orbit_dim": orbit_dimension(v),
            "is_brick": brick.is_brick,
            "relations_hold": is_point_of(v, r),
            "codim": orbit_codim_hereditary(v).codim if hereditary else None,
        }
    )


def cmd_export_fixture(args: argparse.Namespace, settings: Settings) -> CommandResult:
    fid = _fixture_id(args)
    fx = build_fixture(fid)
    written = export_fixture(fx.quiver, fx.relations, fx.system, args.out)
    return CommandResult({"fixture": fid.label(), "written": [str(p) for p in written]})


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], CommandResult]] = {
    "euler": cmd_euler,
    "classify": cmd_classify,
    "decompose": cmd_decompose,
    "report": cmd_report,
    "si-weights": cmd_si_weights,
    "verify-example": cmd_verify_example,
    "orbit": cmd_orbit,
    "export-fixture": cmd_export_fixture,
}


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    """Argument parser; defaults come from the settings."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="Seed for all sampling (default: 0)")
    common.add_argument(
        "--samples", type=int, default=settings.sampling.samples,
        help=f"Independent draws per generic value (default: {settings.sampling.samples})",
    )
    common.add_argument(
        "--field", default="rational",
        help="Base field: 'rational' or 'p:PRIME' (default: rational)",
    )
    common.add_argument("--json", action="store_true", help="Emit the JSON envelope")

    quiver = argparse.ArgumentParser(add_help=False)
    quiver.add_argument("--quiver", type=Path, required=True, help="Quiver JSON file")

    dim = argparse.ArgumentParser(add_help=False)
    dim.add_argument("--dim", required=True, help="Dimension vector as CSV, e.g. 1,1")

    fixture = argparse.ArgumentParser(add_help=False)
    fixture.add_argument("fixture", choices=sorted(CLI_NAMES), help="Built-in fixture")
    fixture.add_argument("--n", type=int, default=None, help="Family index for ex3 (n >= 2)")

    parser = argparse.ArgumentParser(
        prog="qsi",
        description="Quiver representations and semi-invariant rings in exact arithmetic",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s euler --quiver kronecker.json --dim 1,1          Euler form <b,b>
  %(prog)s classify --quiver kronecker.json --dim 1,1       Real / Isotropic / Imaginary / not Schur
  %(prog)s decompose --quiver d4.json --dim 1,1,1,1,2       Certified canonical decomposition
  %(prog)s report --quiver a2.json --dim 1,1                (Almost-)prehomogeneity
  %(prog)s si-weights --system ex2.json --box 3             Minimal weight and weight spaces
  %(prog)s verify-example ex3 --n 3 --json                  Check a built-in example
  %(prog)s orbit --quiver q.json --point m.json             Orbit data of a point
  %(prog)s export-fixture ex2 --out fixtures/ex2            Write a fixture as JSON files
        """,
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    euler_parser = subparsers.add_parser("euler", parents=[common, quiver, dim], help="Euler form")
    euler_parser.add_argument("--other", help="Second vector (default: --dim)")
    subparsers.add_parser("classify", parents=[common, quiver, dim], help="Classify a dimension vector")
    decompose_parser = subparsers.add_parser(
        "decompose", parents=[common, quiver, dim], help="Canonical decomposition"
    )
    decompose_parser.add_argument(
        "--allow-uncertified", action="store_true",
        help="Return the sampled decomposition even if certification fails",
    )
    subparsers.add_parser("report", parents=[common, quiver, dim], help="Prehomogeneity report")

    si_parser = subparsers.add_parser("si-weights", parents=[common], help="Semi-invariant weight analysis")
    si_parser.add_argument("--system", type=Path, required=True, help="Generator system JSON file")
    si_parser.add_argument(
        "--box", type=int, default=settings.si_ring.box,
        help=f"Exponent bound for weight scans (default: {settings.si_ring.box})",
    )
    si_parser.add_argument("--weight", help="Also analyse this weight (CSV)")

    subparsers.add_parser("verify-example", parents=[common, fixture], help="Verify a built-in example")

    orbit_parser = subparsers.add_parser("orbit", parents=[common, quiver], help="Orbit data")
    orbit_parser.add_argument("--point", type=Path, help="Point JSON file")
    orbit_parser.add_argument("--dim", help="Dimension vector of a sampled generic point")

    export_parser = subparsers.add_parser("export-fixture", parents=[common, fixture], help="Export a fixture")
    export_parser.add_argument("--out", type=Path, required=True, help="Output directory")
    return parser


def envelope(command: str, seed: int, result: dict[str, Any]) -> str:
    """Stable JSON: sorted keys, two-space indent, no timestamps."""
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "seed": seed, "result": result}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def main(argv: list[str] | None = None) -> int:
    """Main entry point with argument parsing."""
    _configure_logging()
    try:
        settings = get_settings()
    except QsiError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    parser = build_parser(settings)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2

    try:
        outcome = COMMANDS[args.command](args, settings)
    except QsiError as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    if args.json:
        print(envelope(args.command, args.seed, outcome.result))
    else:
        print(render(args.command, outcome.result))
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
