"""Command-line interface: reproducible analyses with JSON reports.

Subcommands
    decompose    split a field at sample points and verify the identities
    coercivity   paired coercivity probe of a field and its conservative part
    equilibria   certify a ball and locate equilibria, or run the
                 constant-perturbation workflow (--perturb)

One JSON report (report_version 1) is written to stdout (or --out); a
short human-readable summary goes to stderr.  All randomness sits behind
--seed, and repeated invocations with identical flags produce identical
reports except for the "timing" field.

Exit codes: 0 success, 2 parse/usage error, 3 numeric failure,
4 internal-identity violation, 5 certificate failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .decomposition import decompose_many, verify_decomposition
from .dsl import parse_field
from .errors import (
    CatalogError,
    CertificateError,
    DimensionMismatchError,
    DomainError,
    NoCertifiedRadiusError,
    NonFiniteValueError,
    ParseError,
    PresnovError,
    QuadratureError,
)
from .fields import ShiftedField, catalog_field
from .quadrature import QuadratureConfig
from .radial import ProbeConfig, boundary_certificate, paired_probe
from .equilibria import (
    SolverConfig,
    find_equilibrium,
    find_equilibrium_conservative,
    perturbed_existence,
)
from .sampling import ball_points

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_IDENTITY = 4
EXIT_CERTIFICATE = 5


class UsageError(PresnovError, ValueError):
    pass


def _parse_floats(text, flag):
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def _build_field(args):
    sources = [s for s in (args.catalog, args.expr, args.field_file) if s is not None]
    if len(sources) != 1:
        raise UsageError("specify exactly one of --catalog, --expr, --field-file")
    if args.catalog is not None:
        params = {}
        if args.matrix is not None:
            flat = _parse_floats(args.matrix, "--matrix")
            n = int(round(len(flat) ** 0.5))
            if n * n != len(flat):
                raise UsageError("--matrix needs n*n comma-separated entries (row-major)")
            params["matrix"] = np.array(flat).reshape(n, n)
        if args.vector is not None:
            params["value"] = _parse_floats(args.vector, "--vector")
        if args.coeffs is not None:
            rows = [
                _parse_floats(row, "--coeffs")
                for row in args.coeffs.split(";")
                if row.strip() != ""
            ]
            params["coeffs"] = rows
        entry = catalog_field(args.catalog, args.dim, **params)
        field = entry.field
        source = {
            "kind": "catalog",
            "name": entry.name,
            "parameters": entry.parameters,
        }
    elif args.expr is not None:
        field = parse_field(args.expr, args.dim)
        source = {"kind": "expr", "text": args.expr}
    else:
        with open(args.field_file, encoding="utf-8") as handle:
            text = handle.read()
        field = parse_field(text, args.dim)
        source = {"kind": "file", "path": args.field_file, "text": text}
    if args.shift is not None:
        offset = _parse_floats(args.shift, "--shift")
        field = ShiftedField(field, offset)
        source = {"kind": "shift", "offset": offset, "inner": source}
    return field, source


def _resolve_points(args, field):
    given = [
        flag
        for flag, value in (("--at", args.at), ("--points-file", args.points_file))
        if value is not None
    ]
    if args.sample is not None:
        given.append("--sample")
    if len(given) > 1:
        raise UsageError("use only one of --at, --points-file, --sample")
    if args.at is not None:
        point = _parse_floats(args.at, "--at")
        pts = np.array([point])
        spec = {"kind": "at", "point": point}
    elif args.points_file is not None:
        rows = []
        with open(args.points_file, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    rows.append(_parse_floats(line, "points file line"))
        if not rows:
            raise UsageError(f"points file {args.points_file!r} contains no points")
        pts = np.array(rows)
        spec = {"kind": "file", "path": args.points_file, "count": len(rows)}
    else:
        count = args.sample if args.sample is not None else 10
        pts = ball_points(field.dimension, count, args.sample_radius, args.seed)
        spec = {
            "kind": "sample",
            "count": count,
            "radius": args.sample_radius,
            "seed": args.seed,
        }
    if pts.shape[1] != field.dimension:
        raise DimensionMismatchError(
            f"points have dimension {pts.shape[1]}, field has {field.dimension}"
        )
    return pts, spec


def _jsonify(obj):
    if isinstance(obj, dict):
        return {key: _jsonify(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(item) for item in obj]
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _emit(report, args, elapsed):
    report["timing"] = {"seconds": elapsed}
    text = json.dumps(_jsonify(report), indent=2, sort_keys=True) + "\n"
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _quad_config(args):
    return QuadratureConfig(
        order=args.quad_order,
        abs_tol=args.abs_tol,
        rel_tol=args.rel_tol,
        max_subdivisions=args.max_subdivisions,
    )


def _base_report(command, field, source, config):
    return {
        "report_version": 1,
        "tool": {"name": "presnov", "version": __version__},
        "command": command,
        "field": {"label": field.label, "dimension": field.dimension, "source": source},
        "config": config,
        "warnings": [],
    }


def _cmd_decompose(args):
    field, source = _build_field(args)
    points, points_spec = _resolve_points(args, field)
    quad = _quad_config(args)
    config = {
        "points": points_spec,
        "quadrature": vars(quad) | {},
        "threshold": args.threshold,
        "seed": args.seed,
    }
    report = _base_report("decompose", field, source, config)

    split = decompose_many(field, points, quad)
    verification = verify_decomposition(field, points, quad, threshold=args.threshold)
    report["payload"] = {
        "samples": [
            {
                "point": split.points[i],
                "potential": split.potentials[i],
                "potential_error": split.potential_errors[i],
                "conservative": split.conservative[i],
                "sphere_invariant": split.sphere_invariant[i],
                "orthogonality_residual": split.orthogonality_residuals[i],
                "radial_equality_residual": split.radial_equality_residuals[i],
                "estimated_error": split.estimated_errors[i],
            }
            for i in range(points.shape[0])
        ],
        "verification": verification.as_dict(),
    }
    print(
        f"decompose: {points.shape[0]} point(s), "
        f"max |<u,x>| (normalized) = {verification.max_orthogonality:.3e}, "
        f"verification {'PASS' if verification.passed else 'FAIL'}",
        file=sys.stderr,
    )
    return report, EXIT_OK if verification.passed else EXIT_IDENTITY


def _probe_payload(probe_report):
    payload = {
        "field": probe_report.field_label,
        "radii": probe_report.radii,
        "min_per_radius": probe_report.min_per_radius,
        "profiles": probe_report.profiles,
        "verdict": probe_report.verdict,
        "note": probe_report.note,
    }
    if probe_report.witness is not None:
        witness = probe_report.witness
        payload["witness"] = {
            "kind": witness.kind,
            "direction": witness.direction,
            "radii": witness.radii,
            "profile": witness.profile,
            "point": witness.point,
        }
    return payload


def _cmd_coercivity(args):
    field, source = _build_field(args)
    probe_cfg = ProbeConfig(
        initial_radius=args.initial_radius,
        radius_factor=args.radius_factor,
        radius_count=args.radius_count,
        directions=args.directions,
        seed=args.seed,
        growth_floor_factor=args.growth_floor,
    )
    quad = _quad_config(args)
    config = {
        "probe": {
            "initial_radius": probe_cfg.initial_radius,
            "radius_factor": probe_cfg.radius_factor,
            "radius_count": probe_cfg.radius_count,
            "directions": probe_cfg.direction_count(field.dimension),
            "seed": probe_cfg.seed,
            "growth_floor_factor": probe_cfg.growth_floor_factor,
            "flat_tol": probe_cfg.flat_tol,
        },
        "quadrature": vars(quad) | {},
        "seed": args.seed,
    }
    report = _base_report("coercivity", field, source, config)
    paired = paired_probe(field, probe_cfg, quad)
    report["payload"] = {
        "field_probe": _probe_payload(paired.field_report),
        "conservative_probe": _probe_payload(paired.conservative_report),
        "max_profile_discrepancy": paired.max_profile_discrepancy,
        "max_profile_discrepancy_absolute": paired.max_profile_discrepancy_absolute,
        "verdicts_agree": paired.verdicts_agree,
    }
    print(
        f"coercivity: field verdict = {paired.field_report.verdict}, "
        f"conservative verdict = {paired.conservative_report.verdict}, "
        f"max discrepancy = {paired.max_profile_discrepancy:.3e}",
        file=sys.stderr,
    )
    if not paired.verdicts_agree:
        report["warnings"].append(
            "verdicts for the field and its conservative part disagree; this "
            "violates the radial equality and indicates an internal defect"
        )
        return report, EXIT_IDENTITY
    return report, EXIT_OK


def _equilibrium_payload(result):
    payload = {
        "point": result.point,
        "residual": result.residual,
        "success": result.success,
        "target": result.target,
        "ball_radius": result.ball_radius,
        "inside_ball": result.inside_ball,
        "starts_attempted": result.starts_attempted,
        "iterations": result.iterations,
        "degenerate": result.degenerate,
        "certificate_overridden": result.certificate_overridden,
        "warnings": list(result.warnings),
    }
    if result.minimizer_check is not None:
        payload["minimizer_check"] = result.minimizer_check
    return payload


def _cmd_equilibria(args):
    field, source = _build_field(args)
    if (args.radius is None) == (args.perturb is None):
        raise UsageError("specify exactly one of --radius or --perturb")
    quad = _quad_config(args)
    solver = SolverConfig(
        residual_tol=args.solver_tol,
        max_iterations=args.max_iterations,
        multistart=args.multistart,
        seed=args.seed,
    )
    config = {
        "solver": {
            "residual_tol": solver.residual_tol,
            "max_iterations": solver.max_iterations,
            "multistart": solver.multistart,
            "seed": solver.seed,
        },
        "quadrature": vars(quad) | {},
        "certificate_samples": args.cert_samples,
        "certificate_threshold": args.cert_threshold,
        "seed": args.seed,
    }
    report = _base_report("equilibria", field, source, config)

    if args.radius is not None:
        config["radius"] = args.radius
        certificate = boundary_certificate(
            field,
            args.radius,
            samples=args.cert_samples,
            seed=args.seed,
            threshold=args.cert_threshold,
            quadrature=quad,
        )
        report["payload"] = {"certificate": certificate.as_dict()}
        if not certificate.passed and not args.allow_uncertified:
            report["warnings"].append(
                f"certificate failed at radius {args.radius}: "
                f"min radial value {certificate.min_radial:.6g}"
            )
            print(
                f"equilibria: certificate FAIL at r={args.radius} "
                f"(min radial {certificate.min_radial:.3e})",
                file=sys.stderr,
            )
            return report, EXIT_CERTIFICATE
        result_x = find_equilibrium(
            field, args.radius, solver, certificate=certificate,
            allow_uncertified=args.allow_uncertified, quadrature=quad,
        )
        result_g = find_equilibrium_conservative(
            field, args.radius, solver, quadrature=quad, certificate=certificate,
            allow_uncertified=args.allow_uncertified,
        )
        report["payload"]["field_equilibrium"] = _equilibrium_payload(result_x)
        report["payload"]["conservative_equilibrium"] = _equilibrium_payload(result_g)
        ok = result_x.success and result_g.success
        print(
            f"equilibria: field solve {'ok' if result_x.success else 'FAILED'} "
            f"(residual {result_x.residual:.3e}), conservative solve "
            f"{'ok' if result_g.success else 'FAILED'} (residual {result_g.residual:.3e})",
            file=sys.stderr,
        )
        return report, EXIT_OK if ok else EXIT_NUMERIC

    offset = _parse_floats(args.perturb, "--perturb")
    config["perturb"] = offset
    config["margin_fraction"] = args.margin_fraction
    config["max_radius_exponent"] = args.max_radius_exponent
    outcome = perturbed_existence(
        field,
        offset,
        solver,
        quadrature=quad,
        max_radius_exponent=args.max_radius_exponent,
        margin_fraction=args.margin_fraction,
        certificate_samples=args.cert_samples,
        threshold=args.cert_threshold,
    )
    report["warnings"].extend(outcome.warnings)
    report["payload"] = {
        "rho": outcome.rho,
        "certificate": outcome.certificate.as_dict(),
        "probe_verdict": outcome.probe.verdict,
        "field_equilibrium": _equilibrium_payload(outcome.field_result),
        "conservative_equilibrium": _equilibrium_payload(outcome.conservative_result),
    }
    ok = outcome.field_result.success and outcome.conservative_result.success
    print(
        f"equilibria: rho = {outcome.rho}, field solve "
        f"{'ok' if outcome.field_result.success else 'FAILED'}, conservative solve "
        f"{'ok' if outcome.conservative_result.success else 'FAILED'}",
        file=sys.stderr,
    )
    return report, EXIT_OK if ok else EXIT_NUMERIC


def _add_field_arguments(parser):
    group = parser.add_argument_group("field definition")
    group.add_argument("--catalog", help="catalog entry name")
    group.add_argument("--expr", help="field DSL source text")
    group.add_argument("--field-file", help="path to a UTF-8 field DSL file")
    group.add_argument("--dim", type=int, help="field dimension (inferred when possible)")
    group.add_argument("--matrix", help="row-major matrix entries for --catalog linear")
    group.add_argument("--vector", help="vector entries for --catalog constant")
    group.add_argument("--coeffs", help="rows 'a,b,c,d;...' for --catalog gradient_poly")
    group.add_argument("--shift", help="constant vector added to the field")


def _add_common_arguments(parser):
    parser.add_argument("--seed", type=int, default=0, help="seed for all randomness")
    parser.add_argument("--out", help="write the JSON report to this file")
    parser.add_argument("--quad-order", type=int, default=16)
    parser.add_argument("--abs-tol", type=float, default=1e-10)
    parser.add_argument("--rel-tol", type=float, default=1e-10)
    parser.add_argument("--max-subdivisions", type=int, default=4096)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="presnov",
        description=(
            "Split vector fields into conservative and sphere-invariant parts, "
            "probe coercivity, and locate equilibria inside certified balls."
        ),
    )
    parser.add_argument("--version", action="version", version=f"presnov {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="split a field and verify the identities")
    _add_field_arguments(p_dec)
    _add_common_arguments(p_dec)
    p_dec.add_argument("--at", help="single point, comma-separated coordinates")
    p_dec.add_argument("--points-file", help="file with one comma-separated point per line")
    p_dec.add_argument("--sample", type=int, help="number of seeded sample points")
    p_dec.add_argument("--sample-radius", type=float, default=1.0)
    p_dec.add_argument("--threshold", type=float, default=1e-6,
                       help="verification pass threshold on normalized residuals")
    p_dec.set_defaults(handler=_cmd_decompose)

    p_coe = sub.add_parser("coercivity", help="paired coercivity probe")
    _add_field_arguments(p_coe)
    _add_common_arguments(p_coe)
    p_coe.add_argument("--initial-radius", type=float, default=1.0)
    p_coe.add_argument("--radius-factor", type=float, default=2.0)
    p_coe.add_argument("--radius-count", type=int, default=12)
    p_coe.add_argument("--directions", type=int, default=None)
    p_coe.add_argument("--growth-floor", type=float, default=4.0)
    p_coe.set_defaults(handler=_cmd_coercivity)

    p_eq = sub.add_parser("equilibria", help="certify a ball and locate equilibria")
    _add_field_arguments(p_eq)
    _add_common_arguments(p_eq)
    p_eq.add_argument("--radius", type=float, help="ball radius to certify and search")
    p_eq.add_argument("--perturb", help="constant vector b for the perturbation workflow")
    p_eq.add_argument("--solver-tol", type=float, default=1e-10)
    p_eq.add_argument("--max-iterations", type=int, default=200)
    p_eq.add_argument("--multistart", type=int, default=32)
    p_eq.add_argument("--cert-samples", type=int, default=None)
    p_eq.add_argument("--cert-threshold", type=float, default=0.0)
    p_eq.add_argument("--allow-uncertified", action="store_true")
    p_eq.add_argument("--margin-fraction", type=float, default=0.1)
    p_eq.add_argument("--max-radius-exponent", type=int, default=40)
    p_eq.set_defaults(handler=_cmd_equilibria)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        report, code = args.handler(args)
    except (ParseError, CatalogError, UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NoCertifiedRadiusError, CertificateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATE
    except (QuadratureError, NonFiniteValueError, DomainError, DimensionMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(report, args, time.perf_counter() - started)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
