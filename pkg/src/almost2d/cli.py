"""Command-line front end for construction, norms, criteria, simulation,
sweeps, and whole-space quadrature.

Exit codes: 0 success, 1 domain error (message names the violated
precondition), 2 I/O error.  All randomized inputs derive from --seed and
identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import criteria, families, fieldio, norms, solver, wholespace
from .field import SpectralVectorField, curl
from .grid import GridSpec

FLOAT_FMT = "%.12e"


def _fmt(x: float) -> str:
    return FLOAT_FMT % x


def _emit(args, payload: dict, csv_rows: list[dict] | None = None) -> None:
    """Write JSON (default) or CSV to --output or stdout."""
    if args.format == "csv":
        rows = csv_rows if csv_rows is not None else [payload]
        header = list(rows[0].keys())
        lines = [",".join(header)]
        for row in rows:
            lines.append(
                ",".join(
                    _fmt(v) if isinstance(v, float) else str(v)
                    for v in (row[h] for h in header)
                )
            )
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(_sanitize(payload), indent=2, default=_json_default) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _sanitize(obj):
    """Strict JSON has no inf/nan; replace them with strings."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return repr(float(obj))
    return obj


def _cmd_constants(args) -> int:
    c = criteria.constants()
    _emit(
        args,
        {
            "c1": c.c1,
            "c2": c.c2,
            "r1": c.r1,
            "r2": c.r2,
            "small_data_threshold_coeff": c.small_data_threshold_coeff,
            "constants_version": criteria.CONSTANTS_VERSION,
        },
    )
    return 0


def _cmd_norms(args) -> int:
    u = fieldio.read_field(args.field)
    w = curl(u)
    parts = norms.horizontal_parts(u)
    payload = {
        "n": u.grid.n,
        "l2": norms.lebesgue_norm(u, 2),
        "hhalf": norms.sobolev_norm(u, 0.5),
        "h1": norms.sobolev_norm(u, 1.0),
        "energy": 0.5 * norms.lebesgue_norm(u, 2) ** 2,
        "enstrophy": 0.5 * norms.sobolev_norm(w, 0) ** 2,
        "omega_h_hminushalf": norms.sobolev_norm(parts.omega_h, -0.5),
        "omega_l2": norms.sobolev_norm(w, 0),
    }
    _emit(args, payload)
    return 0


def _cmd_check(args) -> int:
    u = fieldio.read_field(args.field)
    w = curl(u)
    K0 = 0.5 * norms.lebesgue_norm(u, 2) ** 2
    E0 = 0.5 * norms.sobolev_norm(w, 0) ** 2
    reports = [
        criteria.small_data_check(K0, E0, args.nu),
        criteria.gamma2d_check(u, args.nu),
        criteria.gamma2d_lp_check(w, args.nu),
    ]
    if args.iftimie_c is not None:
        reports.append(criteria.iftimie_check(u, args.nu, args.iftimie_c))
    _emit(args, {"nu": args.nu, "reports": [r.as_dict() for r in reports]})
    return 0


_FAMILIES = ("taylor-green", "un", "large-almost-2d", "annulus-analog", "random")


def _construct_field(args) -> SpectralVectorField:
    grid = GridSpec(args.n)
    if args.family == "taylor-green":
        return families.taylor_green_2d(grid, args.amplitude)
    if args.family == "un":
        return families.un_family(args.index, grid)
    if args.family == "large-almost-2d":
        return families.large_almost_2d(args.index, grid)
    if args.family == "annulus-analog":
        return families.annulus_analog(args.index, grid)
    return families.random_divergence_free(grid, args.seed, amplitude=args.amplitude)


def _closed_form_sidecar(args, u: SpectralVectorField) -> dict:
    """Closed-form norms, where the family states them, next to grid values."""
    w = curl(u)
    parts = norms.horizontal_parts(u)
    computed = {
        "energy": 0.5 * norms.lebesgue_norm(u, 2) ** 2,
        "enstrophy": 0.5 * norms.sobolev_norm(w, 0) ** 2,
        "hhalf_sq": norms.sobolev_norm(u, 0.5) ** 2,
        "omega_h_hminushalf": norms.sobolev_norm(parts.omega_h, -0.5),
    }
    closed: dict[str, float] = {}
    if args.family == "taylor-green":
        closed = {
            "energy": args.amplitude**2 / 4.0,
            "enstrophy": 2 * math.pi**2 * args.amplitude**2,
            "omega_h_hminushalf": 0.0,
        }
    elif args.family == "un":
        closed = {
            "hhalf_sq": args.index**2 + 2.0,
            "omega_h_hminushalf": 1.0,
        }
    sidecar = {"family": args.family, "computed": computed, "closed_form": closed}
    if args.family == "random":
        sidecar["seed"] = args.seed
    return sidecar


def _cmd_construct(args) -> int:
    u = _construct_field(args)
    fieldio.write_field(args.output, u)
    sidecar = _closed_form_sidecar(args, u)
    with open(args.output + ".norms.json", "w") as fh:
        json.dump(_sanitize(sidecar), fh, indent=2, default=_json_default)
        fh.write("\n")
    return 0


def _parse_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}: malformed config line {line!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip()
    return values


def _cmd_simulate(args) -> int:
    file_cfg = _parse_config_file(args.config) if args.config else {}

    def pick(flag_value, key, cast, default):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return cast(file_cfg[key])
        if default is None:
            raise ValueError(f"missing solver parameter {key}")
        return default

    u0 = fieldio.read_field(args.initial)
    cfg = solver.SolverConfig(
        grid=u0.grid,
        nu=pick(args.nu, "nu", float, None),
        dt=pick(args.dt, "dt", float, None),
        t_end=pick(args.t_end, "t_end", float, None),
        dealias=pick(args.dealias, "dealias", str, "two_thirds").replace("-", "_"),
        record_stride=int(file_cfg.get("record_stride", 1)),
        blowup_threshold=float(file_cfg.get("blowup_threshold", 1e8)),
    )
    series = solver.run(u0, cfg)
    series.to_csv(args.output)
    summary = dict(series.summary)
    summary["status"] = series.status
    summary["steps_recorded"] = len(series.t)
    with open(args.output + ".summary.json", "w") as fh:
        json.dump(_sanitize(summary), fh, indent=2, default=_json_default)
        fh.write("\n")
    return 0


def _cmd_sweep(args) -> int:
    grid = GridSpec(args.n_grid)
    rows = []
    if args.family == "annulus-analog":
        for n in args.n:
            w = families.annulus_analog(n, grid)  # the family is a vorticity
            K0 = 0.5 * norms.sobolev_norm(w, -1.0) ** 2
            E0 = 0.5 * norms.sobolev_norm(w, 0.0) ** 2
            omega_h = w.copy()
            omega_h.coeffs[2] = 0.0
            omh = norms.sobolev_norm(omega_h, -0.5)
            criterion = omh * math.exp(
                K0 * E0 / (criteria.constants().r2 * args.nu**3)
            )
            besov = norms.besov_norm(w, 0.5, 2.0).value
            rows.append(
                {
                    "n": n,
                    "omega_h_hminushalf": omh,
                    "KE_product": K0 * E0,
                    "criterion_quantity": criterion,
                    "besov_half": besov,
                }
            )
    elif args.family == "un":
        for n in args.n:
            u = families.un_family(n, grid)
            parts = norms.horizontal_parts(u)
            rows.append(
                {
                    "n": n,
                    "hhalf_sq": norms.sobolev_norm(u, 0.5) ** 2,
                    "omega_h_hminushalf": norms.sobolev_norm(parts.omega_h, -0.5),
                }
            )
    elif args.family == "rescaled":
        base = families.helical_base_vorticity(grid)
        for m in args.m:
            r = families.rescaled_vorticity(base, m, args.a)
            report = criteria.gamma2d_lp_from_norms(
                r.component_lebesgue_norm("horizontal", 1.5),
                r.lebesgue_norm(1.2),
                r.lebesgue_norm(2.0),
                args.nu,
            )
            rows.append(
                {
                    "m": m,
                    "omega_h_l32": r.component_lebesgue_norm("horizontal", 1.5),
                    "omega3_l32": r.component_lebesgue_norm("vertical", 1.5),
                    "criterion_log_lhs": report.inputs["log_lhs"],
                }
            )
    else:
        raise ValueError(f"unknown sweep family {args.family!r}")
    _emit(args, {"rows": rows}, csv_rows=rows)
    return 0


def _cmd_wholespace(args) -> int:
    quad = wholespace.QuadratureSpec(
        radial_nodes=args.nodes, vertical_nodes=args.nodes
    )
    rows = []
    if args.table == "lambda-n":
        for n in args.n:
            rows.append(wholespace.lambda_n_report(n, quad, nu=args.nu).as_dict())
    elif args.table == "embedding":
        for p in args.p:
            pv = math.inf if p == "inf" else float(p)
            row = {"p": p, "embedding_constant": wholespace.besov_embedding_constant(pv, quad)}
            if args.eps is not None:
                cone = wholespace.cone_embedding_constant(pv, args.eps, quad)
                row.update({"eps": args.eps, "cone_direct": cone.direct,
                            "cone_majorant": cone.majorant})
            rows.append(row)
    elif args.table == "heat-kernel":
        report = wholespace.heat_kernel_constants(quad)
        rows = [{"grad_g_l1": report.grad_g_l1, "curl_bound_holds": report.all_hold}]
    else:
        raise ValueError(f"unknown wholespace table {args.table!r}")
    _emit(args, {"rows": rows}, csv_rows=rows)
    return 0


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="almost2d",
        description="Periodic-box Navier-Stokes toolkit: norms, criteria, "
        "families, simulation, and whole-space constants.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None)

    p = sub.add_parser("constants", help="sharp constants as a document")
    common(p)
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("norms", help="norm battery for a field file")
    p.add_argument("field")
    common(p)
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser("check", help="criterion reports for a field file")
    p.add_argument("field")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument(
        "--iftimie-c",
        dest="iftimie_c",
        type=float,
        default=None,
        help="also run the 2D-perturbation criterion with this constant",
    )
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("construct", help="generate a family field file")
    p.add_argument("family", choices=_FAMILIES)
    p.add_argument("--n", type=int, default=32, help="grid points per axis")
    p.add_argument("--index", type=int, default=1, help="family index")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("simulate", help="integrate an initial field file")
    p.add_argument("--config", default=None, help="key=value solver config file")
    p.add_argument("--initial", required=True)
    p.add_argument("--output", required=True, help="CSV path (summary JSON beside it)")
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.add_argument("--dealias", choices=("two-thirds", "none"), default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="family sweeps with criterion columns")
    p.add_argument("family", choices=("annulus-analog", "un", "rescaled"))
    p.add_argument("--n", type=_int_list, default=[3, 6, 12])
    p.add_argument("--m", type=_int_list, default=[2, 4, 8])
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--n-grid", dest="n_grid", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("wholespace", help="quadrature constant tables")
    p.add_argument("table", choices=("lambda-n", "embedding", "heat-kernel"))
    p.add_argument("--n", type=_int_list, default=[3, 10, 100])
    p.add_argument("--p", type=lambda s: s.split(","), default=["4", "6", "inf"])
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--nu", type=float, default=1.0)
    p.add_argument("--nodes", type=int, default=128)
    common(p)
    p.set_defaults(func=_cmd_wholespace)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
