"""Command-line front end: every computation as a reproducible command.

Subcommands
    phi         table of phi, phi', phi'' and the linear-ODE residual
    constants   per-lambda critical constants or the lambda(sigma) map
    solution    profile of the glued solution H (exit 4 when none exists)
    pde-verify  solver vs closed form at dx and dx/2 with the observed order
    capacity    capacity cells: closed-form bounds plus PDE sandwich
    order       log-log sharp-order fit over an epsilon list

Output is CSV (default) or JSON, with a metadata line carrying the tool
version and a hash of the effective configuration; identical invocations
produce byte-identical output.  Numbers are written with 17 significant
digits, '.' decimal point, no locale.  --plot renders a matplotlib figure
next to the delimited output.

Exit codes: 0 ok, 2 parameter/usage error, 3 numeric failure, 4 requested
(lambda, sigma) outside the solvable range.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .capacity import capacity_report, order_fit
from .critical_points import critical_points, lambda_of_sigma
from .crosscheck import pde_verify
from .errors import GHeatError, InvalidParameter, RangeError
from .quadrature import QuadratureConfig
from .solutions import build_H, eval_H, ode_residual
from .special_functions import phi_bundle

_CONFIG_KEYS = ("abs_tol", "root_tol", "dx", "cfl", "domain_factor",
                "format", "outdir", "seed")


@dataclass
class RunConfig:
    """Effective tolerances, grid defaults and output settings of one run."""

    abs_tol: float = 1e-12
    root_tol: float = 1e-10
    dx: float = 0.01
    cfl: float = 0.4
    domain_factor: float = 6.0
    format: str = "csv"
    outdir: str = ""
    seed: int = 0

    def __post_init__(self):
        if self.abs_tol <= 0 or self.root_tol <= 0 or self.dx <= 0:
            raise InvalidParameter("tolerances and dx must be positive")
        if self.format not in ("csv", "json"):
            raise InvalidParameter("format must be 'csv' or 'json'")

    @property
    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(abs_tol=self.abs_tol)

    def hash(self) -> str:
        text = ",".join(f"{k}={getattr(self, k)}" for k in _CONFIG_KEYS)
        return hashlib.sha256(text.encode()).hexdigest()[:12]


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_text(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        items = ",\n".join(f'{pad}  "{k}": {_json_text(v, indent + 1).lstrip()}'
                           for k, v in obj.items())
        return f"{pad}{{\n{items}\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        items = ",\n".join(f"{pad}  {_json_text(v, indent + 1).lstrip()}"
                           for v in obj)
        return f"{pad}[\n{items}\n{pad}]"
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if isinstance(obj, float):
        if math.isnan(obj):
            return pad + "null"
        return pad + format(obj, ".17g")
    if isinstance(obj, int):
        return pad + str(obj)
    if obj is None:
        return pad + "null"
    return pad + json.dumps(str(obj))


def _emit(rows, columns, cfg: RunConfig, out, extra_meta: dict | None = None):
    meta = {"tool": "gheat", "version": __version__, "config_hash": cfg.hash()}
    if extra_meta:
        meta.update(extra_meta)
    if cfg.format == "json":
        payload = {"meta": meta, "rows": [dict(r) for r in rows]}
        out.write(_json_text(payload) + "\n")
    else:
        meta_txt = " ".join(f"{k}={_fmt(v)}" for k, v in meta.items())
        out.write(f"# {meta_txt}\n")
        out.write(",".join(columns) + "\n")
        for r in rows:
            out.write(",".join(_fmt(r[c]) for c in columns) + "\n")


def _parse_grid(text: str) -> list[float]:
    """Either 'lo:hi:step' or a comma-separated list."""
    if ":" in text:
        lo, hi, step = (float(p) for p in text.split(":"))
        if step <= 0 or hi < lo:
            raise InvalidParameter(f"bad grid spec {text!r}")
        vals = []
        v = lo
        while v <= hi + 1e-12:
            vals.append(round(v, 12))
            v += step
        return vals
    return [float(p) for p in text.split(",") if p]


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidParameter(f"{path}:{ln}: expected key=value")
            key, val = (p.strip() for p in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise InvalidParameter(f"{path}:{ln}: unknown key {key!r}")
            values[key] = val
    return values


def _build_runconfig(args) -> RunConfig:
    values: dict = {}
    if os.environ.get("GHEAT_OUTDIR"):
        values["outdir"] = os.environ["GHEAT_OUTDIR"]
    if getattr(args, "config", None):
        values.update(_read_config_file(args.config))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    for key in ("abs_tol", "root_tol", "dx", "cfl", "domain_factor"):
        if key in values:
            values[key] = float(values[key])
    if "seed" in values:
        values["seed"] = int(values["seed"])
    return RunConfig(**values)


def _open_output(args, cfg: RunConfig):
    path = getattr(args, "output", None)
    if path in (None, "-"):
        return sys.stdout, None
    if cfg.outdir and not os.path.isabs(path):
        path = os.path.join(cfg.outdir, path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    return open(path, "w"), path


def _plot_path(args, cfg: RunConfig, out_path, default_stem: str):
    if not getattr(args, "plot", False):
        return None
    if out_path:
        return os.path.splitext(out_path)[0] + ".png"
    name = default_stem + ".png"
    return os.path.join(cfg.outdir, name) if cfg.outdir else name


def _resolve_lambda(args, cfg: RunConfig) -> float:
    if str(args.lam) == "auto":
        if getattr(args, "sigma", None) is None:
            raise InvalidParameter("--lambda auto requires --sigma")
        return lambda_of_sigma(args.sigma, cfg.root_tol, cfg.quadrature)
    return float(args.lam)


def _cmd_phi(args, cfg: RunConfig) -> int:
    lam = float(args.lam)
    if args.x is not None:
        xs = [args.x]
    else:
        xs = _parse_grid(f"{args.x_min}:{args.x_max}:{args.step}")
    rows = []
    for x in xs:
        e = phi_bundle(lam, x, cfg.quadrature)
        rows.append({"x": x, "phi": e.phi, "d1": e.d1, "d2": e.d2,
                     "ode_residual": e.ode_residual(lam, x)})
    out, out_path = _open_output(args, cfg)
    _emit(rows, ("x", "phi", "d1", "d2", "ode_residual"), cfg, out,
          {"lambda": lam})
    if out_path:
        out.close()
    ppath = _plot_path(args, cfg, out_path, f"phi_lambda_{lam:g}")
    if ppath:
        from .plots import save_phi_plot
        save_phi_plot(rows, ppath)
    return 0


def _cmd_constants(args, cfg: RunConfig) -> int:
    rows = []
    if args.sigma_grid:
        columns = ("sigma", "lambda_sigma", "two_lambda_sigma", "half_sigma_sq")
        for s in _parse_grid(args.sigma_grid):
            ls = lambda_of_sigma(s, cfg.root_tol, cfg.quadrature)
            rows.append({"sigma": s, "lambda_sigma": ls,
                         "two_lambda_sigma": 2.0 * ls,
                         "half_sigma_sq": 0.5 * s * s})
        stem = "constants_sigma"
    else:
        if not args.lambda_grid:
            raise InvalidParameter("give --lambda-grid or --sigma-grid")
        columns = ("lambda", "x1", "x2", "z", "sigma_lambda")
        for lam in _parse_grid(args.lambda_grid):
            cp = critical_points(lam, cfg.root_tol, cfg.quadrature)
            rows.append({"lambda": lam, "x1": cp.x1, "x2": cp.x2, "z": cp.z,
                         "sigma_lambda": cp.sigma_lambda})
        stem = "constants_lambda"
    out, out_path = _open_output(args, cfg)
    _emit(rows, columns, cfg, out)
    if out_path:
        out.close()
    ppath = _plot_path(args, cfg, out_path, stem)
    if ppath:
        from .plots import save_constants_plot
        save_constants_plot(rows, ppath)
    return 0


def _cmd_solution(args, cfg: RunConfig) -> int:
    lam = _resolve_lambda(args, cfg)
    sol = build_H(lam, args.sigma, cfg.root_tol, cfg.quadrature)
    xs = _parse_grid(f"{args.x_min}:{args.x_max}:{args.step}")
    rows = []
    for x in xs:
        rows.append({"x": x,
                     "H": eval_H(sol, x, 0, cfg.quadrature),
                     "d1": eval_H(sol, x, 1, cfg.quadrature),
                     "d2": eval_H(sol, x, 2, cfg.quadrature),
                     "ode_residual": ode_residual(sol, x, cfg.quadrature)})
    out, out_path = _open_output(args, cfg)
    _emit(rows, ("x", "H", "d1", "d2", "ode_residual"), cfg, out,
          {f"solution_{k}": v for k, v in sol.as_dict().items()})
    if out_path:
        out.close()
    ppath = _plot_path(args, cfg, out_path,
                       f"solution_s{args.sigma:g}_l{lam:g}")
    if ppath:
        from .plots import save_solution_plot
        save_solution_plot(rows, sol, ppath)
    return 0


def _cmd_pde_verify(args, cfg: RunConfig) -> int:
    lam = None if str(args.lam) == "auto" else float(args.lam)
    results = []
    for dx in (cfg.dx, cfg.dx / 2.0):
        results.append(pde_verify(args.sigma, t=args.t, dx=dx, lam=lam,
                                  domain_factor=cfg.domain_factor,
                                  config=cfg.quadrature))
    order = math.log2(results[0]["max_error"] / results[1]["max_error"])
    rows = [dict(r, order=(order if i == 1 else math.nan))
            for i, r in enumerate(results)]
    out, out_path = _open_output(args, cfg)
    _emit(rows, ("sigma", "lambda", "t", "dx", "window", "max_error", "h0",
                 "rel_error", "order"), cfg, out)
    if out_path:
        out.close()
    ppath = _plot_path(args, cfg, out_path, f"pde_verify_s{args.sigma:g}")
    if ppath:
        from .plots import save_pde_verify_plot
        save_pde_verify_plot(results, ppath)
    return 0


def _cmd_capacity(args, cfg: RunConfig) -> int:
    reports = [capacity_report(args.sigma, e, t=args.t, dx_target=cfg.dx,
                               domain_factor=cfg.domain_factor,
                               tol=cfg.root_tol, config=cfg.quadrature)
               for e in _parse_grid(args.eps)]
    rows = [r.as_dict() for r in reports]
    out, out_path = _open_output(args, cfg)
    _emit(rows, ("sigma", "epsilon", "upper_bound_closed",
                 "widened_half_width", "lower_bound_at_widened",
                 "sandwich_lower", "sandwich_upper", "ramp_delta",
                 "point_estimate"), cfg, out)
    if out_path:
        out.close()
    ppath = _plot_path(args, cfg, out_path, f"capacity_s{args.sigma:g}")
    if ppath:
        from .plots import save_capacity_plot
        save_capacity_plot(reports, ppath)
    return 0


def _cmd_order(args, cfg: RunConfig) -> int:
    fit = order_fit(args.sigma, _parse_grid(args.eps), t=args.t,
                    dx_target=cfg.dx, domain_factor=cfg.domain_factor,
                    tol=cfg.root_tol, config=cfg.quadrature)
    row = {"sigma": fit.sigma,
           "estimated_exponent": fit.estimated_exponent,
           "target_exponent": fit.target_exponent,
           "r2": fit.r2,
           "n_points": len(fit.epsilons)}
    out, out_path = _open_output(args, cfg)
    if cfg.format == "json":
        _emit([dict(row, epsilons=list(fit.epsilons),
                    capacities=list(fit.capacities))],
              (), cfg, out)
    else:
        _emit([row], ("sigma", "estimated_exponent", "target_exponent",
                      "r2", "n_points"), cfg, out)
    if out_path:
        out.close()
    ppath = _plot_path(args, cfg, out_path, f"order_s{args.sigma:g}")
    if ppath:
        from .plots import save_order_plot
        save_order_plot(fit, ppath)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gheat",
        description="Explicit solutions and interval capacities of the "
                    "G-heat (Barenblatt) equation.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--output", "-o", default=None,
                       help="output file ('-' or omitted: stdout)")
        p.add_argument("--plot", action="store_true",
                       help="render a PNG figure next to the output")
        p.add_argument("--config", default=None,
                       help="key=value config file; flags take precedence")
        p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
        p.add_argument("--root-tol", dest="root_tol", type=float, default=None)
        p.add_argument("--dx", type=float, default=None)
        p.add_argument("--cfl", type=float, default=None)
        p.add_argument("--domain-factor", dest="domain_factor", type=float,
                       default=None)
        p.add_argument("--outdir", default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("phi", help="special function table")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--x-min", type=float, default=-3.0)
    p.add_argument("--x-max", type=float, default=3.0)
    p.add_argument("--step", type=float, default=0.1)
    common(p)
    p.set_defaults(fn=_cmd_phi)

    p = sub.add_parser("constants", help="critical constants tables")
    p.add_argument("--lambda-grid", dest="lambda_grid", default=None,
                   help="lo:hi:step or comma list")
    p.add_argument("--sigma-grid", dest="sigma_grid", default=None)
    common(p)
    p.set_defaults(fn=_cmd_constants)

    p = sub.add_parser("solution", help="glued solution profile")
    p.add_argument("--lambda", dest="lam", default="auto",
                   help="decay exponent, or 'auto' for lambda(sigma)")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--x-min", type=float, default=-4.0)
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--step", type=float, default=0.05)
    common(p)
    p.set_defaults(fn=_cmd_solution)

    p = sub.add_parser("pde-verify", help="solver vs closed form")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", default="auto")
    p.add_argument("--t", type=float, default=1.0)
    common(p)
    p.set_defaults(fn=_cmd_pde_verify)

    p = sub.add_parser("capacity", help="capacity cells with bounds")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--eps", required=True, help="comma list of half-widths")
    p.add_argument("--t", type=float, default=1.0)
    common(p)
    p.set_defaults(fn=_cmd_capacity)

    p = sub.add_parser("order", help="sharp-order log-log fit")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--eps", required=True, help="comma list, one decade, < 0.5")
    p.add_argument("--t", type=float, default=1.0)
    common(p)
    p.set_defaults(fn=_cmd_order)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_runconfig(args)
        return args.fn(args, cfg)
    except RangeError as exc:
        print(f"gheat: range error: {exc}", file=sys.stderr)
        return 4
    except InvalidParameter as exc:
        print(f"gheat: parameter error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"gheat: {exc}", file=sys.stderr)
        return 2
    except GHeatError as exc:
        print(f"gheat: numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
