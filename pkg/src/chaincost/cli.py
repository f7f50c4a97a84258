"""Command-line interface.

Subcommands cover the library surface: strategy cost comparison, building
and re-expressing uniform descriptions, critical curves and superiority
surfaces, regime classification, unit-level simulation, and the figure
data bundle. Delimited output is CSV (period decimal separator, LF line
endings) with a single provenance comment line above the header; record
output is JSON with an embedded provenance object.

Exit codes: 0 on success, 1 on configuration or usage errors, 2 when
--strict is set and the numeric solver fails to converge.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import __version__
from .chain import Chain, Reputation, Strategy, cost_breakdown
from .config import (
    chain_to_config,
    config_sha256,
    homogenized_from_dict,
    homogenized_to_dict,
    load_config,
)
from .critical import CriticalQuery, StrategyPair, classify_regime
from .errors import ChainCostError, ConfigError, SolverError
from .homogenize import homogenize, rescale
from .oracle import simulate
from .presets import PRESETS
from .solver import (
    Method,
    SolveSettings,
    default_d_grid,
    default_ei_grid,
    superiority_surface,
    trace_critical_curve,
)

__all__ = ["main", "build_parser"]

log = logging.getLogger(__name__)

_STRATEGIES = ("zero", "inspection", "monitoring", "general")
_METHOD_NAMES = tuple(sorted({m.value for m in Method} | {m.csv_name for m in Method}))


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> "None":  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# === Shared plumbing =======================================================


def _add_chain_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", metavar="PATH", help="chain config JSON")
    src.add_argument(
        "--preset", choices=sorted(PRESETS), default=None,
        help="named parameter set (default: ref50 when --config is absent)",
    )
    p.add_argument("--d", type=float, default=None, help="preset damage probability override")
    p.add_argument("--em", type=float, default=None, help="preset monitoring effectiveness override")
    p.add_argument("--ei", type=float, default=None, help="preset inspection effectiveness override")


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--strict", action="store_true", help="exit 2 if the solver fails to converge")
    p.add_argument("--tolerance", type=float, default=None, help="solver tolerance")
    p.add_argument("--max-iterations", type=int, default=None, help="solver iteration budget")


def _resolve_chain(args: argparse.Namespace) -> tuple[Chain, str]:
    overrides = {k: getattr(args, k) for k in ("d", "em", "ei") if getattr(args, k) is not None}
    if args.config:
        if overrides:
            raise ConfigError("--d/--em/--ei overrides apply to presets, not --config files")
        return load_config(args.config), "custom"
    name = args.preset or "ref50"
    return PRESETS[name](**overrides), name


def _settings(args: argparse.Namespace) -> SolveSettings:
    overrides = {}
    if args.tolerance is not None:
        overrides["tolerance"] = args.tolerance
    if args.max_iterations is not None:
        overrides["max_iterations"] = args.max_iterations
    return SolveSettings(**overrides)


def _provenance_line(args: argparse.Namespace, chain: Chain, preset: str, **extra: object) -> str:
    tokens = [f"# chaincost {__version__}", f"cmd={args.command}", f"preset={preset}",
              f"config={config_sha256(chain_to_config(chain))}"]
    tokens += [f"{k}={v}" for k, v in extra.items()]
    return " ".join(tokens)


def _provenance_obj(args: argparse.Namespace, chain: Chain, preset: str, **extra: object) -> dict:
    out = {
        "tool": "chaincost",
        "version": __version__,
        "cmd": args.command,
        "preset": preset,
        "config_sha256": config_sha256(chain_to_config(chain)),
    }
    out.update(extra)
    return out


def _open_out(args: argparse.Namespace):
    if args.out:
        return open(args.out, "w", newline="")
    return None  # stdout


def _emit_csv(args, header: str, columns: Sequence[str], rows) -> None:
    handle = _open_out(args)
    out = handle or sys.stdout
    try:
        out.write(header + "\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    finally:
        if handle:
            handle.close()


def _emit_json(args, obj: dict) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# === Subcommand handlers ===================================================


def _cmd_compare(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    strategies = _STRATEGIES if args.strategy == "all" else (args.strategy,)
    rows = []
    for name in strategies:
        b = cost_breakdown(chain, Strategy.from_name(name))
        rows.append([
            name, b.fixed_cost, b.variable_cost, b.warranty_cost, b.total_cost,
            b.sold_volume, b.defective_sold_volume, b.survival, b.unit_cost,
        ])
    cheapest = min(rows, key=lambda r: r[-1])[0]
    _emit_csv(
        args,
        _provenance_line(args, chain, preset, cheapest=cheapest),
        ["strategy", "fixed_cost", "variable_cost", "warranty_cost", "total_cost",
         "sold_volume", "defective_sold_volume", "survival", "unit_cost"],
        rows,
    )
    return 0


def _cmd_homogenize(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    h = homogenize(chain, Strategy.from_name(args.strategy), args.N)
    record = homogenized_to_dict(h)
    record["provenance"] = _provenance_obj(args, chain, preset, strategy=args.strategy)
    _emit_json(args, record)
    return 0


def _cmd_rescale(args: argparse.Namespace) -> int:
    try:
        obj = json.loads(Path(args.description).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read description {args.description}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"description {args.description} is not valid JSON: {e}") from None
    h = homogenized_from_dict(obj)
    h2 = rescale(h, args.N)
    record = homogenized_to_dict(h2)
    record["provenance"] = {
        "tool": "chaincost", "version": __version__, "cmd": args.command,
        "source": str(args.description), "config_sha256": config_sha256(homogenized_to_dict(h)),
    }
    _emit_json(args, record)
    return 0


def _curve_grid(args: argparse.Namespace) -> tuple[float, ...]:
    return default_d_grid(args.d_min, args.d_max, args.points)


def _cmd_critical_curve(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    pair = StrategyPair.from_name(args.pair)
    method = Method.from_name(args.method)
    q = CriticalQuery.from_chain(chain, pair, fixed_e_i=args.fixed_ei)
    curve = trace_critical_curve(
        q, _curve_grid(args), method, _settings(args), strict=args.strict
    )
    dropped = args.points - len(curve.points)
    if dropped:
        log.warning("%d of %d grid points had no defined threshold", dropped, args.points)
    rows = [[p.d, p.value, int(p.in_range), method.csv_name] for p in curve.points]
    _emit_csv(
        args,
        _provenance_line(args, chain, preset, pair=pair.value, method=method.csv_name,
                         e_i=q.e_i, N=q.h.N),
        ["d", "value", "in_range", "method"],
        rows,
    )
    return 0


def _cmd_surface(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    method = Method.from_name(args.method)
    q = CriticalQuery.from_chain(chain, StrategyPair.MONITORING_VS_INSPECTION)
    surface = superiority_surface(
        q,
        default_d_grid(args.d_min, args.d_max, args.d_points),
        default_ei_grid(args.ei_points),
        _settings(args),
        method,
    )
    rows = [
        [cell.d, cell.ei, cell.em_crit, cell.dominant.value]
        for row in surface.cells for cell in row
    ]
    _emit_csv(
        args,
        _provenance_line(args, chain, preset, method=method.csv_name,
                         grid=f"{args.d_points}x{args.ei_points}"),
        ["d", "e_i", "em_crit", "dominant_strategy"],
        rows,
    )
    return 0


def _cmd_regimes(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    h = homogenize(chain)
    regime = classify_regime(h, em=args.field_em, ei=args.field_ei, settings=_settings(args))
    rows = [
        [d, regime.field_at(d).value, regime.a, regime.b]
        for d in default_d_grid(args.d_min, args.d_max, args.points)
    ]
    _emit_csv(
        args,
        _provenance_line(args, chain, preset, a=regime.a, b=regime.b,
                         window=int(regime.window_exists)),
        ["d", "field", "a", "b"],
        rows,
    )
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    strategy = Strategy.from_name(args.strategy)
    result = simulate(
        chain, strategy, replications=args.replications, seed=args.seed,
        unit_budget=args.budget,
    )
    from .chain import defective_sold_volume, sold_volume

    record = {
        "strategy": strategy.value,
        "replications": result.replications,
        "seed": result.seed,
        "X_n_hat": result.X_n_hat,
        "X_n_bad_hat": result.X_n_bad_hat,
        "stderr_X_n": result.stderr_X_n,
        "stderr_X_n_bad": result.stderr_X_n_bad,
        "closed_X_n": sold_volume(chain, strategy),
        "closed_X_n_bad": defective_sold_volume(chain, strategy),
        "provenance": _provenance_obj(args, chain, preset, seed=args.seed),
    }
    _emit_json(args, record)
    return 0


# === Figure data bundle ====================================================

_FIG_IDS = ("2", "3", "4", "5", "6", "7", "8")


def _fig_rows_2(preset_fn) -> tuple[list[str], list[list]]:
    rows: list[list] = []
    for d in default_d_grid():
        rows.append([d, "zero", cost_breakdown(preset_fn(d=d), Strategy.ZERO).unit_cost])
        for em in (0.2, 0.4, 0.6, 0.8, 1.0):
            cu = cost_breakdown(preset_fn(d=d, em=em), Strategy.MONITORING).unit_cost
            rows.append([d, f"monitoring em={em}", cu])
    return ["d", "series", "unit_cost"], rows


def _fig_rows_3(preset_fn) -> tuple[list[str], list[list]]:
    rows: list[list] = []
    for d in default_d_grid():
        chain = preset_fn(d=d)
        cu_m = cost_breakdown(chain, Strategy.MONITORING).unit_cost
        cu_z = cost_breakdown(chain, Strategy.ZERO).unit_cost
        cu_i = cost_breakdown(chain, Strategy.INSPECTION).unit_cost
        rows.append([d, "zero-minus-monitoring", cu_z - cu_m])
        rows.append([d, "inspection-minus-monitoring", cu_i - cu_m])
    return ["d", "series", "cost_diff"], rows


def _fig_rows_4(preset_fn, settings: SolveSettings) -> tuple[list[str], list[list]]:
    rows: list[list] = []
    for kappa in (0.2, 1.0, 4.0):
        chain = preset_fn()
        chain = replace(chain, reputation=Reputation(alpha=kappa / 2.0, beta=1.0))
        q = CriticalQuery.from_chain(chain, StrategyPair.MONITORING_VS_ZERO)
        for method in (Method.CLOSED_FORM, Method.N1_RESCALE, Method.DIRECT_NN):
            curve = trace_critical_curve(q, method=method, settings=settings)
            for p in curve.points:
                rows.append([p.d, kappa, p.value, method.csv_name, int(p.in_range)])
    return ["d", "kappa", "value", "method", "in_range"], rows


def _fig_rows_5(preset_fn) -> tuple[list[str], list[list]]:
    rows: list[list] = []
    for d in default_d_grid():
        chain = preset_fn(d=d)
        for name in ("zero", "inspection", "monitoring"):
            cu = cost_breakdown(chain, Strategy.from_name(name)).unit_cost
            rows.append([d, name, cu])
    return ["d", "strategy", "unit_cost"], rows


def _fig_rows_6(preset_fn, settings: SolveSettings) -> tuple[list[str], list[list]]:
    q = CriticalQuery.from_chain(preset_fn(), StrategyPair.MONITORING_VS_INSPECTION)
    surface = superiority_surface(
        q, default_d_grid(num=50), default_ei_grid(40), settings, Method.N1_RESCALE
    )
    rows = [
        [cell.d, cell.ei, cell.em_crit, cell.dominant.value]
        for row in surface.cells for cell in row
    ]
    return ["d", "e_i", "em_crit", "dominant_strategy"], rows


def _fig_rows_7(preset_fn, settings: SolveSettings) -> tuple[list[str], list[list]]:
    rows: list[list] = []
    base = preset_fn()
    for kappa in (1.0, 0.6):
        for M_fixed in (20_000.0, 10_000.0, 0.0):
            stages = tuple(replace(s, M=M_fixed) for s in base.stages)
            chain = Chain(
                stages=stages, X0=base.X0,
                reputation=Reputation(alpha=kappa / 2.0, beta=1.0),
            )
            balance = (M_fixed - stages[0].I) / base.X0 + stages[0].m - stages[0].i
            q = CriticalQuery.from_chain(chain, StrategyPair.MONITORING_VS_INSPECTION)
            for space, method in (("Nn", Method.CLOSED_FORM), ("N1", Method.N1_RESCALE)):
                curve = trace_critical_curve(q, method=method, settings=settings)
                for p in curve.points:
                    rows.append([p.d, space, kappa, balance, p.value, int(p.in_range)])
    return ["d", "space", "kappa", "balance", "value", "in_range"], rows


def _fig_rows_8(preset_fn, settings: SolveSettings) -> tuple[list[str], list[list]]:
    h = homogenize(preset_fn())
    regime = classify_regime(h, settings=settings)
    rows = [
        [d, regime.field_at(d).value, regime.a, regime.b] for d in default_d_grid()
    ]
    return ["d", "field", "a", "b"], rows


def _cmd_figdata(args: argparse.Namespace) -> int:
    chain, preset = _resolve_chain(args)
    if preset == "custom":
        raise ConfigError("figdata renders the preset parameter sets; use --preset")
    if any(getattr(args, k) is not None for k in ("d", "em", "ei")):
        raise ConfigError("figdata sweeps d/em/ei itself; overrides are not supported")
    preset_fn = PRESETS[preset]
    settings = _settings(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    wanted = _FIG_IDS if args.figure == "all" else (args.figure,)
    builders = {
        "2": lambda: _fig_rows_2(preset_fn),
        "3": lambda: _fig_rows_3(preset_fn),
        "4": lambda: _fig_rows_4(preset_fn, settings),
        "5": lambda: _fig_rows_5(preset_fn),
        "6": lambda: _fig_rows_6(preset_fn, settings),
        "7": lambda: _fig_rows_7(preset_fn, settings),
        "8": lambda: _fig_rows_8(preset_fn, settings),
    }
    for fig in wanted:
        columns, rows = builders[fig]()
        path = outdir / f"fig{fig}.csv"
        with open(path, "w", newline="") as f:
            f.write(_provenance_line(args, chain, preset, figure=fig) + "\n")
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(rows)
        log.info("wrote %s (%d rows)", path, len(rows))
    return 0


# === Parser wiring =========================================================


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaincost", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chaincost {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="strategy cost breakdowns side by side")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--strategy", choices=_STRATEGIES + ("all",), default="all")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("homogenize", help="uniform virtual description of a chain")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--N", type=int, default=None, help="virtual stage count (default: n)")
    p.add_argument("--strategy", choices=_STRATEGIES, default="general")
    p.set_defaults(func=_cmd_homogenize)

    p = sub.add_parser("rescale", help="re-express a uniform description at another N")
    p.add_argument("--description", metavar="PATH", required=True,
                   help="uniform description JSON (homogenize output)")
    p.add_argument("--N", type=int, required=True, help="target virtual stage count")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.set_defaults(func=_cmd_rescale, strict=False)

    p = sub.add_parser("critical-curve", help="critical effectiveness across d")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--pair", choices=[x.value for x in StrategyPair],
                   default=StrategyPair.MONITORING_VS_ZERO.value)
    p.add_argument("--method", default="numeric", choices=_METHOD_NAMES,
                   metavar="METHOD",
                   help="numeric | closed_N1_rescaled | closed_Nn")
    p.add_argument("--fixed-ei", type=float, default=None,
                   help="inspection effectiveness for the inspection side")
    p.add_argument("--d-min", type=float, default=1e-4)
    p.add_argument("--d-max", type=float, default=0.5)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=_cmd_critical_curve)

    p = sub.add_parser("surface", help="monitoring-vs-inspection dominance grid")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--method", default="closed_N1_rescaled", choices=_METHOD_NAMES,
                   metavar="METHOD",
                   help="numeric | closed_N1_rescaled | closed_Nn")
    p.add_argument("--d-min", type=float, default=1e-4)
    p.add_argument("--d-max", type=float, default=0.5)
    p.add_argument("--d-points", type=int, default=50)
    p.add_argument("--ei-points", type=int, default=40)
    p.set_defaults(func=_cmd_surface)

    p = sub.add_parser("regimes", help="uncertainty / superiority / avoidance fields")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--field-em", type=float, default=None,
                   help="monitoring effectiveness for the sweep (default: chain's)")
    p.add_argument("--field-ei", type=float, default=None,
                   help="inspection effectiveness for the sweep (default: chain's)")
    p.add_argument("--d-min", type=float, default=1e-4)
    p.add_argument("--d-max", type=float, default=0.5)
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=_cmd_regimes)

    p = sub.add_parser("simulate", help="unit-level Monte Carlo check")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--strategy", choices=_STRATEGIES, default="general")
    p.add_argument("--replications", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=100_000_000,
                   help="max X0 * replications")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("figdata", help="write the figure data CSV bundle")
    _add_chain_args(p)
    _add_common_args(p)
    p.add_argument("--figure", choices=_FIG_IDS + ("all",), default="all")
    p.add_argument("--outdir", default=".", help="directory for fig*.csv files")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_figdata)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"chaincost: config error: {e}", file=sys.stderr)
        return 1
    except SolverError as e:
        if getattr(args, "strict", False):
            print(f"chaincost: solver failure: {e}", file=sys.stderr)
            return 2
        print(f"chaincost: error: {e}", file=sys.stderr)
        return 1
    except ChainCostError as e:
        print(f"chaincost: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        # Range and combination checks raised by the library surface.
        print(f"chaincost: invalid arguments: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
