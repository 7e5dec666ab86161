"""Command line entry point: ``rgg-faultnet <subcommand> [flags]``.

Flags may also come from ``--config FILE`` holding ``key = value`` lines
with the flag names as keys; flags given on the command line win.
"""

from __future__ import annotations

import argparse
import sys

from .connmodel import DivergentIntegralError, make_model, validate_conditions
from .experiment import (
    COLUMNS,
    COMPLETE_MARKER,
    ExperimentPlan,
    PlanError,
    format_row,
    header_line,
    iter_plan,
    load_config,
    parse_values,
    predict,
    preset_plan,
    run_plan,
)

# flag -> (plan field, parser, is a list)
_FLAGS = {
    "n": ("n", int, True),
    "eta": ("eta", float, True),
    "beta": ("beta", float, False),
    "delta": ("delta", float, True),
    "epsilon": ("epsilon", float, True),
    "trials": ("trials", int, False),
    "seed": ("master_seed", int, False),
    "metric": ("metric", str, False),
    "truncation": ("truncation", float, False),
    "out": ("out", str, False),
    "workers": ("workers", int, False),
    "model": ("model", str, False),
    "rn": ("r_n", float, False),
    "profile": ("profile", str, False),
    "scale": ("scale", float, False),
    "d": ("d", float, False),
    "b": ("b", float, False),
}


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("parameters")
    for name in ("n", "eta", "delta", "epsilon"):
        g.add_argument(f"--{name}", action="append", metavar="V",
                       help="value, comma list or range a:b:step; repeatable")
    g.add_argument("--beta", help="Rayleigh power coefficient")
    g.add_argument("--trials")
    g.add_argument("--seed", help="master seed")
    g.add_argument("--metric", choices=["square", "torus"])
    g.add_argument("--truncation", help="tolerated expected number of missed edges (0 = exact)")
    g.add_argument("--out", help="CSV output path (default: stdout)")
    g.add_argument("--config", help="file of 'key = value' lines")
    g.add_argument("--workers")
    g.add_argument("--model", choices=["rayleigh", "hard-disk", "tabulated"])
    g.add_argument("--rn", help="hard-disk radius")
    g.add_argument("--profile", help="two-column r g(r) table")
    g.add_argument("--scale", help="length scale applied to --profile")
    g.add_argument("--d", help="radius factor for the 1/d fault threshold")
    g.add_argument("--b", help="offset b in the critical radius")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rgg-faultnet",
                                     description="Random geometric graphs under random node faults.")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("simulate", help="Monte Carlo breakdown estimates over a sweep"))
    _common(sub.add_parser("predict", help="thresholds and approximations only"))
    pre = sub.add_parser("preset", help="reproduce a figure")
    pre.add_argument("name", choices=["fig1", "fig2", "fig3"])
    _common(pre)
    _common(sub.add_parser("validate-model", help="check a connection function"))
    return parser


def _collect(args: argparse.Namespace) -> dict:
    """Merge config file values and flags into typed plan fields."""
    raw: dict = {}
    if args.config:
        for k, vals in load_config(args.config).items():
            if k not in _FLAGS:
                raise PlanError(k, "unknown config key")
            raw[k] = vals
    for k in _FLAGS:
        v = getattr(args, k, None)
        if v is not None:
            raw[k] = v if isinstance(v, list) else [v]
    out = {}
    for k, vals in raw.items():
        field, cast, is_list = _FLAGS[k]
        try:
            if is_list:
                out[field] = [x for v in vals for x in parse_values(v, cast)]
            else:
                out[field] = cast(vals[-1])
        except ValueError as exc:
            raise PlanError(k, str(exc)) from None
    return out


def _emit(plan: ExperimentPlan) -> None:
    plan.validate()
    if plan.out:
        run_plan(plan)
        return
    out = sys.stdout
    out.write(header_line(plan.master_seed) + "\n" + ",".join(COLUMNS) + "\n")
    for row in iter_plan(plan):
        out.write(format_row(row) + "\n")
        out.flush()
    out.write(COMPLETE_MARKER + "\n")


def _model_from(vals: dict):
    kind = vals.get("model", "rayleigh")
    if kind == "hard-disk":
        if "r_n" not in vals:
            raise PlanError("rn", "hard-disk model needs --rn")
        return make_model(kind, r_n=vals["r_n"])
    if kind == "tabulated":
        if "profile" not in vals:
            raise PlanError("profile", "tabulated model needs --profile")
        return make_model(kind, path=vals["profile"], scale=vals.get("scale", 1.0))
    if "beta" not in vals:
        raise PlanError("beta", "rayleigh model needs --beta")
    return make_model(kind, beta=vals["beta"], eta=vals.get("eta", [2.0])[0])


def _first(vals: dict, key: str, default=None):
    v = vals.get(key)
    return v[0] if v else default


def cmd_simulate(vals: dict) -> int:
    vals.pop("d", None)
    vals.pop("b", None)
    _emit(ExperimentPlan(**vals))
    return 0


def cmd_preset(name: str, vals: dict) -> int:
    vals.pop("d", None)
    vals.pop("b", None)
    _emit(preset_plan(name, **vals))
    return 0


def cmd_predict(vals: dict) -> int:
    model = None
    if vals.get("model") in ("hard-disk", "tabulated"):
        model = _model_from(vals)
    res = predict(
        n=_first(vals, "n"),
        eta=_first(vals, "eta"),
        beta=vals.get("beta"),
        delta=_first(vals, "delta"),
        epsilon=_first(vals, "epsilon", 0.0),
        d=vals.get("d"),
        b=vals.get("b", 0.0),
        model=model,
        metric=vals.get("metric", "torus"),
    )
    for k, v in res.items():
        print(f"{k} = {v:.10g}")
    return 0


def cmd_validate(vals: dict) -> int:
    report = validate_conditions(_model_from(vals))
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        vals = _collect(args)
        if args.command == "simulate":
            return cmd_simulate(vals)
        if args.command == "preset":
            return cmd_preset(args.name, vals)
        if args.command == "predict":
            return cmd_predict(vals)
        return cmd_validate(vals)
    except PlanError as exc:
        print(f"rgg-faultnet: invalid --{exc.key.replace('_', '-')}: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        sys.stderr.close()
        return 0
    except (ValueError, OSError, DivergentIntegralError) as exc:
        print(f"rgg-faultnet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
