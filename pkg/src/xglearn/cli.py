"""Command-line front end: dataset generation, batch runs, plotting, serving."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from xglearn.strategies import THETA_ARGMAX, StrategyKind

STRATEGY_ALIASES = {
    "al": StrategyKind.ACTIVE_UNCERTAINTY,
    "gl": StrategyKind.GUIDED,
    "random": StrategyKind.RANDOM,
    "xgl": StrategyKind.XGL_SIMULATED,
    "passive": StrategyKind.PASSIVE,
}


def parse_strategy(text: str) -> StrategyKind:
    """Accepts the short CLI aliases as well as the full enumeration values."""
    if text in STRATEGY_ALIASES:
        return STRATEGY_ALIASES[text]
    try:
        return StrategyKind(text)
    except ValueError:
        choices = sorted(STRATEGY_ALIASES)
        raise ValueError(f"unknown strategy {text!r} (choose from {', '.join(choices)})") from None


def parse_theta(text: str) -> float | str:
    if text == THETA_ARGMAX:
        return THETA_ARGMAX
    try:
        value = float(text)
    except ValueError:
        raise ValueError(f"theta must be a number or '{THETA_ARGMAX}', got {text!r}") from None
    return value


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    raw = Path(path).read_text()
    data = json.loads(raw)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object of flat keys")
    return data


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xglearn",
        description="Explanatory guided learning workbench: synthetic benchmark, "
        "batch experiment loops, plots, and a live labeling service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write the synthetic dataset as CSV")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.add_argument("--config", help="flat JSON config (generator fields are used)")

    run = sub.add_parser("run", help="run a batch experiment over all folds")
    run.add_argument("--strategy", type=parse_strategy, help="al | gl | random | xgl | passive")
    run.add_argument("--theta", type=parse_theta, help="softmax sharpness, or 'argmax'")
    run.add_argument("--budget", type=int)
    run.add_argument("--folds", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--k-clusters", type=int, dest="k_clusters")
    run.add_argument("--gamma", type=float)
    run.add_argument("--c", type=float)
    run.add_argument("--w", type=float)
    run.add_argument("--resolution", type=int)
    run.add_argument(
        "--snapshots",
        help="comma-separated snapshot iterations (default 10,70,90,140 within budget)",
    )
    run.add_argument("--out", default="results.csv", help="results CSV path or directory")
    run.add_argument("--config", help="flat JSON config file; flags override it")

    plot = sub.add_parser("plot", help="render the learning-curve SVG from a results CSV")
    plot.add_argument("--in", dest="source", required=True, help="results CSV")
    plot.add_argument("--out", help="output SVG path (default: alongside the CSV)")

    serve = sub.add_parser("serve", help="start the live labeling service")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--seed", type=int)
    serve.add_argument("--resolution", type=int)
    serve.add_argument("--k-clusters", type=int, dest="k_clusters")
    serve.add_argument("--config", help="flat JSON config file")
    serve.add_argument("--ui", help="directory of static UI assets to mount at /")
    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    from xglearn.engine import ExperimentConfig
    from xglearn.synthdata import generate_synthetic, to_csv

    overrides = _load_config_file(args.config)
    if args.seed is not None:
        overrides["seed"] = args.seed
    config = ExperimentConfig.from_flat_dict(overrides)
    dataset = generate_synthetic(config.data_config())
    to_csv(dataset, args.out)
    print(f"wrote {len(dataset)} points to {args.out}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    from xglearn.engine import ExperimentConfig, emit_outputs, run_experiment

    overrides = _load_config_file(args.config)
    for key in ("strategy", "theta", "budget", "folds", "seed", "k_clusters", "gamma", "c", "w", "resolution"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.snapshots is not None:
        overrides["snapshot_iterations"] = [int(s) for s in args.snapshots.split(",") if s.strip()]
    if "strategy" not in overrides:
        raise ValueError("no strategy given (use --strategy or a config file)")

    config = ExperimentConfig.from_flat_dict(overrides)
    result = run_experiment(config)
    paths = emit_outputs(result, args.out)
    last = result.mean_f1[-1]
    print(f"strategy={config.strategy.value} final mean F1={last:.4f}")
    for label in ("csv", "curve", "summary"):
        print(f"{label}: {paths[label]}")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    from xglearn import svgplot
    from xglearn.engine import curve_series_from_rows, read_results_csv

    source = Path(args.source)
    rows = read_results_csv(source)
    series = curve_series_from_rows(rows)
    svg = svgplot.render_curves(series, title="F1 on the held-out fold")
    out = Path(args.out) if args.out else source.with_name(f"{source.stem}_curve.svg")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg)
    print(f"curve: {out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from xglearn.service.app import create_app
    from xglearn.service.session import SessionConfig

    overrides = _load_config_file(args.config)

    def pick(flag, key, default):
        return flag if flag is not None else overrides.get(key, default)

    config = SessionConfig(
        seed=int(pick(args.seed, "seed", 0)),
        k_clusters=int(pick(args.k_clusters, "k_clusters", 10)),
        gamma=float(overrides.get("gamma", 100.0)),
        c=float(overrides.get("c", 100.0)),
        w=float(overrides.get("w", 0.5)),
        resolution=int(pick(args.resolution, "resolution", 100)),
    )
    app = create_app(config, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "plot": _cmd_plot,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
