"""Command-line entry point: ``lpdsim <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import harness
from .config import PRESETS, ConfigError, ExperimentKind, load_preset, parse_config
from .export import export_network, write_table
from .routing import RoutingError

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2

_COMMANDS = {
    "detect": ExperimentKind.DETECT_ONCE,
    "sweep-t": ExperimentKind.SWEEP_T,
    "sweep-p": ExperimentKind.SWEEP_P,
    "netgen": ExperimentKind.NET_GEN,
    "route": ExperimentKind.ROUTE_ONCE,
    "secure-ratio": ExperimentKind.SECURE_RATIO_SWEEP,
}

_OUTPUT_NAME = {
    ExperimentKind.DETECT_ONCE: "detect.csv",
    ExperimentKind.SWEEP_T: "sweep_t.csv",
    ExperimentKind.SWEEP_P: "sweep_p.csv",
    ExperimentKind.SECURE_RATIO_SWEEP: "secure_ratio.csv",
}


_SECURE_NOTE = (
    "secure relay: a transmitting hop with at least one other node closer than "
    "detection_radius; gbr: baseline choosing uniformly among lower-hop neighbours"
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpdsim",
        description="Covert communication against a mobile radiometer warden.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="INI config file")
        p.add_argument("--preset", choices=PRESETS, help="shipped parameter set")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker processes")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="SECTION.KEY=VALUE", help="override one config value")
    return parser


def load_config(args) -> "harness.ExperimentConfig":
    text = ""
    if args.preset:
        text += load_preset(args.preset) + "\n"
    if args.config:
        try:
            text += args.config.read_text()
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
    overrides = {}
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep or "." not in key:
            raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    overrides["experiment.kind"] = _COMMANDS[args.command].value
    if args.seed is not None:
        overrides["experiment.seed"] = str(args.seed)
    if args.trials is not None:
        overrides["experiment.trials"] = str(args.trials)
    return parse_config(text, overrides)


def _comment(cfg) -> str:
    return f"lpdsim kind={cfg.kind.value} seed={cfg.seed} config_sha256={cfg.digest()}"


def run(args) -> list[Path]:
    cfg = load_config(args)
    if args.threads < 1:
        raise ConfigError(f"--threads must be >= 1, got {args.threads}")
    comment = _comment(cfg)
    if cfg.kind is ExperimentKind.NET_GEN:
        graph = harness.single_network(cfg, with_endpoints=False)
        return list(export_network(graph, args.out, comment=comment))
    if cfg.kind is ExperimentKind.ROUTE_ONCE:
        net, route = harness.single_route(cfg)
        return list(export_network(net.graph, args.out, route=route, comment=comment))
    if cfg.kind is ExperimentKind.SECURE_RATIO_SWEEP:
        comment += "\n" + _SECURE_NOTE
    table = harness.run_experiment(cfg, threads=args.threads)
    return [write_table(table, args.out / _OUTPUT_NAME[cfg.kind], comment)]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore" if not args.verbose else "default", RuntimeWarning)
            paths = run(args)
    except OSError as exc:
        print(f"lpdsim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RoutingError, RuntimeError) as exc:
        print(f"lpdsim: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
