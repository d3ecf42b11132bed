"""Command-line front end: ``python -m neorl`` or ``neorl``.

Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from . import config as cfg
from .errors import ConfigurationError
from .experiment import (
    run_batch,
    run_trial,
    simulate,
    write_batch,
    write_trace_csv,
)
from .network import Network

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _key_value(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    key, value = text.split("=", 1)
    import yaml

    return key.strip(), yaml.safe_load(value)


def _add_common(p, batch: bool):
    p.add_argument("--config", help="YAML configuration file")
    p.add_argument("--preset", help="A, B, C or D" + (" (comma list allowed)" if batch else ""))
    p.add_argument("--steps", type=int)
    p.add_argument("--sample-interval", type=int, dest="sample_interval")
    p.add_argument("--steps-per-second", type=float, dest="steps_per_second")
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--pc-resolution", type=int, dest="pc_resolution")
    p.add_argument("--ovc-resolution", type=int, dest="ovc_resolution")
    p.add_argument("--feedback-gain", type=float, dest="feedback_gain")
    p.add_argument("--pc-weight", type=float, dest="pc_weight")
    p.add_argument("--ovc-weight", type=float, dest="ovc_weight")
    p.add_argument("--normalize-desire", action="store_const", const=True, default=None, dest="normalize_desire")
    p.add_argument("--env", action="append", type=_key_value, default=[], metavar="KEY=VALUE",
                   help="override an environment parameter; repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="neorl", description="Purposive neoRL networks in WaterWorld.")
    parser.add_argument("--version", action="version", version=f"neorl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one seeded trial and write its CSV")
    _add_common(p, batch=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--dump-banks", action="store_true", help="also write each node's GVF bank as CSV")

    p = sub.add_parser("batch", help="run a seed batch per preset and aggregate")
    _add_common(p, batch=True)
    p.add_argument("--seeds", type=int, help="number of seeds (0..N-1)")
    p.add_argument("--workers", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true", help="write an SVG of mean accumulated reward")

    sub.add_parser("verify", help="run the oracle and property self-checks")

    p = sub.add_parser("config", help="configuration utilities")
    csub = p.add_subparsers(dest="config_command", required=True, parser_class=_Parser)
    d = csub.add_parser("dump", help="print the resolved configuration as YAML")
    _add_common(d, batch=True)
    d.add_argument("--seeds", type=int)
    d.add_argument("--workers", type=int)

    p = sub.add_parser("describe", help="print a preset's wiring")
    _add_common(p, batch=False)
    return parser


def resolve(args) -> dict:
    """Defaults, then the config file, then flags."""
    file_layer = cfg.load_file(args.config) if getattr(args, "config", None) else {}
    flags = {k: getattr(args, k, None) for k in ("preset", "steps", "sample_interval", "steps_per_second", "seeds", "workers")}
    flags["overrides"] = {k: getattr(args, k, None) for k in cfg.DEFAULT_OVERRIDES}
    flags["overrides"] = {k: v for k, v in flags["overrides"].items() if v is not None}
    flags["env"] = dict(getattr(args, "env", []) or [])
    return cfg.merge(file_layer, flags)


def _writable_dir(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {path!r}: {exc}") from None
    if not os.access(path, os.W_OK):
        raise UsageError(f"output directory {path!r} is not writable")


def cmd_run(args) -> int:
    resolved = resolve(args)
    names = cfg.preset_names(resolved)
    if len(names) != 1:
        raise UsageError("run takes a single preset")
    name = names[0]
    config = cfg.experiment_config(resolved, name, seeds=(args.seed,))
    _writable_dir(args.out)
    if args.dump_banks:
        trace, net = simulate(config, args.seed)
        for node, bank in net.banks.items():
            bank.dump_csv(os.path.join(args.out, f"{name}_seed{args.seed}_{node}_bank.csv"))
    else:
        trace = run_trial(config, args.seed)
    path = os.path.join(args.out, f"{name}_seed{args.seed}.csv")
    write_trace_csv(path, trace, f"{name}-{args.seed}", config.steps_per_second)
    print(path)
    return EXIT_OK


def cmd_batch(args) -> int:
    resolved = resolve(args)
    names = cfg.preset_names(resolved)
    workers = int(resolved["workers"])
    if workers < 1:
        raise UsageError("--workers must be >= 1")
    _writable_dir(args.out)
    curves = {}
    for name in names:
        config = cfg.experiment_config(resolved, name)
        curve, traces = run_batch(config, workers)
        write_batch(args.out, name, curve, traces, config.steps_per_second)
        curves[name] = curve
        print(f"{name}: n={curve.n} final mean={curve.mean[-1]:.3f} stddev={curve.stddev[-1]:.3f}")
    if len(names) > 1:
        _write_comparison(os.path.join(args.out, "comparison.csv"), curves)
    if args.plot:
        _plot(os.path.join(args.out, "mean_reward.svg"), curves)
    return EXIT_OK


def _write_comparison(path, curves) -> None:
    import csv

    names = list(curves)
    first = curves[names[0]]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "minutes"] + [f"mean_{n}" for n in names] + [f"stddev_{n}" for n in names])
        for i, s in enumerate(first.steps):
            w.writerow([s, repr(first.minutes[i])] + [repr(curves[n].mean[i]) for n in names]
                       + [repr(curves[n].stddev[i]) for n in names])


def _plot(path, curves) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, curve in curves.items():
        ax.plot(curve.minutes, curve.mean, label=name)
    ax.set_xlabel("minutes")
    ax.set_ylabel("mean accumulated reward")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_verify(args) -> int:
    from .verify import format_table, run_all

    results = run_all()
    print(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def cmd_config(args) -> int:
    sys.stdout.write(cfg.dump(resolve(args)))
    return EXIT_OK


def cmd_describe(args) -> int:
    resolved = resolve(args)
    config = cfg.experiment_config(resolved, cfg.preset_names(resolved)[0], seeds=(0,))
    print(Network(config.network_spec()).describe())
    return EXIT_OK


COMMANDS = {"run": cmd_run, "batch": cmd_batch, "verify": cmd_verify, "config": cmd_config, "describe": cmd_describe}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
