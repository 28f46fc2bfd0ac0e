"""Command-line entry point: run one experiment and write its outputs.

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
failures (non-convergence, divergence, singular systems).
"""

import argparse
import sys

from .errors import ConfigError, NumericalError
from .experiments import (EXPERIMENTS, config_from_dict, load_config,
                          run_experiment, write_outputs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rca",
        description="Memory-capacity and task-performance analytics for "
                    "linear echo state networks.")
    parser.add_argument("experiment", choices=EXPERIMENTS,
                        help="experiment family to run")
    parser.add_argument("--config", metavar="PATH",
                        help="JSON config file; omitted keys use experiment defaults")
    parser.add_argument("--out", metavar="DIR", default="out",
                        help="output directory (default: ./out)")
    parser.add_argument("--seed", type=int, metavar="N",
                        help="override base_seed")
    parser.add_argument("--instances", type=int, metavar="N",
                        help="override the number of instances")
    parser.add_argument("--full-scale", action="store_true",
                        help="use the full-size sweep defaults (N=100, 50 instances)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            cfg_doc = load_config(args.config)
            if cfg_doc.experiment != args.experiment:
                raise ConfigError(
                    f"config is for {cfg_doc.experiment!r}, requested "
                    f"{args.experiment!r}")
            doc = {k: v for k, v in vars(cfg_doc).items()}
        else:
            doc = {"experiment": args.experiment}
        if args.seed is not None:
            doc["base_seed"] = args.seed
        if args.instances is not None:
            doc["instances"] = args.instances
        if args.full_scale:
            doc["full_scale"] = True
        cfg = config_from_dict(doc)
        result = run_experiment(cfg)
        paths = write_outputs(result, args.out, cfg=cfg)
    except ConfigError as exc:
        print(f"rca: config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"rca: numerical failure: {exc}", file=sys.stderr)
        return 3
    print(f"{cfg.experiment}: {len(result.raw)} raw rows, "
          f"{len(result.aggregate)} aggregate rows")
    for name, path in paths.items():
        print(f"  {name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
