"""Command line entry point: ``turnpike run|init-configs|fit``."""
import argparse
import logging
import os
import sys

from turnpike.client import Turnpike, emit_builtin_configs
from turnpike.exceptions import CFLViolation, ConfigError, DegenerateState, FitError, InputError, \
    NumericalBlowup
from turnpike.io import ExperimentConfig, load_config

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3

logger = logging.getLogger('turnpike.log')


def build_parser():
    parser = argparse.ArgumentParser(prog="turnpike",
                                     description="Controlled alignment simulations and turnpike certificates.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--out-dir", default=None)
    run.add_argument("--seed", type=int, default=None)

    init = commands.add_parser("init-configs", help="write the reference config files")
    init.add_argument("--out-dir", required=True)

    fit = commands.add_parser("fit", help="fit an exponential decay rate to a series CSV")
    fit.add_argument("--series", required=True)
    fit.add_argument("--t-lo", type=float, required=True)
    fit.add_argument("--t-hi", type=float, required=True)
    fit.add_argument("--column", default=None)
    fit.add_argument("--floor", type=float, default=None)
    fit.add_argument("--out", default=None, help="directory of report.kv, the series' directory by default")
    return parser


def _run(args, client):
    config = load_config(args.config)
    if args.seed is not None:
        # The command line seed wins over both config seeds.
        config = config.model_copy(update={
            "seed": args.seed,
            "particle": config.particle.model_copy(update={"seed": None}),
        })
    outcome = client.run(config, args.out_dir)
    print("%s: %s" % (config.experiment, "PASS" if outcome.status == EXIT_OK else "FAIL"))
    return outcome.status


def _fit(args, client):
    try:
        config = ExperimentConfig.model_validate({
            "experiment": "fit",
            "fit": {"series": args.series, "column": args.column, "t_lo": args.t_lo,
                    "t_hi": args.t_hi, "floor": args.floor},
        })
    except ValueError as exc:
        raise ConfigError("fit", str(exc).splitlines()[0]) from exc
    out = args.out or os.path.dirname(os.path.abspath(args.series))
    outcome = client.run(config, out)
    sys.stdout.write(outcome.report.to_text())
    return outcome.status


def main(argv=None):
    args = build_parser().parse_args(argv)
    if not logging.getLogger().hasHandlers():
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        )
    try:
        if args.command == "init-configs":
            for path in emit_builtin_configs(args.out_dir):
                print(path)
            return EXIT_OK
        client = Turnpike()
        if args.command == "run":
            return _run(args, client)
        return _fit(args, client)
    except (ConfigError, InputError, FitError) as exc:
        logger.error("%s", exc)
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (NumericalBlowup, DegenerateState, CFLViolation, OSError) as exc:
        logger.error("%s", exc)
        print("runtime error: %s" % exc, file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
