#!/usr/bin/env python
"""
germext command-line front end: runs the demos and the verification suites
and emits a JSON report.

    germext demo-extend --d 65
    germext demo-borel --J 4 --seed 7 --out report.json
    germext verify --seed 1
    germext probe-c1
"""
import argparse
import logging
import sys

from .borel import load_jet
from .config_manager import ConfigError, ConfigManager
from .kmaps import kmap_from_descriptor
from .reporting import Report, write_report
from .run_config import COMMANDS, DEMO_BOREL, DEMO_EXTEND, KMAP_KINDS, PROBE_C1, RunConfig
from .suite_manager import SuiteManager

logger = logging.getLogger(__name__)

USAGE_ERROR = 2

COMMAND_SUITES = {
    DEMO_EXTEND: ("extension",),
    DEMO_BOREL: ("borel",),
    PROBE_C1: ("c1_probe",),
}
ALL_SUITES = ("scalar", "spaces", "polynomials", "kmaps", "extension", "borel", "c1_probe")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="germext",
        description="K-map germ extension and Borel-series verification")
    # 'demo extend' and 'demo-extend' both name the same command
    parser.add_argument("command", nargs="+", help=f"One of {', '.join(COMMANDS)}")
    parser.add_argument("--d", type=int, help="Grid points on [0, 1]")
    parser.add_argument("--D", type=int, help="Chebyshev coefficient count")
    parser.add_argument("--p", type=int, help="Exponent of the l_p space")
    parser.add_argument("--a", type=float, help="Identity radius of the truncator")
    parser.add_argument("--b", type=float, help="Support radius of the truncator")
    parser.add_argument("--rho-in", dest="rho_in", type=float, help="Inner radius of the space bump")
    parser.add_argument("--rho-out", dest="rho_out", type=float, help="Outer radius of the space bump")
    parser.add_argument("--kmap-kind", dest="kmap_kind", choices=KMAP_KINDS,
                        help="Base K-map of the Borel series: pointwise on C(M), bump on l_p")
    parser.add_argument("--eps", type=float, help="Rescaling radius for germ extension")
    parser.add_argument("--budget", type=float, help="Derivative budget for the Borel scales")
    parser.add_argument("--J", type=int, help="Jet order")
    parser.add_argument("--seed", type=int, help="Random seed")
    parser.add_argument("--tol", type=float, help="Tolerance for jet and finite-difference checks")
    parser.add_argument("--out", help="Write the JSON report to this file")
    parser.add_argument("--config", help="Path to config file", default=None)
    parser.add_argument("--jet", help="Jet JSON file for demo-borel")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    return parser


def suites_for(config):
    if config.command in COMMAND_SUITES:
        return COMMAND_SUITES[config.command]
    return config.suites or ALL_SUITES


def run(config, config_manager=None):
    """Run the suites of one command

    Args:
        config: RunConfig
        config_manager: Optional ConfigManager for per-suite settings

    Returns:
        Report
    """
    report = Report(config.command, config.params())
    manager = SuiteManager(config, config_manager)
    manager.load_suites(suites_for(config))
    report.extend(manager.run(report.timing))
    return report


def main(argv=None):
    """Main entry point

    Returns:
        0 if every check passed, 1 if any failed, 2 on a usage error
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command = "-".join(args.command)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='[%(levelname)s] %(asctime)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)]
    )

    if args.command not in COMMANDS:
        parser.print_usage(sys.stderr)
        logger.error(f"Unknown command '{args.command}', expected one of {', '.join(COMMANDS)}")
        return USAGE_ERROR

    try:
        config_manager = ConfigManager(args.config)
        config = RunConfig.from_sources(config_manager, args)
    except (ConfigError, ValueError) as e:
        logger.error(f"Invalid configuration: {e}")
        return USAGE_ERROR

    if config.jet_path:
        try:
            jet = load_jet(config.jet_path)
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.error(f"Invalid jet file {config.jet_path}: {e}")
            return USAGE_ERROR
        try:
            K = kmap_from_descriptor(config.kmap_descriptor(), jet.domain, config.max_deriv_order)
        except ValueError as e:
            logger.error(f"Jet domain {jet.domain} does not fit the {config.kmap_kind} K-map: {e}")
            return USAGE_ERROR
        if len(K.deriv_bounds) < jet.J:
            logger.error(f"The {config.kmap_kind} K-map on {jet.domain} has no derivative bounds "
                         f"up to order {jet.J - 1}")
            return USAGE_ERROR

    logger.info(f"Running {config.command} with seed {config.seed}")
    try:
        report = run(config, config_manager)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130

    if config.out:
        if not write_report(config.out, report):
            logger.error(f"Could not write report to {config.out}")
            return 1
        print(report.summary())
        logger.info(f"Report written to {config.out}")
    else:
        print(report.to_json())
        for line in report.summary().splitlines():
            logger.info(line)

    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
