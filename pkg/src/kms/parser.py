"""CLI parser for the kms command"""
import argparse

from . import constants


def get_parser():
    parser = argparse.ArgumentParser(
        prog="kms",
        description="Ordered positive solutions of a nonlocal elliptic problem with a degenerate coefficient",
    )
    parser.add_argument(
        "subcommand",
        choices=constants.SUBCOMMANDS,
        help=f"What to run. Subcommands are: {constants.SUBCOMMANDS}"
    )
    parser.add_argument(
        "--config",
        required=True,
        help="Path to a JSON run configuration"
    )
    parser.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="Value of alpha at which to freeze the coefficient (solve-local)"
    )
    parser.add_argument(
        "--k",
        type=int,
        default=None,
        help="Index of the bump to scan, starting at 1 (scan)"
    )
    parser.add_argument(
        "--out",
        default=None,
        help="Output directory. Overrides output_dir in the config"
    )
    parser.add_argument(
        "--force",
        action="store_true",
        default=False,
        help="Solve even if one of the hypotheses fails"
    )
    parser.add_argument(
        "--write-fields",
        action="store_true",
        default=False,
        help="Also write the eigenfunctions as CSV fields (eigen)"
    )
    parser.add_argument(
        "--dry-run",
        action="store_true",
        default=False,
        help="If this option is set, compute everything but do not write any files"
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        default=False,
        help="Log at DEBUG level"
    )
    return parser
