"""``nqcalc`` command line.

Exit status is 0 when every command passes, 1 on a verdict failure or a
command error, 2 when the manifest or the environment cannot be read.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

from nqcalc import __version__
from nqcalc.config import load_settings
from nqcalc.errors import ConfigError, ExpressionSyntaxError, ManifestError
from nqcalc.manifest import load_manifest
from nqcalc.report import FORMATS, render
from nqcalc.runner import classify_commands, roundtrip_commands, run

__all__ = ["build_parser", "main"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_UNREADABLE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nqcalc",
        description="Verify structures on graded manifolds declared in a manifest.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="mode", required=True)
    for mode, text in (
        ("verify", "run the commands declared in the manifest"),
        ("roundtrip", "extract and reconstruct every form, check every algebroid"),
        ("classify", "run the classifier of every structure block"),
    ):
        sub = subparsers.add_parser(mode, help=text)
        sub.add_argument("manifest", help="path of the manifest")
        sub.add_argument("--format", choices=sorted(FORMATS), default="text")
        sub.add_argument("--only", metavar="COMMAND", help="run a single named command")
        sub.add_argument("--timings", action="store_true", help="print elapsed seconds")
        sub.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
    except ConfigError as error:
        print(f"nqcalc: {error}", file=sys.stderr)
        return EXIT_UNREADABLE
    logging.basicConfig(
        level=settings.verbosity(args.verbose),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        manifest = load_manifest(args.manifest)
        if args.mode == "roundtrip":
            commands: Optional[List] = roundtrip_commands(manifest)
        elif args.mode == "classify":
            commands = classify_commands(manifest)
        else:
            commands = None
        report = run(manifest, args.manifest, args.only, commands)
    except (ManifestError, ExpressionSyntaxError, OSError) as error:
        logger.debug("Cannot read %s", args.manifest, exc_info=True)
        print(f"nqcalc: {args.manifest}: {error}", file=sys.stderr)
        return EXIT_UNREADABLE
    sys.stdout.write(render(report, args.format, args.timings))
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
