"""
Command line for slelab.

usage:
  slelab simulate  --kappa 6 --horizon 1 --steps 10000 --seeds 1,2,3 --out run-a
  slelab bubbles   --config slelab.config.json --workers 4
  slelab crossings --kappa 8 --r 0.5 --n 1 --out crossings
  slelab hitprob   --kappa 6 --seeds 7
  slelab verify    [--quick] [--only beffara-symmetry ...] [--workers N]

exit codes: 0 success, 1 usage error, 2 acceptance failure, 3 I/O error
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

from .config_ingest import merge_layers, parse_config_dict, parse_config_file
from .enums import TaskTags
from .ensemble import Ensemble
from .exceptions import ConfigError, InvalidParameterError, InvalidTaskError
from .logger import LOG_LEVEL_DEBUG, LOG_LEVEL_INFO, get_logger
from .verify import CRITERION_NAMES, FULL, QUICK, cmd_verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ACCEPTANCE = 2
EXIT_IO = 3

# cli flag -> config key
_OVERRIDES = {
    "kappa": "kappa",
    "horizon": "horizon",
    "steps": "steps",
    "seeds": "seeds",
    "resolution": "resolution",
    "r": "r",
    "n": "n",
    "out": "output_dir",
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_list(text: str) -> List[int]:
    try:
        return [int(s) for s in text.replace(",", " ").split()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"seeds must be integers: {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slelab", description="Numerical laboratory for chordal SLE.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for tag in TaskTags.all():
        p = sub.add_parser(tag.value, help=f"run the {tag.value} ensemble")
        p.add_argument("--config", default=None, help="Flat JSON config file; flags override it.")
        p.add_argument("--kappa", type=float, default=None)
        p.add_argument("--horizon", type=float, default=None)
        p.add_argument("--steps", type=int, default=None)
        p.add_argument("--seeds", type=_seed_list, default=None, help="Comma separated seed list.")
        p.add_argument("--resolution", type=float, default=None)
        p.add_argument("--r", type=float, default=None, help="Excursion diameter threshold.")
        p.add_argument("--n", type=int, default=None, help="Rank of the selected excursion.")
        p.add_argument("--out", default=None, help="Output directory.")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--progress", action="store_true", help="Show a progress bar.")
        p.add_argument("--debug", action="store_true")

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--quick", action="store_true", help="Reduced problem sizes.")
    v.add_argument("--only", nargs="+", default=None, metavar="CRITERION",
                   choices=CRITERION_NAMES)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--debug", action="store_true")
    return parser


def resolve_config(args: argparse.Namespace):
    """Config file (or defaults) with the command-line flags layered on top."""
    overrides: Dict[str, Any] = {"task": args.command}
    for flag, key in _OVERRIDES.items():
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value

    if args.config:
        return parse_config_file(args.config, overrides)
    return parse_config_dict(merge_layers(overrides))


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    lg = get_logger("cli", LOG_LEVEL_DEBUG if args.debug else LOG_LEVEL_INFO)

    if args.workers < 1:
        print("slelab: error: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "verify":
        scale = QUICK.name if args.quick else FULL.name
        if cmd_verify(scale, args.only, workers=args.workers) != 0:
            return EXIT_ACCEPTANCE
        return EXIT_OK

    try:
        config = resolve_config(args)
    except FileNotFoundError as e:
        print(f"slelab: error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, InvalidTaskError, InvalidParameterError) as e:
        print(f"slelab: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        paths = Ensemble(config, workers=args.workers, debug=args.debug,
                         progress=args.progress).write()
    except OSError as e:
        print(f"slelab: error: {e}", file=sys.stderr)
        return EXIT_IO

    for kind, path in paths.items():
        lg.info("%s: %s", kind, path)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
