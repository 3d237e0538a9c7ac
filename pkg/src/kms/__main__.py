import logging
import sys

from . import constants
from .config import parse_config
from .errors import (
    ConfigError,
    DegenerateCoefficientError,
    FixedPointError,
    HypothesisError,
    OrderingError,
    SolverError,
)
from .parser import get_parser
from .run import run


logger = logging.getLogger('kms')  # 'base' logger


def configure_logging(verbose: bool = False) -> None:
    if not logger.handlers:
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)
    logger.setLevel('DEBUG' if verbose else 'INFO')


def main(argv=None) -> int:
    parser = get_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        config = parse_config(args.config)
        status = run(
            args.subcommand,
            config,
            alpha=args.alpha,
            k=args.k,
            out=args.out,
            force=args.force,
            write_fields=args.write_fields,
            dry_run=args.dry_run,
        )
    except (ConfigError, FileNotFoundError) as e:
        logger.error(f"Configuration error: {e}")
        return constants.EXIT_CONFIG_ERROR
    except HypothesisError as e:
        logger.error(f"Hypothesis veto: {e}")
        return constants.EXIT_HYPOTHESIS_VETO
    except (SolverError, FixedPointError, OrderingError, DegenerateCoefficientError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return constants.EXIT_FAILURE
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        return constants.EXIT_FAILURE
    return status


if __name__ == '__main__':
    sys.exit(main())
