"""Helper functions for setting up output directories."""
import logging
import pathlib

from . import constants


logger = logging.getLogger(__name__)


def mkdirs(output_dir: pathlib.Path, dry_run: bool = True) -> dict[str, pathlib.Path]:
    """Make the output directory and its subdirectories.

    Returns a dict mapping names to paths, whether or not they were made.
    """
    output_dir = pathlib.Path(output_dir)
    dirs = {
        "output_dir": output_dir,
        "fields_dir": output_dir / constants.FIELDS_SUBDIR,
    }
    for name, path in dirs.items():
        logger.info(f"Making directory {name}: {path}")
        if not dry_run:
            path.mkdir(parents=True, exist_ok=True)
    return dirs
