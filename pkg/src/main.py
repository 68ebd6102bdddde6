"""
Application entry point.
"""
import sys

from cli.commands import cli
from config.settings import settings
from utils.logger import logger


def main(argv=None) -> int:
    settings.ensure_directories()
    logger.debug(f"Starting {settings.APP_NAME} v{settings.APP_VERSION}")
    return cli.main(args=argv, prog_name=settings.APP_NAME, standalone_mode=True)


if __name__ == "__main__":
    sys.exit(main())
