"""Main entry point for effnet-mini"""

import sys

from dotenv import load_dotenv

from effnet_mini.cli import main
from effnet_mini.utils.logging_config import configure_logging

load_dotenv()
configure_logging()


if __name__ == "__main__":
    sys.exit(main())
