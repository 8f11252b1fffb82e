#!/usr/bin/env python3
"""
Main entry point for the Bernoulli free-boundary lab.
"""

import os
import sys
import logging

# Configure logging (stderr, so stdout carries only JSON)
logging.basicConfig(
    level=os.environ.get("LOG_LEVEL", "INFO"),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Load environment variables from .env file if present
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

from src.cli import run


if __name__ == "__main__":
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        logger.info("Shutting down...")
        sys.exit(130)
    except Exception:
        logger.exception("Fatal error")
        sys.exit(1)
