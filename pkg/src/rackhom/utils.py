import logging
import os
from pathlib import Path

# Configuration
# Use the invoking user's home directory, not root's home when running with sudo
if os.environ.get('SUDO_USER'):
    RACKHOM_DIR = Path(f"/home/{os.environ['SUDO_USER']}") / ".rackhom"
else:
    RACKHOM_DIR = Path.home() / ".rackhom"

CONFIG_FILE = RACKHOM_DIR / "config.json"
LOG_FILE = RACKHOM_DIR / "rackhom.log"

LOG_FORMAT = '[%(asctime)s] %(levelname)s: %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'


def setup_logging(level: str = "INFO", verbose: bool = False):
    """Setup logging configuration"""
    handlers = []
    try:
        LOG_FILE.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(LOG_FILE))
    except OSError:
        # read-only home; fall back to stderr only
        pass

    if verbose or not handlers:
        try:
            from rich.console import Console
            from rich.logging import RichHandler
            handlers.append(RichHandler(console=Console(stderr=True), show_path=False, markup=False))
        except ImportError:
            handlers.append(logging.StreamHandler())

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
        handlers=handlers,
        force=True,
    )


def get_logger(name: str):
    return logging.getLogger(name)
