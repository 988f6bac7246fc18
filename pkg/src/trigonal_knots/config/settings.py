"""
Runtime Configuration
Environment-driven defaults for the CLI and logging setup
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

# Project paths
PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent.parent
DEFAULT_OUTPUT_DIR = PROJECT_ROOT / "output"

# Randomized batches
DEFAULT_SEED = int(os.getenv('TRIGONAL_SEED', '20240601'))

# Search and refinement limits
DEFAULT_BFS_BUDGET = int(os.getenv('TRIGONAL_BFS_BUDGET', '20000'))
REFINE_LIMIT_BITS = int(os.getenv('TRIGONAL_REFINE_LIMIT', '200'))

# Logging
LOG_FILE = os.getenv('TRIGONAL_LOG_FILE', '')
LOG_LEVEL = os.getenv('TRIGONAL_LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s | %(levelname)s | %(message)s'


@dataclass(frozen=True)
class Settings:
    """Typed snapshot of the environment."""

    seed: int = DEFAULT_SEED
    output_dir: Path = DEFAULT_OUTPUT_DIR
    bfs_budget: int = DEFAULT_BFS_BUDGET
    refine_limit_bits: int = REFINE_LIMIT_BITS
    log_file: str = LOG_FILE
    log_level: str = LOG_LEVEL

    @classmethod
    def from_env(cls) -> "Settings":
        """Read the current process environment (after .env loading)."""
        return cls(
            seed=int(os.getenv('TRIGONAL_SEED', str(DEFAULT_SEED))),
            output_dir=Path(os.getenv('TRIGONAL_OUTPUT_DIR', str(DEFAULT_OUTPUT_DIR))),
            bfs_budget=int(os.getenv('TRIGONAL_BFS_BUDGET', str(DEFAULT_BFS_BUDGET))),
            refine_limit_bits=int(os.getenv('TRIGONAL_REFINE_LIMIT', str(REFINE_LIMIT_BITS))),
            log_file=os.getenv('TRIGONAL_LOG_FILE', LOG_FILE),
            log_level=os.getenv('TRIGONAL_LOG_LEVEL', LOG_LEVEL),
        )

    def resolve_output(self, name: str) -> Path:
        """Bare file names land in the output directory, which is created on demand."""
        path = Path(name)
        if path.parent == Path('.'):
            self.output_dir.mkdir(parents=True, exist_ok=True)
            return self.output_dir / path
        return path


def configure_logging(settings: Optional[Settings] = None, verbose: bool = False) -> None:
    """Install the structured log format; file handler when TRIGONAL_LOG_FILE is set."""
    settings = settings or Settings.from_env()
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    kwargs = {'level': level, 'format': LOG_FORMAT, 'force': True}
    if settings.log_file:
        kwargs['filename'] = settings.log_file
    logging.basicConfig(**kwargs)
