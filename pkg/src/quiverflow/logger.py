"""Package-wide logging on top of rich."""

import logging
import os

from rich.console import Console
from rich.logging import RichHandler

_ROOT_NAME = "quiverflow"


def _root_logger() -> logging.Logger:
    root = logging.getLogger(_ROOT_NAME)
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        handler = RichHandler(
            console=Console(stderr=True), rich_tracebacks=True, show_path=False
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        root.addHandler(handler)
        root.setLevel(os.getenv("QUIVERFLOW_LOG_LEVEL", "WARNING").upper())
        root.propagate = False
    return root


def set_log_level(level: str) -> None:
    """Set the level of every quiverflow logger."""
    _root_logger().setLevel(level.upper())


def get_logger(name: str) -> logging.Logger:
    """Get a logger below the quiverflow root logger."""
    root = _root_logger()
    if name == _ROOT_NAME or name.startswith(f"{_ROOT_NAME}."):
        return logging.getLogger(name)
    return root.getChild(name)
