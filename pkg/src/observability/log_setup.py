"""
Logging setup: rich console output plus optional structured JSON file
"""

import logging
from typing import Optional

from pythonjsonlogger import jsonlogger
from rich.logging import RichHandler

from ..config import settings

ROOT_LOGGER = "soliton_lab"

_configured = False


def configure_logging(level: Optional[str] = None, json_file: Optional[str] = None) -> logging.Logger:
    """Install console and JSON handlers on the package logger (idempotent)"""
    global _configured
    root = logging.getLogger(ROOT_LOGGER)
    root.setLevel((level or settings.log_level).upper())

    if _configured:
        return root

    console = RichHandler(rich_tracebacks=True, show_path=False, markup=False)
    console.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(console)

    json_path = json_file or settings.log_json_file
    if json_path:
        file_handler = logging.FileHandler(json_path, encoding="utf-8")
        file_handler.setFormatter(
            jsonlogger.JsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s")
        )
        root.addHandler(file_handler)

    root.propagate = False
    _configured = True
    return root


def get_logger(name: str) -> logging.Logger:
    """Namespaced logger, e.g. get_logger("profile") -> soliton_lab.profile"""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
