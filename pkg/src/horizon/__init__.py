"""Horizon entanglement discrimination simulator."""
from rich import get_console
from rich.traceback import install as rich_tracebacks

from horizon import cli, domain, lib, utils

__all__ = ["cli", "domain", "lib", "utils"]

rich_tracebacks(
    console=get_console(),
    suppress=(
        "click",
        "rich",
        "rich_click",
        "numpy",
        "scipy",
    ),
    show_locals=False,
)
"""Pre-configured traceback handler.

Suppresses some of the frames by default to reduce the amount printed to
the screen.
"""
