"""The global rich text consoles."""

from __future__ import annotations

from rich.console import Console
from rich.style import Style
from rich.theme import Theme

STYLE_KEY = Style.parse("cyan")
STYLE_PASS = Style.parse("green")
STYLE_FAIL = Style.parse("bold bright_red")

THEME = Theme(
    {
        "key": STYLE_KEY,
        "pass": STYLE_PASS,
        "fail": STYLE_FAIL,
    }
)

CONSOLE = Console(theme=THEME)
"""The global rich text console. Reports go here when --out is not given."""

ERR_CONSOLE = Console(theme=THEME, stderr=True)
"""The console for logs and errors, so that stdout stays parseable."""
