"""Rich logging for verification runs.

Standard output carries JSON only, so the shared console writes to standard error.
"""

import logging
from abc import ABC, abstractmethod
from typing import Self

from rich import box
from rich.console import Console
from rich.live import Live
from rich.logging import RichHandler
from rich.spinner import Spinner
from rich.table import Table
from rich.text import Text

from modelgeom.core.models import CheckResult

__all__ = [
    "VerificationLogger",
    "VerificationLoggerBase",
    "configure_logging",
    "console",
]

# Shared console instance
console = Console(stderr=True)


def configure_logging(level: int = logging.WARNING) -> None:
    """Install a single RichHandler on the root logger."""
    handler = RichHandler(
        console=console,
        show_time=True,
        show_path=False,
        rich_tracebacks=True,
        markup=True,
        show_level=True,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))

    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(level)

    # Silence noisy loggers
    for name in ["asyncio", "anyio"]:
        logging.getLogger(name).setLevel(logging.WARNING)


class VerificationLoggerBase(ABC):
    """Abstract base class for verification loggers.

    Defines the hooks ``verify_entry`` reports through. Implement this to capture results in tests
    or forward them elsewhere.
    """

    # Set by the verifier before __enter__
    entry: str
    samples: int

    @abstractmethod
    def __enter__(self) -> Self:
        """Enter logging context. Called when a verification run starts."""
        ...

    @abstractmethod
    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: object,
    ) -> None:
        """Exit logging context. Called when the run ends."""
        ...

    @abstractmethod
    def check_started(self, quantity: str) -> None:
        """A check has been scheduled."""
        ...

    @abstractmethod
    def check_finished(self, result: CheckResult) -> None:
        """A check has completed."""
        ...

    # Standard logging methods
    @abstractmethod
    def debug(self, message: str, *args: object) -> None: ...

    @abstractmethod
    def info(self, message: str, *args: object) -> None: ...

    @abstractmethod
    def warning(self, message: str, *args: object) -> None: ...

    @abstractmethod
    def error(self, message: str, *args: object) -> None: ...


class VerificationLogger(VerificationLoggerBase):
    """Rich console logger: a spinner while checks run and a summary table at the end.

    Usage:
        report = anyio.run(partial(verify_entry, get_entry("NilSO2"), logger=VerificationLogger()))
    """

    def __init__(self, *, show_spinner: bool = True, level: int = logging.INFO) -> None:
        self.entry = "geometry"
        self.samples = 0

        self._show_spinner = show_spinner
        self._level = level
        self._pending: list[str] = []
        self._results: list[CheckResult] = []
        self._live: Live | None = None

    def _make_spinner(self) -> Spinner:
        text = Text()
        text.append("Verifying ", style="bold green")
        text.append(self.entry, style="bold green")
        text.append("  │  ", style="dim")
        text.append(f"{len(self._results)}", style="cyan bold")
        text.append(f"/{len(self._results) + len(self._pending)} checks", style="cyan")
        text.append("  │  ", style="dim")
        text.append(f"{self.samples}", style="magenta bold")
        text.append(" samples", style="magenta")
        return Spinner("dots", text=text, style="green")

    def __enter__(self) -> Self:
        console.rule(f"[bold cyan]▶ verify {self.entry}[/]", style="cyan")
        if self._show_spinner:
            self._live = Live(self._make_spinner(), console=console, refresh_per_second=10)
            self._live.start()
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: object,
    ) -> None:
        if self._live:
            self._live.stop()
            self._live = None
        if exc_type is not None:
            console.print(f"[bold red]✗ {self.entry} - Error[/] {exc_val}")
            return
        if self._level <= logging.INFO:
            console.print(self._summary_table())

    def _summary_table(self) -> Table:
        passed = all(r.passed for r in self._results)
        status = "[bold green]✓ pass[/]" if passed else "[bold red]✗ fail[/]"
        table = Table(title=f"{self.entry} {status}", box=box.SIMPLE, header_style="bold", expand=False)
        table.add_column("Check", style="cyan")
        table.add_column("Samples", justify="right")
        table.add_column("Max residual", justify="right")
        table.add_column("Tolerance", justify="right")
        table.add_column("", justify="center")
        for r in self._results:
            mark = "[green]✓[/]" if r.passed else "[red]✗[/]"
            table.add_row(r.quantity, str(r.samples), f"{r.max_residual:.3e}", f"{r.tolerance:.1e}", mark)
        return table

    def check_started(self, quantity: str) -> None:
        self._pending.append(quantity)
        if self._live:
            self._live.update(self._make_spinner())

    def check_finished(self, result: CheckResult) -> None:
        if result.quantity in self._pending:
            self._pending.remove(result.quantity)
        self._results.append(result)
        if self._live:
            self._live.update(self._make_spinner())
        if not result.passed:
            self.warning("%s failed: %.3e > %.1e", result.quantity, result.max_residual, result.tolerance)

    def debug(self, message: str, *args: object) -> None:
        if self._level <= logging.DEBUG:
            formatted = message % args if args else message
            console.print(f"[dim]{formatted}[/]")

    def info(self, message: str, *args: object) -> None:
        if self._level <= logging.INFO:
            formatted = message % args if args else message
            console.print(formatted)

    def warning(self, message: str, *args: object) -> None:
        if self._level <= logging.WARNING:
            formatted = message % args if args else message
            console.print(f"[yellow]⚠ {formatted}[/]")

    def error(self, message: str, *args: object) -> None:
        if self._level <= logging.ERROR:
            formatted = message % args if args else message
            console.print(f"[red]✗ {formatted}[/]")
