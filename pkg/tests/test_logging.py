"""Tests for VerificationLogger rendering."""

import logging
from unittest.mock import MagicMock, patch

import pytest
from rich.table import Table

from modelgeom.core.models import CheckResult
from modelgeom.utils.logging import VerificationLogger, configure_logging


def _result(quantity: str, passed: bool) -> CheckResult:
    return CheckResult(
        entry="H3", quantity=quantity, samples=4, max_residual=2e-7 if passed else 3e-3, tolerance=1e-6, passed=passed
    )


def test_summary_table_lists_every_check() -> None:
    logger = VerificationLogger(show_spinner=False, level=logging.INFO)
    logger.entry = "H3"
    with patch("modelgeom.utils.logging.console") as console:
        with logger:
            logger.check_started("pullback invariance")
            logger.check_finished(_result("pullback invariance", passed=True))
        table = console.print.call_args.args[0]
    assert isinstance(table, Table)
    assert table.row_count == 1
    assert "pass" in str(table.title)


def test_failed_check_warns() -> None:
    logger = VerificationLogger(show_spinner=False, level=logging.WARNING)
    logger.entry = "H3"
    with patch("modelgeom.utils.logging.console") as console, logger:
        logger.check_started("constant sectional curvature")
        logger.check_finished(_result("constant sectional curvature", passed=False))
    printed = [call.args[0] for call in console.print.call_args_list]
    assert any("constant sectional curvature failed" in str(text) for text in printed)
    # no summary table below INFO
    assert not any(isinstance(text, Table) for text in printed)


def test_errors_inside_the_run_are_reported() -> None:
    logger = VerificationLogger(show_spinner=False)
    logger.entry = "SLTilde"
    console = MagicMock()
    with patch("modelgeom.utils.logging.console", console):
        with pytest.raises(RuntimeError), logger:
            raise RuntimeError("boom")
    assert "boom" in console.print.call_args.args[0]


def test_debug_is_quiet_at_info() -> None:
    logger = VerificationLogger(show_spinner=False, level=logging.INFO)
    with patch("modelgeom.utils.logging.console") as console:
        logger.debug("%d samples", 3)
        logger.info("%d samples", 3)
    assert console.print.call_count == 1
    assert console.print.call_args.args[0] == "3 samples"


def test_configure_logging_installs_one_handler() -> None:
    root = logging.getLogger()
    saved, level = root.handlers[:], root.level
    try:
        configure_logging(logging.DEBUG)
        configure_logging(logging.INFO)
        assert len(root.handlers) == 1
        assert root.level == logging.INFO
    finally:
        root.handlers[:] = saved
        root.setLevel(level)


def test_configure_logging_quiets_only_the_async_loggers() -> None:
    root = logging.getLogger()
    saved, level = root.handlers[:], root.level
    try:
        configure_logging(logging.DEBUG)
        assert logging.getLogger("anyio").level == logging.WARNING
        assert logging.getLogger("asyncio").level == logging.WARNING
        assert logging.getLogger("matplotlib").level == logging.NOTSET
    finally:
        root.handlers[:] = saved
        root.setLevel(level)
