import logging
import os
from datetime import datetime
from typing import Any, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "scitrade"


def configure_logging(log_dir: Optional[str] = "logs", verbose: bool = False) -> Optional[str]:
    """
    Attach the session handlers to the scitrade logger.

    A timestamped file handler is created under ``log_dir`` (skipped when
    ``log_dir`` is None) and console output goes through rich on stderr.
    Returns the log file path, if any.
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.propagate = False

    console = RichHandler(console=Console(stderr=True), show_path=False, markup=False)
    console.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.addHandler(console)

    log_file = None
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        log_file = os.path.join(log_dir, f'scitrade_{timestamp}.log')
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter('%(asctime)s [%(levelname)s] %(message)s'))
        logger.addHandler(file_handler)
    return log_file


class TradeLogger:
    """Domain-level logging helpers for the trading pipeline."""

    def __init__(self, name: str = LOGGER_NAME):
        self.logger = logging.getLogger(name)

    def log_session_start(self, command: str, options: Dict[str, Any]) -> None:
        self.logger.info(f"=== Starting scitrade {command} ===")
        for key, value in sorted(options.items()):
            self.logger.debug(f"         {key}: {value}")

    def log_parsed(self, kind: str, source: str, rows: int, records: int) -> None:
        """Log a finished CSV parse"""
        self.logger.info(f"PARSE: {kind} from {source} - {rows} rows, {records} records")

    def log_matrix_built(self, year: int, dimension: int, total: int, skipped: int) -> None:
        self.logger.info(
            f"MATRIX: year {year}, {dimension}x{dimension} fields\n"
            f"        Cell sum: {total}, Skipped edges: {skipped}"
        )

    def log_skipped_edge(self, citing: str, cited: str, year: int, count: int, reason: str) -> None:
        self.logger.warning(f"SKIPPED: {citing}->{cited} ({year}, {count}) - {reason}")

    def log_absent_value(self, field: str, quantity: str, reason: str) -> None:
        self.logger.debug(f"ABSENT: {quantity} for {field} - {reason}")

    def log_classification(self, n_fields: int, splits: Dict[str, Any]) -> None:
        self.logger.info(
            f"CLASSIFY: {n_fields} fields\n"
            f"          Splits: {splits}"
        )

    def log_report_written(self, kind: str, path: str) -> None:
        self.logger.info(f"WRITE: {kind} report -> {path}")

    def log_error(self, error_type: str, details: str) -> None:
        self.logger.error(
            f"ERROR: {error_type}\n"
            f"       Details: {details}"
        )
