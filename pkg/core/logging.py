"""
Logging for the lab.

Every logger lives under the ``vqe_lab`` namespace. Handlers write to stderr,
and optionally to a log file, so CLI output on stdout can be piped as JSON.
A ``context`` dict attached to a record is appended as sorted JSON.
"""

import json
import logging
import sys
import time
from functools import wraps
from pathlib import Path
from typing import Any, Optional

ROOT_LOGGER = "vqe_lab"


class StructuredFormatter(logging.Formatter):
    """Appends ``record.context`` to the formatted line."""

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        context = getattr(record, "context", None)
        if context:
            line = f"{line} | {json.dumps(context, default=str, sort_keys=True)}"
        return line


class LabLogger:
    """Configures the ``vqe_lab`` logger tree once per process."""

    _handlers: list[logging.Handler] = []

    @classmethod
    def initialize(
        cls,
        level: str = "INFO",
        log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        log_to_file: bool = False,
        log_file_path: Optional[Path] = None,
        force: bool = False,
    ) -> None:
        """Attach handlers to the root lab logger. Later calls are no-ops unless ``force``."""
        root = logging.getLogger(ROOT_LOGGER)
        if cls._handlers and not force:
            return
        for handler in cls._handlers:
            root.removeHandler(handler)
        cls._handlers = []

        root.setLevel(getattr(logging, level.upper(), logging.INFO))
        formatter = StructuredFormatter(log_format)

        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(formatter)
        cls._handlers.append(console)

        if log_to_file and log_file_path:
            log_file_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file_path, encoding="utf-8")
            file_handler.setFormatter(formatter)
            cls._handlers.append(file_handler)

        for handler in cls._handlers:
            root.addHandler(handler)

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        if not cls._handlers:
            cls.initialize()
        return logging.getLogger(f"{ROOT_LOGGER}.{name}")

    @staticmethod
    def log_with_context(
        logger: logging.Logger,
        level: int,
        message: str,
        context: Optional[dict[str, Any]] = None,
    ) -> None:
        logger.log(level, message, extra={"context": context or {}})


def get_engine_logger(module_name: str) -> logging.Logger:
    """Logger for ``engine/<module_name>.py``."""
    return LabLogger.get_logger(f"engine.{module_name}")


def get_harness_logger(component: str) -> logging.Logger:
    """Logger for a harness component (cli, api, sweep, ...)."""
    return LabLogger.get_logger(f"harness.{component}")


def log_step(step_name: str):
    """
    Log start, completion time and failure of a harness step.

    Usage:
        @log_step("sweep")
        def run_sweep(config):
            ...
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_harness_logger(func.__module__.rsplit(".", 1)[-1])
            logger.debug(f"Starting {step_name}")
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                LabLogger.log_with_context(
                    logger, logging.ERROR, f"Failed {step_name}: {e}",
                    {"step": step_name, "error_type": type(e).__name__},
                )
                raise
            LabLogger.log_with_context(
                logger, logging.INFO, f"Completed {step_name}",
                {"step": step_name, "seconds": round(time.perf_counter() - start, 3)},
            )
            return result

        return wrapper
    return decorator


class StepTracker:
    """
    Status and duration of the stages of one sweep.

    Durations come from a monotonic clock and stay in the tracker; trial
    records never see them.
    """

    def __init__(self):
        self.steps: list[dict] = []
        self._current: Optional[dict] = None
        self._started: float = 0.0

    def start_step(self, name: str) -> None:
        self._current = {"name": name, "status": "running", "seconds": None, "error": None}
        self._started = time.perf_counter()
        self.steps.append(self._current)

    def _finish(self, status: str, error: Optional[str] = None) -> None:
        if self._current is None:
            return
        self._current["seconds"] = round(time.perf_counter() - self._started, 3)
        self._current["status"] = status
        self._current["error"] = error
        self._current = None

    def complete_step(self) -> None:
        self._finish("completed")

    def fail_step(self, error: str) -> None:
        self._finish("failed", error)

    def get_summary(self) -> dict:
        statuses = [s["status"] for s in self.steps]
        return {
            "total_steps": len(self.steps),
            "completed": statuses.count("completed"),
            "failed": statuses.count("failed"),
            "seconds": round(sum(s["seconds"] or 0.0 for s in self.steps), 3),
            "steps": self.steps,
        }
