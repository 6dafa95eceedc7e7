"""
Utility functions for the quadpair library: logging, configuration,
exceptions and report I/O.
"""

import os
import logging
import json
from datetime import datetime
from typing import Dict, Any, Optional


class QuadPairError(Exception):
    """Base class for all library errors."""


class InputError(QuadPairError):
    """Malformed or semantically invalid input (object files, words, flags)."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + location)


class AxiomError(QuadPairError):
    """A construction violates one of the structural laws it must satisfy."""

    def __init__(self, law: str, detail: str = ""):
        self.law = law
        super().__init__(f"axiom violated: {law}" + (f": {detail}" if detail else ""))


class SizeGuardError(QuadPairError):
    """A construction would exceed the configured size limit."""


class CompositionError(QuadPairError):
    """Morphisms or tracks with incompatible sources and targets."""


DEFAULT_SIZE_GUARD = 400


def setup_logging(log_file: str = "quadpair.log", log_level: int = logging.INFO):
    """
    Set up logging configuration.

    Args:
        log_file: Path to the log file
        log_level: Logging level
    """
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    file_handler = logging.FileHandler(log_file, mode='a')
    file_handler.setLevel(log_level)
    file_handler.setFormatter(formatter)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Remove existing handlers
    root_logger.handlers = []

    root_logger.addHandler(file_handler)
    root_logger.addHandler(console_handler)

    return root_logger


def size_guard(config: Optional[Dict[str, Any]] = None) -> int:
    """
    Maximal number of generators a tensor-type construction may produce.

    The environment variable QUADPAIR_SIZE_GUARD wins over the configuration.
    """
    value = os.getenv("QUADPAIR_SIZE_GUARD")
    if value:
        try:
            return int(value)
        except ValueError:
            raise InputError(f"QUADPAIR_SIZE_GUARD must be an integer, got {value!r}")
    if config:
        return int(config.get("general", {}).get("size_guard", DEFAULT_SIZE_GUARD))
    return DEFAULT_SIZE_GUARD


def check_size(count: int, what: str, limit: Optional[int] = None):
    """Raise SizeGuardError when `count` generators exceed the guard."""
    limit = size_guard() if limit is None else limit
    if count > limit:
        raise SizeGuardError(f"{what} needs {count} generators, size guard is {limit}")


def save_report(report: Dict[str, Any], output_file: str = None) -> Optional[str]:
    """
    Save a verification report to a JSON file.

    Args:
        report: Report data (already JSON compatible)
        output_file: Optional output file path

    Returns:
        The path written, or None on failure
    """
    logger = logging.getLogger(__name__)

    if output_file is None:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        suite = str(report.get("suite", "report")).replace(" ", "_").lower()
        output_file = f"quadpair_{suite}_{timestamp}.json"

    try:
        directory = os.path.dirname(output_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(output_file, 'w') as f:
            json.dump(report, f, indent=2)

        logger.info(f"Report saved to: {output_file}")
        return output_file

    except Exception as e:
        logger.error(f"Error saving report: {str(e)}")
        return None


def format_report_for_display(report: Dict[str, Any]) -> str:
    """
    Format report data for console display.

    Args:
        report: Report data to format

    Returns:
        Formatted string
    """
    if not report or "checks" not in report:
        return "No report data available"

    checks = report["checks"]
    failed = [c for c in checks if not c.get("passed")]

    lines = []
    lines.append("\n" + "=" * 80)
    lines.append(f"SUITE: {report.get('suite', 'Unknown')}")
    lines.append(f"Seed: {report.get('seed', 'n/a')}   Checks: {len(checks)}   Failed: {len(failed)}")
    lines.append("=" * 80 + "\n")

    for check in checks:
        mark = "✅" if check.get("passed") else "❌"
        lines.append(f"{mark} {check.get('name', '?')}")
        if not check.get("passed") and check.get("witness"):
            lines.append(f"{'─' * 80}")
            for key, value in sorted(check["witness"].items()):
                lines.append(f"   {key}: {value}")
            lines.append(f"{'─' * 80}")

    return "\n".join(lines)


def load_config(config_file: str = "config.json") -> Dict[str, Any]:
    """
    Load configuration from JSON file.

    Args:
        config_file: Path to configuration file

    Returns:
        Configuration dictionary
    """
    try:
        with open(config_file, 'r') as f:
            config = json.load(f)
        return config
    except FileNotFoundError:
        raise FileNotFoundError(f"Configuration file not found: {config_file}")
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in configuration file: {str(e)}")
