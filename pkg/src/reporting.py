#!/usr/bin/env python
"""
Verification reports: check records, JSON serialization and atomic writes.
"""
import fcntl
import json
import logging
import math
import os
import shutil
import tempfile
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INFO = "info"


@dataclass
class Check:
    """One verified claim.

    Attributes:
        name: Dotted check name, '<suite>.<claim>'
        status: 'pass', 'fail' or 'info'
        measured: Measured quantity
        bound: Bound it is compared against, if any
        tolerance: Slack allowed on the comparison, if any
        details: Free-form extra data
    """
    name: str
    status: str
    measured: Any = None
    bound: Any = None
    tolerance: Any = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self):
        return self.status == FAIL

    def to_dict(self):
        return {"name": self.name, "status": self.status, "measured": self.measured,
                "bound": self.bound, "tolerance": self.tolerance, "details": self.details}


def check(name, ok, measured=None, bound=None, tolerance=None, **details):
    """Check with status pass/fail from `ok`"""
    return Check(name, PASS if ok else FAIL, measured, bound, tolerance, details)


def info(name, measured=None, bound=None, **details):
    return Check(name, INFO, measured, bound, None, details)


def at_most(name, measured, bound, tolerance=0.0, **details):
    """Passes when measured <= bound + tolerance."""
    return check(name, measured <= bound + tolerance, measured, bound, tolerance, **details)


@dataclass
class Report:
    command: str
    params: Dict[str, Any]
    checks: List[Check] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def failures(self):
        return [c for c in self.checks if c.failed]

    @property
    def exit_code(self):
        return 1 if self.failures else 0

    def extend(self, checks):
        self.checks.extend(checks)

    def to_dict(self):
        return sanitize({"command": self.command, "params": self.params,
                         "checks": [c.to_dict() for c in self.checks], "timing": self.timing})

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    def summary(self):
        """Human-readable one line per check plus a totals line"""
        lines = []
        for c in self.checks:
            line = f"[{c.status.upper():4}] {c.name}"
            if c.measured is not None and not isinstance(c.measured, (list, dict)):
                line += f"  measured={_short(c.measured)}"
            if c.bound is not None and not isinstance(c.bound, (list, dict)):
                line += f"  bound={_short(c.bound)}"
            lines.append(line)
        counts = {s: sum(1 for c in self.checks if c.status == s) for s in (PASS, FAIL, INFO)}
        lines.append(f"{self.command}: {counts[PASS]} passed, {counts[FAIL]} failed, {counts[INFO]} info")
        return "\n".join(lines)


def _short(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def sanitize(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [sanitize(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return obj


def write_report(file_path, report, encoding="utf-8", timeout=10):
    """Write a report atomically.

    The JSON goes to a temporary file in the target directory, is fsynced
    and then moved into place under an exclusive lock on '<path>.lock'.

    Args:
        file_path: Destination path
        report: Report or already-serialized string
        encoding: Text encoding
        timeout: Lock timeout in seconds

    Returns:
        True if successful, False otherwise
    """
    content = report if isinstance(report, str) else report.to_json()
    file_dir = os.path.dirname(os.path.abspath(file_path))
    temp_filename: Optional[str] = None

    try:
        os.makedirs(file_dir, exist_ok=True)
        with tempfile.NamedTemporaryFile(mode="w", dir=file_dir, delete=False,
                                         suffix=".tmp", encoding=encoding) as temp_file:
            temp_file.write(content)
            temp_file.write("\n")
            temp_file.flush()
            os.fsync(temp_file.fileno())
            temp_filename = temp_file.name

        lock_file_path = f"{file_path}.lock"
        lock_fd = os.open(lock_file_path, os.O_CREAT | os.O_TRUNC | os.O_WRONLY, 0o644)
        try:
            start_time = time.time()
            while True:
                try:
                    fcntl.flock(lock_fd, fcntl.LOCK_EX | fcntl.LOCK_NB)
                    break
                except (OSError, IOError):
                    if time.time() - start_time > timeout:
                        raise TimeoutError(f"Could not acquire lock for {file_path}")
                    time.sleep(0.1)

            shutil.move(temp_filename, file_path)
            temp_filename = None
            logger.debug(f"Report written to {file_path}")
            return True
        finally:
            try:
                fcntl.flock(lock_fd, fcntl.LOCK_UN)
                os.close(lock_fd)
                if os.path.exists(lock_file_path):
                    os.unlink(lock_file_path)
            except (OSError, IOError):
                pass

    except Exception as e:
        logger.error(f"Error writing report {file_path}: {e}")
        return False
    finally:
        if temp_filename and os.path.exists(temp_filename):
            try:
                os.unlink(temp_filename)
            except OSError:
                pass
