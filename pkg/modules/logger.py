"""
Logger Module — Logging setup and run artifacts (manifest, ledger, CSV/JSON).

Configures the Python logging system once per process. RunLogger collects
every reconciliation record mirrored on the 'ledger' logger during a command
and writes the output files plus exactly one manifest.json per run.
"""

import os
import csv
import json
import math
import logging
import logging.handlers
from datetime import datetime, timezone

import numpy as np


def setup_logging(config, log_level=None):
    """
    Configure the Python logging system with file and console handlers.

    Args:
        config: dict from settings.yaml 'logging' section.
        log_level: Root level name; falls back to config, then INFO.
    """
    log_file = config.get("log_file", "output/logs/engine.log")
    max_size_mb = config.get("max_log_size_mb", 10)
    backup_count = config.get("backup_count", 5)
    log_level = log_level or config.get("log_level", "INFO")

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_level, logging.INFO))
    for handler in list(root_logger.handlers):
        if getattr(handler, "_engine_handler", False):
            root_logger.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(
        "[%(asctime)s] %(levelname)-8s %(name)-25s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    )

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=max_size_mb * 1024 * 1024,
            backupCount=backup_count
        )
        file_handler.setFormatter(formatter)
        file_handler._engine_handler = True
        root_logger.addHandler(file_handler)

    # stderr keeps stdout free for JSON/CSV
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler.setLevel(config.get("console_level", "WARNING"))
    console_handler._engine_handler = True
    root_logger.addHandler(console_handler)

    logging.debug("Logging initialized — level=%s, file=%s", log_level, log_file)


# =============================================================================
# Serialization Helpers
# =============================================================================

def format_value(value):
    """CSV cell text: floats in shortest round-trip form."""
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float):
        return repr(value)
    return value


def plain(value):
    """Convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def dumps(data):
    return json.dumps(plain(data), indent=2, allow_nan=False) + "\n"


# =============================================================================
# Ledger Collection
# =============================================================================

class LedgerCollector(logging.Handler):
    """Gathers LedgerEntry records passed via `extra={'ledger_entry': ...}`."""

    def __init__(self):
        super().__init__(level=logging.DEBUG)
        self.entries = []

    def emit(self, record):
        entry = getattr(record, "ledger_entry", None)
        if entry is not None:
            self.entries.append(entry.to_dict())


class RunLogger:
    """
    One command run: output files, collected ledger records and the manifest.

    Usage:
        with RunLogger(out_dir, "verify", parameters, version, tolerances) as run:
            run.write_json("verify.json", report)
            run.finish({"passed": True})
    """

    def __init__(self, out_dir, command, parameters, version, tolerances=None, config=None):
        config = config or {}
        self.out_dir = out_dir
        self.command = command
        self.parameters = parameters
        self.version = version
        self.tolerances = tolerances or {}
        self.files = []
        self.manifest = None
        os.makedirs(out_dir, exist_ok=True)

        self._ledger_logger = logging.getLogger("ledger")
        self._ledger_logger.setLevel(logging.DEBUG)
        self._collector = LedgerCollector()
        self._ledger_logger.addHandler(self._collector)

        self._ledger_file_handler = None
        ledger_file = config.get("ledger_log_file")
        if ledger_file:
            ledger_dir = os.path.dirname(ledger_file)
            if ledger_dir:
                os.makedirs(ledger_dir, exist_ok=True)
            handler = logging.handlers.RotatingFileHandler(
                ledger_file, maxBytes=5 * 1024 * 1024, backupCount=3
            )
            handler.setLevel(logging.WARNING)
            handler.setFormatter(logging.Formatter(
                "%(asctime)s | %(message)s", datefmt="%Y-%m-%d %H:%M:%S"
            ))
            self._ledger_logger.addHandler(handler)
            self._ledger_file_handler = handler

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if self.manifest is None:
            outcome = {"status": "error", "error": type(exc).__name__, "message": str(exc)} if exc else {}
            self.finish(outcome)
        self.close()
        return False

    @property
    def ledger(self):
        return list(self._collector.entries)

    def _path(self, name):
        path = os.path.join(self.out_dir, name)
        if name not in self.files:
            self.files.append(name)
        return path

    def write_json(self, name, data):
        path = self._path(name)
        with open(path, "w") as f:
            f.write(dumps(data))
        logging.getLogger(__name__).info("Wrote %s", path)
        return path

    def write_csv(self, name, fieldnames, rows):
        """
        Args:
            fieldnames: Column order.
            rows: Iterable of dicts keyed by fieldnames.
        """
        path = self._path(name)
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            count = 0
            for row in rows:
                writer.writerow({k: format_value(v) for k, v in row.items()})
                count += 1
        logging.getLogger(__name__).info("Wrote %d rows to %s", count, path)
        return path

    def write_columns(self, name, columns):
        """CSV from equal-length columns, given as an ordered dict name -> sequence."""
        names = list(columns)
        rows = (dict(zip(names, values)) for values in zip(*columns.values()))
        return self.write_csv(name, names, rows)

    def write_ledger_csv(self, name="ledger.csv"):
        fieldnames = ["topic", "item", "printed", "authoritative", "abs_diff", "rel_diff", "agrees", "note"]
        return self.write_csv(name, fieldnames, self.ledger)

    def finish(self, outcome):
        """Write manifest.json; the timestamp is the only nondeterministic field."""
        self.manifest = {
            "command": self.command,
            "parameters": self.parameters,
            "version": self.version,
            "tolerances": self.tolerances,
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "outcome": outcome,
            "files": list(self.files),
            "ledger": self.ledger,
        }
        path = os.path.join(self.out_dir, "manifest.json")
        with open(path, "w") as f:
            f.write(dumps(self.manifest))
        return self.manifest

    def close(self):
        self._ledger_logger.removeHandler(self._collector)
        if self._ledger_file_handler is not None:
            self._ledger_logger.removeHandler(self._ledger_file_handler)
            self._ledger_file_handler.close()
