import csv
import json
import logging
import math
import os

import numpy as np
import pytest

from modules import published_forms
from modules.logger import RunLogger, dumps, format_value, plain, setup_logging


def read_json(path):
    with open(path) as f:
        return json.load(f)


def test_floats_keep_full_precision():
    assert format_value(0.1 + 0.2) == "0.30000000000000004"
    assert format_value(np.int64(3)) == 3
    assert float(format_value(math.pi)) == math.pi


def test_plain_converts_numpy_and_non_finite():
    data = plain({"a": np.float64(1.5), "b": np.arange(3), "c": math.nan})
    assert data == {"a": 1.5, "b": [0, 1, 2], "c": "nan"}
    assert json.loads(dumps(data))["b"] == [0, 1, 2]


def test_manifest_lists_files_and_ledger(tmp_path):
    with RunLogger(str(tmp_path), "spectrum", {"family": "harmonic"}, "1.0.0", {"tol": 1e-9}) as run:
        run.write_json("spectrum.json", {"energies": [0.0, 2.0]})
        published_forms.reconcile("topic", "item", 1.0, 1.5)
        run.write_ledger_csv()
        run.finish({"status": "ok"})

    manifest = read_json(tmp_path / "manifest.json")
    assert manifest["command"] == "spectrum"
    assert manifest["parameters"] == {"family": "harmonic"}
    assert manifest["files"] == ["spectrum.json", "ledger.csv"]
    assert manifest["outcome"] == {"status": "ok"}
    assert [entry["item"] for entry in manifest["ledger"]] == ["item"]
    assert manifest["ledger"][0]["agrees"] is False

    with open(tmp_path / "ledger.csv") as f:
        rows = list(csv.DictReader(f))
    assert rows[0]["topic"] == "topic"
    assert rows[0]["agrees"] == "False"


def test_ledger_is_detached_after_close(tmp_path):
    with RunLogger(str(tmp_path), "catalog", {}, "1.0.0") as run:
        run.finish({})
    published_forms.reconcile("topic", "late", 1.0, 1.0)
    assert run.ledger == []


def test_error_manifest_when_run_aborts(tmp_path):
    with pytest.raises(RuntimeError):
        with RunLogger(str(tmp_path), "verify", {}, "1.0.0"):
            raise RuntimeError("boom")
    outcome = read_json(tmp_path / "manifest.json")["outcome"]
    assert outcome == {"status": "error", "error": "RuntimeError", "message": "boom"}


def test_columns_round_trip_exactly(tmp_path):
    values = [0.1, 1.0 / 3.0, 2.0 ** -40]
    with RunLogger(str(tmp_path), "sample", {}, "1.0.0") as run:
        run.write_columns("V.csv", {"x": [0.0, 0.5, 1.0], "V": values})
        run.finish({})
    with open(tmp_path / "V.csv") as f:
        rows = list(csv.DictReader(f))
    assert [float(row["V"]) for row in rows] == values


def test_ledger_file_receives_disagreements(tmp_path):
    ledger_file = os.path.join(str(tmp_path), "logs", "ledger.log")
    with RunLogger(str(tmp_path / "out"), "verify", {}, "1.0.0", config={"ledger_log_file": ledger_file}) as run:
        published_forms.reconcile("topic", "agreeing", 2.0, 2.0)
        published_forms.reconcile("topic", "differing", 2.0, 3.0)
        run.finish({})
    with open(ledger_file) as f:
        text = f.read()
    assert "differing" in text
    assert "agreeing" not in text


def test_setup_logging_replaces_its_own_handlers(tmp_path):
    config = {"log_level": "INFO", "log_file": str(tmp_path / "engine.log")}
    setup_logging(config)
    setup_logging(config)
    root = logging.getLogger()
    ours = [h for h in root.handlers if getattr(h, "_engine_handler", False)]
    assert len(ours) == 2
    logging.getLogger("modules.test").info("hello")
    for handler in ours:
        handler.flush()
    with open(tmp_path / "engine.log") as f:
        assert "hello" in f.read()
    for handler in ours:
        root.removeHandler(handler)
        handler.close()


def test_array_comparisons_are_summarized():
    entry = published_forms.reconcile("topic", "curve", np.zeros(5), np.ones(5))
    assert entry.to_dict()["printed"] == "<5 samples, max |v| 0>"
