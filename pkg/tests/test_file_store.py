"""Tests for JSON document storage and the output generators."""
import csv
import json

import numpy as np
import pytest

from src.generators.csv_generator import CSVGenerator
from src.generators.json_generator import JSONGenerator
from src.utils.errors import InputError
from src.utils.file_store import DocumentStore, load_document


def test_save_stamps_last_updated(tmp_path):
    path = DocumentStore().save(str(tmp_path / "nested" / "doc.json"), {"dim": 2})
    document = load_document(path)
    assert document["dim"] == 2
    assert "last_updated" in document


def test_load_errors(tmp_path):
    store = DocumentStore()
    with pytest.raises(InputError):
        store.load(str(tmp_path / "missing.json"))
    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(InputError):
        store.load(str(tmp_path / "broken.json"))
    (tmp_path / "list.json").write_text("[1, 2]")
    with pytest.raises(InputError):
        store.load(str(tmp_path / "list.json"))


def test_csv_render_is_stable():
    generator = CSVGenerator()
    text = generator.render(["x", "mu"], [[0.1, 1 / 3], [1, -0.0]])
    assert text == "x,mu\n0.1,0.333333333333\n1,0\n"
    assert generator.render(["x", "mu"], [[0.1, 1 / 3]]) == generator.render(["x", "mu"], [[0.1, 1 / 3]])


def test_csv_reproduction_rows(tmp_path):
    path = str(tmp_path / "repro.csv")
    CSVGenerator(path).write_reproduction([
        {"example": 1, "row": "r", "criterion": "cor1", "reference_threshold": 0.1919,
         "computed_threshold": 0.19194, "status": "PASS", "note": ""},
        {"example": 2, "row": "g", "criterion": "thm2", "reference_threshold": 0.7152,
         "computed_threshold": None, "status": "DEVIATES", "note": "absent"},
    ])
    with open(path, encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    assert float(rows[0]["difference"]) == pytest.approx(4e-5)
    assert rows[1]["computed_threshold"] == "absent"
    assert rows[1]["difference"] == ""


def test_json_generator_handles_numpy(capsys):
    JSONGenerator().write({"values": np.arange(3), "x": np.float64(0.5), "dims": (2, 2)})
    data = json.loads(capsys.readouterr().out)
    assert data == {"values": [0, 1, 2], "x": 0.5, "dims": [2, 2]}


def test_json_generator_writes_file(tmp_path):
    path = tmp_path / "out" / "r.json"
    JSONGenerator(str(path)).write({"ok": True})
    assert json.loads(path.read_text()) == {"ok": True}
