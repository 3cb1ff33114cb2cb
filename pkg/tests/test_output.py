import csv
import json
import shutil
from tempfile import mkdtemp
from unittest import TestCase

import numpy as np
import yaml

from stratscat.output import (
    Table,
    amplitude_cells,
    amplitude_columns,
    document,
    format_cell,
    render,
    sidecar_path,
    write_tables,
)
from stratscat.slabstack import Amplitudes

TABLES = [
    Table("scatter", ["k", "method", "value", "passed"], [[1.0, "riccati", 0.1, True]]),
    Table("summary", ["k", "error"], [[np.float64(2.0), None], [3.0, float("nan")]]),
]

METADATA = {"command": "scatter", "rtol": 1e-10, "seed": None}


class FormatCellTests(TestCase):
    def test_none(self):
        assert format_cell(None) == ""

    def test_not_finite(self):
        assert format_cell(float("nan")) == ""
        assert format_cell(np.float64("inf")) == ""

    def test_bool(self):
        assert format_cell(True) == "true"
        assert format_cell(np.bool_(False)) == "false"

    def test_float_round_trip(self):
        assert format_cell(0.1) == "0.1"
        assert float(format_cell(np.float64(1) / 3)) == 1 / 3

    def test_other(self):
        assert format_cell(3) == "3"
        assert format_cell("riccati") == "riccati"


class AmplitudeCellTests(TestCase):
    def test_columns(self):
        columns = amplitude_columns()
        assert len(columns) == 12
        assert columns[:4] == ["re_r_left", "im_r_left", "abs_r_left", "arg_r_left"]

    def test_cells(self):
        cells = amplitude_cells(Amplitudes(1j, -1.0, 0.5 + 0.5j))
        assert cells[:4] == [0.0, 1.0, 1.0, np.pi / 2]
        assert cells[10] == abs(0.5 + 0.5j)

    def test_missing(self):
        assert amplitude_cells(None) == [None] * 12


def test_sidecar_path():
    assert sidecar_path("out/run.csv", "summary") == "out/run.summary.csv"
    assert sidecar_path("run", "summary") == "run.summary"


def test_document():
    doc = document(TABLES, METADATA)
    assert doc["metadata"] == METADATA
    assert doc["tables"]["scatter"] == [
        {"k": 1.0, "method": "riccati", "value": 0.1, "passed": True}
    ]
    assert doc["tables"]["summary"][1] == {"k": 3.0, "error": None}
    assert type(doc["tables"]["summary"][0]["k"]) is float


def test_render_csv():
    text = render(TABLES, METADATA, "csv")
    assert text == (
        "k,method,value,passed\n"
        "1.0,riccati,0.1,true\n"
        "\n"
        "# summary\n"
        "k,error\n"
        "2.0,\n"
        "3.0,\n"
    )


def test_render_json():
    loaded = json.loads(render(TABLES, METADATA, "json"))
    assert loaded == document(TABLES, METADATA)


def test_render_yaml():
    loaded = yaml.safe_load(render(TABLES, METADATA, "yaml"))
    assert loaded == document(TABLES, METADATA)


def test_write_to_stdout(capsys):
    assert write_tables(None, TABLES[:1], METADATA) == []
    out, err = capsys.readouterr()
    assert out == "k,method,value,passed\n1.0,riccati,0.1,true\n"


class WriteTablesTests(TestCase):
    def setUp(self):
        super(WriteTablesTests, self).setUp()
        self.temp_dir = mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)
        super(WriteTablesTests, self).tearDown()

    def test_csv_with_sidecars(self):
        path = self.temp_dir + "/run.csv"
        written = write_tables(path, TABLES, METADATA)
        assert written == [path, self.temp_dir + "/run.summary.csv"]
        with open(written[1]) as fp:
            rows = list(csv.reader(fp))
        assert rows == [["k", "error"], ["2.0", ""], ["3.0", ""]]

    def test_json(self):
        path = self.temp_dir + "/run.json"
        assert write_tables(path, TABLES, METADATA, fmt="json") == [path]
        with open(path) as fp:
            loaded = json.load(fp)
        assert sorted(loaded["tables"]) == ["scatter", "summary"]
        assert loaded["metadata"]["command"] == "scatter"

    def test_deterministic(self):
        first = self.temp_dir + "/first.yml"
        second = self.temp_dir + "/second.yml"
        write_tables(first, TABLES, METADATA, fmt="yaml")
        write_tables(second, TABLES, METADATA, fmt="yaml")
        with open(first, "rb") as fp1, open(second, "rb") as fp2:
            assert fp1.read() == fp2.read()
