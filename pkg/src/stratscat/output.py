"""
Writers for result tables: CSV with one file per table, or a single JSON or
YAML document holding every table plus run metadata.
"""
import csv
import io
import json
import math
import os
import sys
from collections import namedtuple

import numpy as np

from .utils import format_float
from .yaml import dump_document

Table = namedtuple("Table", ["name", "columns", "rows"])

AMPLITUDE_NAMES = ("r_left", "r_right", "t")


def amplitude_columns():
    columns = []
    for name in AMPLITUDE_NAMES:
        columns.extend(
            ["re_" + name, "im_" + name, "abs_" + name, "arg_" + name]
        )
    return columns


def amplitude_cells(amplitudes):
    """
    Re, Im, modulus and phase of each amplitude in ``AMPLITUDE_NAMES`` order;
    all None when ``amplitudes`` is None.
    """
    if amplitudes is None:
        return [None] * 4 * len(AMPLITUDE_NAMES)
    cells = []
    for value, modulus, phase in zip(
        amplitudes, amplitudes.moduli, amplitudes.phases
    ):
        value = complex(value)
        cells.extend([value.real, value.imag, modulus, phase])
    return cells


def _plain(value):
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def format_cell(value):
    value = _plain(value)
    if value is None:
        return ""
    elif isinstance(value, bool):
        return "true" if value else "false"
    elif isinstance(value, float):
        return format_float(value)
    return str(value)


def sidecar_path(path, table_name):
    stem, ext = os.path.splitext(path)
    return "{}.{}{}".format(stem, table_name, ext)


def _write_csv_table(fp, table):
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])


def document(tables, metadata):
    return {
        "metadata": {k: _plain(v) for k, v in metadata.items()},
        "tables": {
            table.name: [
                {c: _plain(v) for c, v in zip(table.columns, row)}
                for row in table.rows
            ]
            for table in tables
        },
    }


def render(tables, metadata, fmt):
    """
    The whole output as text, for writing to stdout. CSV tables after the
    first are introduced by a ``# <name>`` line.
    """
    if fmt == "json":
        return json.dumps(document(tables, metadata), indent=2) + "\n"
    elif fmt == "yaml":
        return dump_document(document(tables, metadata))
    buf = io.StringIO()
    for i, table in enumerate(tables):
        if i:
            buf.write("\n# {}\n".format(table.name))
        _write_csv_table(buf, table)
    return buf.getvalue()


def write_tables(path, tables, metadata, fmt="csv"):
    """
    Write ``tables`` and return the paths written. With CSV the first table
    goes to ``path`` and the others next to it as ``<stem>.<table>.csv``;
    ``path`` None means stdout.
    """
    if path is None:
        sys.stdout.write(render(tables, metadata, fmt))
        return []

    if fmt != "csv":
        with open(path, "w") as fp:
            fp.write(render(tables, metadata, fmt))
        return [path]

    written = []
    for i, table in enumerate(tables):
        target = path if i == 0 else sidecar_path(path, table.name)
        with open(target, "w", newline="") as fp:
            _write_csv_table(fp, table)
        written.append(target)
    return written
