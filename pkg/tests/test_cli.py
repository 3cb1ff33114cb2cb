import csv
import json
import math
import os
import shutil
from tempfile import mkdtemp
from unittest import TestCase

import pytest

from stratscat.cli import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_SOLVER,
    build_parser,
    cli_overrides,
    main,
)
from stratscat.core import WaveContext
from stratscat.slabstack import amplitudes_from_matrix, slab_matrix
from stratscat.xcheck import locate_spectral_singularity

from .utils import write_file

FIGURE = """\
figure:
  kappa_ell: {start: 0.1, stop: 10, num: 5, spacing: log}
  k_star_ell: [1, 5]
"""

SCATTER = """\
profile:
  family: homogeneous
  eps_hat: [2.25, 0.1]
k: 1.5
theta_deg: 30
"""

DESIGN = """\
design:
  family: parabolic
  kappa_ell: 1
  k_star: 5
  theta_star_deg: 180
  nodes: 64
"""


def read_rows(path):
    with open(path) as fp:
        return list(csv.DictReader(fp))


class ParserTests(TestCase):
    def test_overrides(self):
        args = build_parser().parse_args(
            ["scatter", "--method", "psi, riccati", "--rtol", "1e-8", "--out", "x.csv"]
        )
        assert cli_overrides(args) == {
            "methods": ["psi", "riccati"],
            "rtol": 1e-8,
            "output": {"path": "x.csv"},
        }

    def test_no_overrides(self):
        assert cli_overrides(build_parser().parse_args(["figure"])) == {}

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class CommandTests(TestCase):
    def setUp(self):
        super(CommandTests, self).setUp()
        self.temp_dir = mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)
        super(CommandTests, self).tearDown()

    def path(self, name):
        return os.path.join(self.temp_dir, name)

    def config(self, content):
        return write_file(self.path("run.yml"), content)

    def test_figure_csv(self):
        out = self.path("figure.csv")
        assert main(["figure", "--config", self.config(FIGURE), "--out", out]) == 0
        phase_rows = read_rows(out)
        assert len(phase_rows) == 5
        assert phase_rows[0]["method"] == "closed_form"
        assert phase_rows[0]["tolerance"] == ""
        reflection_rows = read_rows(self.path("figure.left_reflection.csv"))
        assert len(reflection_rows) == 10
        assert all(row["within_bound"] == "true" for row in reflection_rows)

    def test_figure_json(self):
        out = self.path("figure.json")
        argv = ["figure", "--config", self.config(FIGURE), "--out", out]
        assert main(argv + ["--format", "json"]) == EXIT_OK
        with open(out) as fp:
            loaded = json.load(fp)
        assert loaded["metadata"]["command"] == "figure"
        assert len(loaded["tables"]["phase_shift"]) == 5
        assert not os.path.exists(self.path("figure.left_reflection.json"))

    def test_figure_is_reproducible(self):
        config = self.config(FIGURE)
        first, second = self.path("first.csv"), self.path("second.csv")
        assert main(["figure", "--config", config, "--out", first]) == 0
        assert main(["figure", "--config", config, "--out", second]) == 0
        for name in ("first", "second"):
            assert os.path.exists(self.path(name + ".left_reflection.csv"))
        with open(first, "rb") as fp1, open(second, "rb") as fp2:
            assert fp1.read() == fp2.read()

    def test_scatter(self):
        out = self.path("scatter.csv")
        argv = ["scatter", "--config", self.config(SCATTER), "--out", out]
        assert main(argv + ["--method", "riccati,evolution"]) == EXIT_OK
        rows = read_rows(out)
        assert [row["method"] for row in rows] == ["riccati", "evolution"]
        ctx = WaveContext.from_degrees(1.5, 30.0)
        exact = amplitudes_from_matrix(slab_matrix(2.25 + 0.1j, 1.0, 0.0, 1.0, ctx))
        for row in rows:
            found = complex(float(row["re_r_left"]), float(row["im_r_left"]))
            assert abs(found - exact.r_left) < 1e-7
            assert abs(float(row["abs_t"]) - abs(exact.t)) < 1e-7
        assert rows[0]["det_drift"] == ""
        assert float(rows[1]["det_drift"]) < 1e-9

    def test_scatter_sweep(self):
        content = SCATTER.replace("k: 1.5", "k_sweep: {start: 1, stop: 2, num: 3}")
        out = self.path("scatter.csv")
        argv = ["scatter", "--config", self.config(content), "--out", out]
        assert main(argv + ["--threads", "2"]) == EXIT_OK
        assert [row["k"] for row in read_rows(out)] == ["1.0", "1.5", "2.0"]

    def test_design(self):
        out = self.path("design.csv")
        assert main(["design", "--config", self.config(DESIGN), "--out", out]) == 0
        assert len(read_rows(out)) == 65
        (summary,) = read_rows(self.path("design.summary.csv"))
        assert float(summary["verified_abs_r_right"]) < 1e-7
        assert abs(float(summary["abs_t"]) - 1) < 1e-12
        assert summary["pt_symmetric"] == "true"
        assert summary["method"] == "riccati"

    def test_xcheck(self):
        out = self.path("xcheck.csv")
        argv = ["xcheck", "--config", self.config(SCATTER), "--out", out]
        assert main(argv + ["--method", "riccati,helmholtz,psi"]) == EXIT_OK
        (summary,) = read_rows(self.path("xcheck.summary.csv"))
        assert summary["passed"] == "true"
        assert summary["methods"] == "riccati,helmholtz,psi"
        assert len(read_rows(self.path("xcheck.deviations.csv"))) == 3

    def test_xcheck_failure(self):
        config = self.config(SCATTER + "tolerance: 1.0e-30\n")
        out = self.path("xcheck.csv")
        argv = ["xcheck", "--config", config, "--out", out, "--method", "riccati,psi"]
        assert main(argv) == EXIT_CHECK_FAILED
        (summary,) = read_rows(self.path("xcheck.summary.csv"))
        assert summary["passed"] == "false"

    def test_unwritable_output(self):
        out = self.path("missing/figure.csv")
        argv = ["figure", "--config", self.config(FIGURE), "--out", out]
        assert main(argv) == EXIT_IO


def test_stdout(capsys):
    assert main(["figure"]) == EXIT_OK
    out, err = capsys.readouterr()
    assert out.startswith("kappa_ell,phi,method,tolerance\n")
    assert "\n# left_reflection\n" in out


def test_bad_config(tmpdir, capsys):
    config = tmpdir.join("run.yml")
    config.write(SCATTER.replace("k: 1.5", "k: -1.5"))
    assert main(["scatter", "--config", str(config)]) == EXIT_CONFIG
    out, err = capsys.readouterr()
    assert out == ""
    assert "stratscat: configuration error: line 4, k:" in err


def test_design_with_q_minus_one_is_config_error(tmpdir, capsys):
    config = tmpdir.join("run.yml")
    config.write(
        "design:\n"
        "  family: sinusoidal\n"
        "  z: [-1.0, 0.0]\n"
        "  theta_star_deg: 180\n"
    )
    out = str(tmpdir.join("design.csv"))
    assert main(["design", "--config", str(config), "--out", out]) == EXIT_CONFIG
    stdout, err = capsys.readouterr()
    assert "stratscat: configuration error: design: Q(x) = -1" in err
    assert not os.path.exists(out)


def test_missing_config(tmpdir, capsys):
    assert main(["scatter", "--config", str(tmpdir.join("nope.yml"))]) == EXIT_IO
    out, err = capsys.readouterr()
    assert "I/O error" in err


def test_spectral_singularity(tmpdir, capsys):
    point = locate_spectral_singularity(2.25, 1.0, WaveContext(1.0))
    config = tmpdir.join("run.yml")
    config.write(
        "profile:\n"
        "  family: homogeneous\n"
        "  eps_hat: [{!r}, {!r}]\n"
        "  ell: 1.2\n"
        "k: {!r}\n".format(point.eps_hat.real, point.eps_hat.imag, point.k)
    )
    assert main(["scatter", "--config", str(config)]) == EXIT_SOLVER
    out, err = capsys.readouterr()
    assert "stratscat: solver error: Spectral singularity" in err
    assert "x_blow" in err


def test_design_target_is_vacuum_matched(tmpdir):
    config = tmpdir.join("run.yml")
    config.write(DESIGN)
    out = str(tmpdir.join("design.json"))
    argv = ["design", "--config", str(config), "--out", out, "--format", "json"]
    assert main(argv) == EXIT_OK
    with open(out) as fp:
        profile = json.load(fp)["tables"]["profile"]
    assert profile[0]["x"] == 0.0
    assert profile[-1]["x"] == 1.0
    assert profile[32]["x"] == 0.5
    assert math.isclose(profile[32]["re_eps_hat"], 1 - 4 * 0.25 / 1.25 ** 2)
