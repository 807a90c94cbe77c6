import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from cantoreuler.report import (
    RunConfig,
    VerificationReport,
    frac_decimal,
    frac_str,
    log2_str,
)


def run_cli(args, cwd, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "cantoreuler.cli", *args],
        cwd=cwd,
        env=env,
        capture_output=True,
        text=True,
    )


class TestFormatting:
    def test_rational_strings(self):
        assert frac_str(Fraction(3, 16)) == "3/16"
        assert frac_decimal(Fraction(3, 16)) == "0.1875"
        assert frac_str(Fraction(7)) == "7"
        assert frac_decimal(Fraction(1, 3)).startswith("0.3333333")

    def test_log2_rendering(self):
        assert log2_str(511.3951) == "log2=5.113951e2"
        assert log2_str(-5.2336) == "log2=-5.233600e0"

    def test_empty_report_valid(self):
        rep = VerificationReport(RunConfig())
        doc = json.loads(rep.to_json_bytes())
        assert doc["status"] == "pass"
        assert doc["checks"] == []


class TestSubcommands:
    def test_unknown_subcommand_exit2(self, tmp_path):
        r = run_cli(["frobnicate"], tmp_path)
        assert r.returncode == 2

    def test_unknown_flag_exit2(self, tmp_path):
        r = run_cli(["cantor", "--nope"], tmp_path)
        assert r.returncode == 2

    def test_resource_limit_exit3(self, tmp_path):
        r = run_cli(["cantor", "--k", "9"], tmp_path)
        assert r.returncode == 3
        assert "resource limit" in r.stderr

    def test_cantor_report(self, tmp_path):
        out = tmp_path / "c.json"
        r = run_cli(["cantor", "--k", "1", "--output", str(out)], tmp_path)
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert len(doc["datasets"]["cubes"]) == 4
        corners = {tuple(c["corner"]) for c in doc["datasets"]["cubes"]}
        assert ("15/16", "15/16") in corners

    def test_morrey_omega(self, tmp_path):
        out = tmp_path / "m.json"
        r = run_cli(
            ["morrey", "--target", "omega", "--alpha", "1", "--depth", "1024", "--output", str(out)],
            tmp_path,
        )
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        norm = next(c for c in doc["checks"] if c["id"] == "morrey.norm.omega")
        assert norm["computed"]["rational"] == "9/4"
        arg = next(c for c in doc["checks"] if c["id"] == "morrey.argmax_level.omega")
        assert arg["computed"]["rational"] == "4"

    def test_sparse_profile_csv(self, tmp_path):
        out = tmp_path / "profile.csv"
        r = run_cli(["sparse", "--profile", "--max-gen", "4", "--output", str(out)], tmp_path)
        assert r.returncode == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 5  # header + 4 generations
        for line in lines[1:]:
            assert line.split(",")[4] == "0.1875"

    def test_measure_value(self, tmp_path):
        out = tmp_path / "v.json"
        r = run_cli(["measure", "--level", "4", "--ix", "0", "--iy", "0", "--output", str(out)], tmp_path)
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["checks"][0]["computed"]["rational"] == "1/4"

    def test_certify_dimension(self, tmp_path):
        out = tmp_path / "d.json"
        r = run_cli(
            ["certify-dimension", "--gamma", "1/10", "--delta", "1/100", "--output", str(out)],
            tmp_path,
        )
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["datasets"]["certificate"]["m"] == 4

    def test_env_override(self, tmp_path):
        out = tmp_path / "e.json"
        r = run_cli(
            ["cantor", "--output", str(out)],
            tmp_path,
            env_extra={"CANTOREULER_K": "0"},  # no such flag: ignored silently
        )
        assert r.returncode == 0
        out2 = tmp_path / "e2.csv"
        r = run_cli(
            ["cantor", "--k", "1", "--output", str(out2)],
            tmp_path,
            env_extra={"CANTOREULER_FORMAT": "csv"},
        )
        assert r.returncode == 0
        assert out2.read_text().startswith("id,anchor")


class TestVerifyAll:
    def test_byte_identical_reports(self, verify_all_runs):
        outs, codes = verify_all_runs
        assert outs[0] == outs[1]
        assert codes[0] == codes[1]

    def test_report_shape(self, verify_all_runs):
        outs, _ = verify_all_runs
        doc = json.loads(outs[0])
        assert doc["schema"] == "cantoreuler-report-v1"
        ids = {c["id"] for c in doc["checks"]}
        assert "morrey.omega.norm" in ids
        assert "sparse.divergence.contributions" in ids
        for key in (
            "cantor_hierarchy",
            "sparse_tower",
            "patch_geometry",
            "inner_tower",
            "morrey_growth",
            "sparse_divergence",
            "energy_decay",
        ):
            assert key in doc["datasets"]

    def test_default_battery_exits_clean(self, verify_all_runs):
        # Stated contract: defaults pass the whole battery, exit 0.  The
        # shipped weak-convergence decay targets are not attained by the
        # exact computed values (see the weak.bound_threshold.* checks in the
        # report), so this currently fails; kept as stated rather than
        # weakened.
        _, codes = verify_all_runs
        assert codes[0] == 0
