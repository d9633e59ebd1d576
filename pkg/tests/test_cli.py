"""Command-line surface tests (driven in-process through main())."""

from __future__ import annotations

import io
import json

import pytest

from cmrecip.cli import main


def run_cli(argv, cache_dir=None):
    if cache_dir is not None:
        argv = list(argv) + ["--cache-dir", str(cache_dir)]
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def records_of(stdout_text):
    return [json.loads(line) for line in stdout_text.splitlines()]


class TestVerify:
    def test_g1(self, tmp_path):
        code, out, err = run_cli(["verify", "--g", "1"], tmp_path)
        assert code == 0
        recs = records_of(out)
        assert recs[0]["record"] == "header"
        certs = [r for r in recs if r["record"] == "certificate"]
        assert len(certs) == 1 and certs[0]["certificateKind"] == "FullImage"
        assert recs[-1]["pass"] is True

    def test_g2_all_full_image(self, tmp_path):
        code, out, _ = run_cli(["verify", "--g", "2"], tmp_path)
        assert code == 0
        certs = [r for r in records_of(out) if r["record"] == "certificate"]
        assert {r["certificateKind"] for r in certs} == {"FullImage"}
        assert all(r["transportHolds"] and r["faithfulPremiseHolds"] for r in certs)

    def test_g4_kinds_and_weyl(self, tmp_path):
        code, out, _ = run_cli(["verify", "--g", "4", "--weyl"], tmp_path)
        assert code == 0
        recs = records_of(out)
        kinds = {r["certificateKind"] for r in recs if r["record"] == "certificate"}
        assert kinds <= {"FullImage", "TorsionFree", "IndexTwoSumEven"}
        assert recs[-1]["weylSurjectivity"] is True

    def test_bytes_identical_across_jobs(self, tmp_path):
        outputs = []
        for jobs in ("1", "2", "8"):
            code, out, _ = run_cli(["verify", "--g", "3", "--jobs", jobs], tmp_path)
            assert code == 0
            outputs.append(out.encode())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_sorted_by_config_key(self, tmp_path):
        _, out, _ = run_cli(["verify", "--g", "3"], tmp_path)
        keys = [r["configKey"] for r in records_of(out) if r["record"] == "certificate"]
        assert keys == sorted(keys)

    def test_usage_errors(self):
        assert run_cli(["verify", "--g", "9"])[0] == 1
        assert run_cli(["verify"])[0] == 1

    def test_wall_time_only_on_stderr(self, tmp_path):
        _, out, err = run_cli(["verify", "--g", "1"], tmp_path)
        assert "wall_time" not in out
        assert "wall_time_seconds=" in err


class TestEnumerate:
    def test_g2(self, tmp_path):
        code, out, _ = run_cli(["enumerate", "--g", "2"], tmp_path)
        assert code == 0
        recs = records_of(out)
        configs = [r for r in recs if r["record"] == "config"]
        assert len(configs) == 3
        assert sum(1 for r in configs if r["primitive"]) == 2

    def test_primitive_filter(self, tmp_path):
        code, out, _ = run_cli(["enumerate", "--g", "2", "--primitive"], tmp_path)
        configs = [r for r in records_of(out) if r["record"] == "config"]
        assert len(configs) == 2 and all(r["primitive"] for r in configs)

    def test_cache_file_created(self, tmp_path):
        run_cli(["enumerate", "--g", "2"], tmp_path)
        assert list(tmp_path.glob("admissible-g2-*.json"))

    def test_env_var_cache(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CMRECIP_CACHE_DIR", str(tmp_path / "envcache"))
        run_cli(["enumerate", "--g", "1"])
        assert list((tmp_path / "envcache").glob("admissible-g1-*.json"))

    def test_flag_wins_over_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CMRECIP_CACHE_DIR", str(tmp_path / "envcache"))
        run_cli(["enumerate", "--g", "1"], tmp_path / "flagcache")
        assert list((tmp_path / "flagcache").glob("admissible-g1-*.json"))
        assert not (tmp_path / "envcache").exists()


class TestTransfer:
    @pytest.mark.parametrize("case", ["gerth", "quartic"])
    def test_builtin_cases(self, case):
        code, out, _ = run_cli(["transfer", "--case", case])
        assert code == 0
        recs = records_of(out)
        assert recs[-1]["pass"] is True
        chain = next(r for r in recs if r["record"] == "chain")
        assert all("witness" in s for s in chain["steps"])

    def test_unknown_case(self):
        assert run_cli(["transfer", "--case", "nope"])[0] == 1


class TestQuad:
    def test_class_number(self):
        code, out, _ = run_cli(["quad", "class-number", "-d", "-23"])
        assert code == 0 and out == "3\n"
        code, out, _ = run_cli(["quad", "class-number", "-d", "-4"])
        assert code == 0 and out == "1\n"

    def test_invalid_discriminant(self):
        code, _, err = run_cli(["quad", "class-number", "-d", "-5"])
        assert code == 1 and "error" in err

    def test_bs_table(self):
        code, out, _ = run_cli(["quad", "bs-table", "--min", "3", "--max", "30"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "-3,1,0.0"
        for line in lines:
            d, h, ratio = line.split(",")
            int(d), int(h), float(ratio)

    def test_bs_table_row_count_frozen(self):
        # regression value frozen from the first run
        code, out, _ = run_cli(["quad", "bs-table", "--min", "3", "--max", "1000"])
        assert code == 0
        assert len(out.splitlines()) == 305

    def test_split_demo(self):
        code, out, _ = run_cli(["quad", "split-demo", "-d", "-23", "--bound", "2"])
        assert code == 0
        rec = json.loads(out)
        assert rec["allDistinct"] is True

    def test_split_demo_bad_bound(self):
        code, _, _ = run_cli(["quad", "split-demo", "-d", "-23", "--bound", "99"])
        assert code == 1


class TestCohomology:
    def test_demo(self):
        code, out, _ = run_cli(["cohomology", "--demo"])
        assert code == 0
        recs = records_of(out)
        assert recs[-1]["pass"] is True
        assert sum(1 for r in recs if r["record"] == "cohomology") == 5
