"""Scenario runner and command-line interface: exit codes, artifacts,
determinism of emitted files."""
import json

import pytest

from fiolab.cli import bundled_scenarios, main
from fiolab.runner import ScenarioError, load_scenario, run_scenario

ALL_SCENARIOS = ("chirp_phase", "compact_decay", "ffstar_gaussian",
                 "fourier_inversion", "multiplier_norm",
                 "noncompact_identity", "oscint_gaussian")


def cfg_path(name):
    return str(bundled_scenarios()[name])


class TestCli:
    def test_list_scenarios(self, capsys):
        assert main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        for name in ALL_SCENARIOS:
            assert name in out

    def test_run_fast_scenario(self, tmp_path, capsys):
        rc = main(["run", "fourier_inversion", "--out-dir",
                   str(tmp_path / "out")])
        assert rc == 0
        assert "[pass]" in capsys.readouterr().out
        assert (tmp_path / "out" / "manifest.json").exists()

    def test_oscint_artifacts(self, tmp_path):
        d = tmp_path / "out"
        assert main(["oscint", "oscint_gaussian", "--out-dir", str(d)]) == 0
        names = {p.name for p in d.iterdir()}
        assert {"oscint.json", "oscint_residuals.csv",
                "manifest.json"} <= names

    def test_spectrum_artifacts(self, tmp_path):
        d = tmp_path / "out"
        assert main(["spectrum", "compact_decay", "--out-dir", str(d)]) == 0
        names = {p.name for p in d.iterdir()}
        assert {"spectrum.json", "spectrum.csv", "manifest.json"} <= names

    def test_check_ffstar_pass(self, tmp_path):
        d = tmp_path / "out"
        assert main(["check-ffstar", "ffstar_gaussian",
                     "--out-dir", str(d)]) == 0
        outcomes = json.loads((d / "manifest.json").read_text())["outcomes"]
        assert outcomes[0]["passed"] is True
        assert outcomes[0]["max_rel_error"] < outcomes[0]["tol"]

    def test_failed_check_exits_one(self, tmp_path, capsys):
        rc = main(["check-ffstar", "ffstar_gaussian", "--out-dir",
                   str(tmp_path / "out"), "--override", "ffstar.tol=1e-9"])
        assert rc == 1
        assert "[FAIL]" in capsys.readouterr().out

    def test_unknown_scenario_exits_two(self, tmp_path, capsys):
        rc = main(["run", "no_such_scenario", "--out-dir",
                   str(tmp_path / "out")])
        assert rc == 2

    def test_bad_subcommand_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2

    def test_malformed_override_exits_two(self, tmp_path):
        rc = main(["run", "fourier_inversion", "--out-dir",
                   str(tmp_path / "out"), "--override", "notakeyvalue"])
        assert rc == 2


class TestDeterminism:
    def test_reruns_byte_identical_except_manifest(self, tmp_path):
        rc1 = main(["run", "fourier_inversion", "--out-dir",
                    str(tmp_path / "a")])
        rc2 = main(["run", "fourier_inversion", "--out-dir",
                    str(tmp_path / "b")])
        assert rc1 == rc2 == 0
        names_a = {p.name for p in (tmp_path / "a").iterdir()}
        names_b = {p.name for p in (tmp_path / "b").iterdir()}
        assert names_a == names_b
        for name in names_a - {"manifest.json"}:
            assert (tmp_path / "a" / name).read_bytes() == \
                (tmp_path / "b" / name).read_bytes()

    def test_manifest_contents(self, tmp_path):
        m = run_scenario(cfg_path("fourier_inversion"), out_dir=str(tmp_path / "out"))
        data = json.loads((tmp_path / "out" / "manifest.json").read_text())
        for key in ("grids", "lambda_convention", "module_versions",
                    "outcomes", "scenario_hash", "wall_clock_s"):
            assert key in data
        assert data["scenario_hash"] == m.scenario_hash

    def test_override_changes_scenario_hash(self, tmp_path):
        _, h1 = load_scenario(cfg_path("fourier_inversion"))
        _, h2 = load_scenario(cfg_path("fourier_inversion"),
                              overrides=["grids.M=128"])
        assert h1 != h2

    def test_equivalent_overrides_reorder_to_same_hash(self):
        o = ["grids.M=128", "grids.R=4"]
        _, h1 = load_scenario(cfg_path("fourier_inversion"), overrides=o)
        _, h2 = load_scenario(cfg_path("fourier_inversion"), overrides=o[::-1])
        assert h1 == h2


class TestLoadScenario:
    def test_bundled_name_resolves(self):
        cfg, digest = load_scenario(cfg_path("oscint_gaussian"))
        assert cfg.has_section("scenario")
        assert len(digest) == 64  # hex sha-256 of the resolved config

    def test_malformed_override_rejected(self):
        with pytest.raises(ScenarioError):
            load_scenario(cfg_path("oscint_gaussian"), overrides=["oops"])

    def test_missing_file_rejected(self):
        with pytest.raises(ScenarioError):
            load_scenario("/no/such/file.cfg")


@pytest.mark.parametrize("name", ALL_SCENARIOS)
def test_every_bundled_scenario_passes(name, tmp_path):
    m = run_scenario(cfg_path(name), out_dir=str(tmp_path / name))
    assert all(o["passed"] for o in m.outcomes)
