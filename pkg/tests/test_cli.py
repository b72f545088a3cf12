"""End-to-end command line runs through subprocesses."""

import json
import subprocess
import sys

import numpy as np
import pytest

from steerlab import (
    EnsembleState,
    basis_ket,
    lc4_mixed,
    save_protocol,
    save_state,
    tensor_protocol,
    two_qubit_theta_state,
)


def run_cli(*args, env_extra=None):
    import os

    env = os.environ.copy()
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "steerlab", *args],
        capture_output=True, text=True, env=env,
    )


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    paths = {}

    def dump(name, doc):
        p = root / name
        p.write_text(json.dumps(doc))
        paths[name] = str(p)

    dump("lc4.json", save_state(lc4_mixed(np.pi / 4)))
    dump("zzyx.json", save_protocol(tensor_protocol("zz", "yx", n_qubits=4)))
    dump("tq.json", save_state(two_qubit_theta_state(np.pi / 4)))
    dump("zx.json", save_protocol(tensor_protocol("z", "x", n_qubits=2)))
    mix = EnsembleState(2, (0.5, 0.5), (basis_ket(2, 0), basis_ket(2, 3)))
    dump("mix.json", save_state(mix))
    dump("bad.json", {"n_qubits": "two"})
    paths["root"] = str(root)
    return paths


class TestDemo:
    def test_two_qubit_paradox_line(self):
        r = run_cli("demo", "two-qubit")
        assert r.returncode == 0
        assert "verdict: PARADOX" in r.stdout
        assert "quantum=2.000000 lhs=1.000000" in r.stdout

    def test_lc4_with_theta(self):
        r = run_cli("demo", "lc4", "--theta", "0.5")
        assert r.returncode == 0
        assert "verdict: PARADOX" in r.stdout

    def test_product_no_paradox_still_exit_zero(self):
        r = run_cli("demo", "product")
        assert r.returncode == 0
        assert "NO_PARADOX_CROSS_DUPLICATE" in r.stdout
        assert "lhs=not-forced" in r.stdout

    def test_unknown_demo_usage_error(self):
        r = run_cli("demo", "nosuch")
        assert r.returncode == 2

    def test_json_format_parses(self):
        r = run_cli("demo", "two-qubit", "--format", "json", "--lp")
        doc = json.loads(r.stdout)
        assert doc["verdict"] == "PARADOX"
        assert doc["lp_verdict"] == "infeasible"


class TestCheck:
    def test_lc4_files_with_lp(self, files):
        r = run_cli("check", "--state", files["lc4.json"],
                    "--protocol", files["zzyx.json"], "--lp", "--format", "json")
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        assert doc["verdict"] == "PARADOX"
        assert doc["lp_verdict"] == "infeasible"

    def test_byte_identical_json(self, files):
        args = ("check", "--state", files["lc4.json"],
                "--protocol", files["zzyx.json"], "--format", "json")
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_mismatched_sizes_exit_2(self, files):
        r = run_cli("check", "--state", files["tq.json"], "--protocol", files["zzyx.json"])
        assert r.returncode == 2
        assert "error:" in r.stderr

    def test_schema_violation_exit_2_with_path(self, files):
        r = run_cli("check", "--state", files["bad.json"], "--protocol", files["zx.json"])
        assert r.returncode == 2
        assert "n_qubits" in r.stderr

    def test_missing_file_exit_2(self, files):
        r = run_cli("check", "--state", files["root"] + "/absent.json",
                    "--protocol", files["zx.json"])
        assert r.returncode == 2

    def test_loosened_tolerance_same_verdict(self, files):
        r = run_cli("check", "--state", files["tq.json"], "--protocol", files["zx.json"],
                    "--tolerance", "1e-6")
        assert r.returncode == 0
        assert "verdict: PARADOX" in r.stdout

    def test_dump_lp_writes_problem(self, files):
        out = files["root"] + "/dump.json"
        r = run_cli("check", "--state", files["mix.json"], "--protocol", files["zx.json"],
                    "--dump-lp", out)
        assert r.returncode == 0
        doc = json.loads(open(out).read())
        assert {"a_eq", "b_eq", "candidates", "relative"} <= set(doc)

    def test_dimension_cap_env(self, files):
        r = run_cli("check", "--state", files["lc4.json"], "--protocol", files["zzyx.json"],
                    env_extra={"STEERLAB_MAX_DIM": "2"})
        assert r.returncode == 2


class TestLhs:
    def test_feasible_mixture(self, files):
        r = run_cli("lhs", "--state", files["mix.json"], "--protocol", files["zx.json"],
                    "--format", "json")
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        assert doc["lp_verdict"] == "feasible"
        assert doc["verify_residual"] <= 1e-8

    def test_infeasible_paradox_state(self, files):
        r = run_cli("lhs", "--state", files["tq.json"], "--protocol", files["zx.json"])
        assert r.returncode == 0
        assert "lhs-lp: infeasible" in r.stdout


class TestSweep:
    def test_rank2_never_paradox(self):
        r = run_cli("sweep", "--n-qubits", "2", "--alice-qubits", "1", "--rank", "2",
                    "--count", "25", "--seed", "3", "--format", "json")
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        assert doc["verdict_counts"]["PARADOX"] == 0
        assert len(doc["samples"]) == 25

    def test_rank1_fixed_protocol_all_paradox(self, files):
        r = run_cli("sweep", "--n-qubits", "2", "--alice-qubits", "1", "--rank", "1",
                    "--count", "25", "--seed", "3", "--protocol", files["zx.json"],
                    "--format", "json")
        doc = json.loads(r.stdout)
        assert doc["verdict_counts"]["PARADOX"] == 25

    def test_deterministic_given_seed(self):
        args = ("sweep", "--count", "10", "--seed", "12", "--rank", "2", "--format", "json")
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_invalid_count_exit_2(self):
        r = run_cli("sweep", "--count", "0")
        assert r.returncode == 2
