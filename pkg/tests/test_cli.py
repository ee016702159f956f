import csv
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from incompress import __version__
from incompress.cli import run
from incompress.sortbench import log2_factorial

GOLDEN_DIR = Path(__file__).parent / "golden"

# one fixed configuration per subcommand; regenerate with INCOMPRESS_REGEN_GOLDEN=1
GOLDEN_CASES = {
    "codec_encode": ["codec", "encode", "--level", "3", "--input", "0110101"],
    "codec_decode": ["codec", "decode", "--level", "2", "--input", "1100010111", "--format", "json"],
    "codec_pair": ["codec", "pair", "--x", "0", "--y", "1"],
    "codec_unpair": ["codec", "unpair", "--input", "10001", "--format", "json"],
    "codec_census": ["codec", "census", "--n", "10", "--c", "2", "--seed", "5"],
    "lcs_dp": ["lcs", "dp", "--s", "1001101", "--t", "0110100"],
    "lcs_zm": ["lcs", "zm", "--s", "1001101", "--t", "0110100"],
    "lcs_trace": ["lcs", "trace", "--s", "1001101", "--t", "0110100"],
    "lcs_untrace": ["lcs", "untrace", "--y", "101100101", "--z", "01100", "--n", "7", "--exhausted", "s"],
    "lcs_reencode": ["lcs", "reencode", "--s", "1001101", "--u", "0010"],
    "lcs_sim": ["lcs", "sim", "--n", "64", "--trials", "20", "--seed", "3", "--format", "csv"],
    "mesh_map": ["mesh", "map", "--scheme", "hilbert", "--n", "4", "--format", "csv"],
    "mesh_scan": ["mesh", "scan", "--scheme", "hilbert", "--n", "16"],
    "mesh_corner": ["mesh", "corner", "--scheme", "morton", "--n", "16", "--format", "csv"],
    "walk_sim": ["walk", "sim", "--k", "2", "--n", "100", "--trials", "5", "--seed", "11", "--format", "csv"],
    "monopoly_sim": ["monopoly", "sim", "--k", "3", "--I", "12", "--trials", "50", "--seed", "2"],
    "sort_bench": ["sort", "bench", "--n", "20", "--trials", "10", "--seed", "7", "--format", "csv"],
}


def invoke(argv, env_seed=None):
    out, err = io.StringIO(), io.StringIO()
    old = os.environ.pop("INCOMPRESS_SEED", None)
    if env_seed is not None:
        os.environ["INCOMPRESS_SEED"] = env_seed
    try:
        code = run(argv, stdout=out, stderr=err)
    finally:
        os.environ.pop("INCOMPRESS_SEED", None)
        if old is not None:
            os.environ["INCOMPRESS_SEED"] = old
    return code, out.getvalue(), err.getvalue()


def _stable(text):
    """Output with wall_time removed, which is the only field allowed to vary."""
    if not text.startswith("{"):
        return text
    report = json.loads(text)
    report.pop("wall_time", None)
    return json.dumps(report, indent=2) + "\n"


def _suffix(argv):
    if "--format" in argv:
        return argv[argv.index("--format") + 1]
    return "text" if argv[0] == "codec" and argv[1] != "census" else "json"


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_output(name):
    argv = GOLDEN_CASES[name]
    code, out, err = invoke(argv)
    assert code == 0, err
    path = GOLDEN_DIR / f"cli_{name}.{_suffix(argv)}"
    if os.environ.get("INCOMPRESS_REGEN_GOLDEN"):
        path.write_text(_stable(out))
    assert _stable(out) == path.read_text()
    # and a rerun is byte-identical too
    assert _stable(invoke(argv)[1]) == _stable(out)


def test_encode_example():
    assert invoke(["codec", "encode", "--level", "2", "--input", "101"])[1] == "11000101\n"


def test_epsilon_spelling():
    assert invoke(["codec", "encode", "--level", "1", "--input", "eps"])[1] == "0\n"
    code, out, _ = invoke(["codec", "decode", "--level", "1", "--input", "0"])
    assert code == 0
    assert "value eps" in out


def test_trace_example_json():
    code, out, _ = invoke(["lcs", "trace", "--s", "1001101", "--t", "0110100", "--format", "json"])
    assert code == 0
    report = json.loads(out)
    assert report["result"]["u"] == "0010"
    assert report["result"]["y"] == "101100101"
    assert report["result"]["z"] == "01100"
    assert report["tool"] == "incompress"
    assert report["version"] == __version__
    assert report["config"]["s"] == "1001101"
    assert report["seed"] == 0
    assert report["wall_time"] >= 0


def test_sort_csv_floor():
    code, out, _ = invoke(["sort", "bench", "--n", "100", "--trials", "1000", "--seed", "7", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["algorithm", "n", "trial", "comparisons", "log2_factorial"]
    summary = [r for r in rows[1:] if r[2] == "mean"]
    assert [r[0] for r in summary] == ["merge", "quick", "insertion"]
    for row in summary:
        assert float(row[3]) >= 524.77
        assert float(row[4]) == log2_factorial(100)


def test_seed_from_environment():
    argv = ["walk", "sim", "--n", "50", "--trials", "3"]
    _, via_env, _ = invoke(argv, env_seed="17")
    _, via_flag, _ = invoke(argv + ["--seed", "17"])
    assert json.loads(via_env)["seed"] == 17
    assert _stable(via_env) == _stable(via_flag)
    assert _stable(via_env) != _stable(invoke(argv)[1])


def test_bad_environment_seed_is_usage_error():
    code, _, err = invoke(["walk", "sim", "--n", "5"], env_seed="abc")
    assert code == 1
    assert "INCOMPRESS_SEED" in err


def test_monopoly_config_records_resolved_cap():
    report = json.loads(invoke(["monopoly", "sim", "--I", "10", "--trials", "3"])[1])
    assert report["config"]["max_rounds"] == 1000


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["codec", "encode", "--level", "2"],
        ["codec", "encode", "--level", "9", "--input", "1"],
        ["lcs", "trace", "--s", "012", "--t", "000"],
        ["walk", "sim", "--n", "10", "--bogus"],
        ["sort", "bench", "--n", "10", "--format", "xml"],
        [],
    ],
)
def test_usage_errors_exit_1(argv):
    code, out, err = invoke(argv)
    assert code == 1
    assert out == ""
    assert "usage" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["codec", "decode", "--level", "2", "--input", "110001"],
        ["lcs", "zm", "--s", "01", "--t", "0"],
        ["lcs", "untrace", "--y", "1", "--z", "0", "--n", "1"],
        ["lcs", "reencode", "--s", "000", "--u", "1"],
        ["mesh", "map", "--scheme", "hilbert", "--n", "6"],
        ["mesh", "scan", "--scheme", "row_major", "--n", "100"],
        ["monopoly", "sim", "--k", "3", "--I", "10"],
        ["sort", "bench", "--n", "10", "--algorithms", "bogo"],
        ["codec", "census", "--n", "30", "--c", "1"],
    ],
)
def test_runtime_errors_exit_2(argv):
    code, out, err = invoke(argv)
    assert code == 2
    assert out == ""
    assert err.startswith("incompress: error:")


def test_help_and_version():
    assert invoke(["--help"])[0] == 0
    assert invoke(["--version"])[0] == 0


def test_output_file(tmp_path):
    target = tmp_path / "scan.csv"
    code, out, _ = invoke(["mesh", "scan", "--scheme", "boustrophedon", "--n", "2", "--format", "csv", "-o", str(target)])
    assert code == 0 and out == ""
    assert target.read_text() == "scheme,n,metric,c_max,witness_i,witness_j\nboustrophedon,2,euclidean,4.0,1,2\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "incompress", "codec", "pair", "--x", "0", "--y", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "10001\n"
