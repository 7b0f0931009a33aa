import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from cyclecap.cli import RunConfig, dispatch, main, parse_alpha
from cyclecap.errors import DomainError

GOLDEN = Path(__file__).parent / "golden"

CASES = [
    ("count_4_2.json", ["count", "--n", "4", "--alpha", "2", "--format", "json"]),
    ("count_30_5.csv", ["count", "--n", "30", "--alpha", "5", "--format", "csv"]),
    ("moments_4_2.json", ["moments", "--n", "4", "--alpha", "2"]),
    ("dist_4_2.json", ["dist", "--n", "4", "--alpha", "2"]),
    ("dist_12_4.csv", ["dist", "--n", "12", "--alpha", "4", "--format", "csv"]),
    ("saddle_4_2.json", ["saddle", "--n", "4", "--alpha", "2"]),
    ("expand_1e6_1000.json", ["expand", "--n", "1000000", "--alpha", "1000"]),
    ("growth_1e6_1000.json", ["check-growth", "--n", "1000000", "--alpha", "1000"]),
    ("approx_1000.json", ["check-approx", "--n", "1000", "--alpha", "n^0.5"]),
    ("clt_exact_1000.json", ["verify-clt", "--n", "1000", "--alpha", "n^0.5", "--exact"]),
    (
        "clt_sample_400.json",
        ["verify-clt", "--n", "400", "--alpha", "20", "--replicates", "200", "--seed", "3"],
    ),
    (
        "sample_6_3.csv",
        ["sample", "--n", "6", "--alpha", "3", "--replicates", "4", "--seed", "7", "--format", "csv"],
    ),
]


def run(argv, capsys):
    status = main(argv)
    out, err = capsys.readouterr()
    return status, out, err


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, capsys):
    status, out, err = run(argv, capsys)
    assert status == 0 and err == ""
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_outputs_parse(name, argv, capsys):
    _, out, _ = run(argv, capsys)
    if name.endswith(".json"):
        json.loads(out)
    else:
        rows = list(csv.reader(io.StringIO(out)))
        assert all(h for h in rows[0])
        assert all(len(r) == len(rows[0]) for r in rows[1:])


def test_count_example(capsys):
    _, out, _ = run(["count", "--n", "4", "--alpha", "2", "--format", "json"], capsys)
    assert out.strip() == '{"n":4,"alpha":2,"count":"10"}'


def test_moments_digits(capsys):
    _, out, _ = run(["moments", "--n", "4", "--alpha", "2"], capsys)
    rec = json.loads(out)
    assert rec["m"] == pytest.approx(2.7808, abs=1e-4)
    assert rec["v"] == pytest.approx(0.2957, abs=1e-4)
    # shortest round-trip decimals
    assert repr(rec["m"]) in out


def test_verify_clt_exact_has_ks(capsys):
    _, out, _ = run(["verify-clt", "--n", "1000", "--alpha", "n^0.5", "--exact"], capsys)
    assert 0 < json.loads(out)["ks_distance"] < 1


def test_verify_clt_sample_csv(capsys):
    status, out, _ = run(
        ["verify-clt", "--n", "400", "--alpha", "20", "--replicates", "10", "--format", "csv"], capsys
    )
    assert status == 0
    lines = out.splitlines()
    assert lines[0].startswith("# n=400,alpha=20,seed=0")
    assert lines[1] == "replicate,cycles,standardized" and len(lines) == 12


@pytest.mark.parametrize(
    "argv",
    [
        ["saddle", "--n", "4", "--alpha", "4"],
        ["saddle", "--n", "100", "--alpha", "n^0.5", "--w", "3"],
        ["count", "--n", "0", "--alpha", "2"],
        ["count", "--n", "10", "--alpha", "n^1.5"],
        ["count", "--n", "10", "--alpha", "abc"],
        ["expand", "--n", "20", "--alpha", "10"],
    ],
)
def test_domain_errors_exit_2(argv, capsys):
    status, out, err = run(argv, capsys)
    assert status == 2 and out == ""
    assert err.count("\n") == 1
    assert set(json.loads(err)) == {"error", "message"}


def test_resource_cap_exits_1(capsys, monkeypatch):
    monkeypatch.setenv("CYCLECAP_MAX_N", "50")
    status, out, err = run(["count", "--n", "51", "--alpha", "3"], capsys)
    assert status == 1 and out == ""
    assert json.loads(err)["error"] == "ResourceLimitError"


def test_distribution_cap_exits_1(capsys):
    status, _, err = run(["dist", "--n", "6000", "--alpha", "5"], capsys)
    assert status == 1 and json.loads(err)["error"] == "ResourceLimitError"


def test_out_file_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["verify-clt", "--n", "300", "--alpha", "12", "--replicates", "50",
                     "--seed", "9", "--format", "csv", "--out", str(p)]) == 0
    assert capsys.readouterr().out == ""
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize(
    "spec, n, expected",
    [("7", 10, 7), ("n^0.5", 1000, 32), ("n^0.5", 100, 10), ("n^0.6", 10**6, 3982), ("n^0.5", 10**4, 100)],
)
def test_parse_alpha(spec, n, expected):
    assert parse_alpha(spec, n) == expected


def test_dispatch_directly():
    cfg = RunConfig(command="count", n=5, alpha=3, alpha_spec="3")
    assert dispatch(cfg) == (0, '{"n":5,"alpha":3,"count":"66"}\n', "")
    with pytest.raises(DomainError):
        parse_alpha("n^0", 5)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cyclecap", "count", "--n", "4", "--alpha", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == '{"n":4,"alpha":2,"count":"10"}\n'
