"""End-to-end coverage of the divlab command line.

Everything runs in-process through main(argv) so exit codes and stdout
bytes are asserted exactly; no subprocesses, no PATH assumptions.
"""

import json

import pytest

from divisorlab import brute_force_sum, FnSpec
from divisorlab.cli import SUITES, main
from divisorlab.zeta import default_zero_table

D6_SUM_ROW = "x,fn,value,algorithm\n1000000,d,13970034,hyperbola\n"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture()
def zeros_file(tmp_path):
    path = tmp_path / "zeros.txt"
    ordinates = default_zero_table().ordinates[:150]
    path.write_text("".join(f"{t!r}\n" for t in ordinates))
    return str(path)


# ---------------------------------------------------------------------------
# documented invocations
# ---------------------------------------------------------------------------

def test_sum_documented_example(capsys):
    rc, out, err = run(capsys, "sum", "--fn", "d", "--x", "1000000")
    assert rc == 0
    assert out == D6_SUM_ROW
    assert err == ""


def test_sum_algorithms_agree(capsys):
    values = {}
    for algo in ("brute", "hyperbola", "convolution_kernel"):
        rc, out, _ = run(capsys, "sum", "--fn", "d", "--x", "5000",
                         "--algorithm", algo, "--format", "json")
        assert rc == 0
        (row,) = json.loads(out)
        assert row["algorithm"] == algo
        values[algo] = row["value"]
    assert len(set(values.values())) == 1


def test_sum_auto_dispatch(capsys):
    rc, out, _ = run(capsys, "sum", "--fn", "two_omega", "--x", "4000",
                     "--format", "json")
    assert rc == 0
    (row,) = json.loads(out)
    assert row["algorithm"] == "moebius_kernel"
    assert row["value"] == brute_force_sum(FnSpec("two_omega"), 4000).value


def test_explicit_documented_example(capsys, zeros_file):
    rc, out, err = run(capsys, "explicit", "--target", "two_omega",
                       "--x", "10000.5", "--zeros", zeros_file,
                       "--pairs", "100", "--tail", "10")
    assert rc == 0
    (row,) = json.loads(out)
    assert row["target"] == "two_omega_sum"
    assert row["x"] == 10000.5
    assert row["exact"] == 63869
    assert len(row["zero_sum_partials"]) == 101
    assert row["zero_sum_partials"][0] == [0, 0]
    assert row["zero_table_validated"] is True
    total = (row["main_term"] + row["constant_term"]
             + row["zero_sum_partials"][-1][1] + row["trivial_tail"])
    assert abs(total - row["exact"]) < abs(row["main_term"]) * 0.01


def test_verify_identities_suite(capsys):
    rc, out, _ = run(capsys, "verify", "--suite", "identities")
    assert rc == 0
    lines = out.strip().splitlines()
    assert all(line.startswith("ok  ") for line in lines[:-1])
    passed, total = lines[-1].split()[0].split("/")
    assert passed == total


def test_sieve_rows(capsys):
    rc, out, _ = run(capsys, "sieve", "--limit", "10", "--fn", "d")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,fn,value"
    assert len(lines) == 11
    assert lines[1] == "1,d,1"
    assert lines[10] == "10,d,4"


def test_voronoi_row_keys(capsys):
    rc, out, _ = run(capsys, "voronoi", "--x", "100.5", "--kind", "truncated",
                     "--terms", "50", "--format", "json")
    assert rc == 0
    (row,) = json.loads(out)
    assert set(row) == {"x", "kind", "n_terms", "value", "reference",
                        "residual", "last_term"}
    assert abs(row["residual"]) < 1.0


def test_delta_single_point(capsys):
    rc, out, _ = run(capsys, "delta", "--target", "d", "--x", "100.5")
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,exact,predicted,delta,delta_over_x14,delta_over_x12"
    assert lines[1].startswith("100.5,482,")


def test_ap_divisor_row(capsys):
    rc, out, _ = run(capsys, "ap", "--x", "10000", "--kind", "divisor",
                     "--q", "4", "--a", "1", "--format", "json")
    assert rc == 0
    (row,) = json.loads(out)
    assert row["value"] == 29073
    # serialized at 15 significant digits, so compare to that precision
    assert row["residual"] == pytest.approx(row["value"] - row["predicted"],
                                            abs=1e-9)


def test_fit_smoke(capsys, tmp_path):
    samples_path = tmp_path / "samples.csv"
    rc, out, _ = run(capsys, "fit", "--target", "d", "--grid-lo", "1000",
                     "--grid-hi", "3000000", "--ratio", "1.4",
                     "--samples-output", str(samples_path))
    assert rc == 0
    (row,) = json.loads(out)
    assert 0.1 < row["theta"] < 0.5
    assert samples_path.read_text().startswith("x,exact,predicted")


# ---------------------------------------------------------------------------
# config file and environment
# ---------------------------------------------------------------------------

def test_config_seeds_defaults(capsys, tmp_path):
    cfg = tmp_path / "divlab.cfg"
    cfg.write_text("# report tuning\npairs=2\nformat=json\n")
    rc, out, _ = run(capsys, "explicit", "--config", str(cfg),
                     "--x", "100.5", "--tail", "2")
    assert rc == 0
    (row,) = json.loads(out)
    assert len(row["zero_sum_partials"]) == 3


def test_command_line_beats_config(capsys, tmp_path):
    cfg = tmp_path / "divlab.cfg"
    cfg.write_text("pairs=2\n")
    rc, out, _ = run(capsys, "explicit", "--config", str(cfg),
                     "--x", "100.5", "--tail", "2", "--pairs", "4")
    assert rc == 0
    (row,) = json.loads(out)
    assert len(row["zero_sum_partials"]) == 5


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "divlab.cfg"
    cfg.write_text("pears=2\n")
    rc, _, err = run(capsys, "explicit", "--config", str(cfg), "--x", "100.5")
    assert rc == 2
    assert "pears" in err


def test_config_missing_file(capsys, tmp_path):
    rc, _, err = run(capsys, "explicit", "--config",
                     str(tmp_path / "nope.cfg"), "--x", "100.5")
    assert rc == 3
    assert "nope.cfg" in err


def test_zeros_env_fallback(capsys, tmp_path, monkeypatch):
    small = tmp_path / "three.txt"
    small.write_text("".join(
        f"{t!r}\n" for t in default_zero_table().ordinates[:3]))
    monkeypatch.setenv("ZD_ZEROS", str(small))
    default_zero_table.cache_clear()
    try:
        rc, _, err = run(capsys, "explicit", "--x", "100.5", "--pairs", "10")
        assert rc == 2
        assert "table holds 3" in err
        # an explicit --zeros flag overrides the environment
        big = tmp_path / "big.txt"
        monkeypatch.delenv("ZD_ZEROS")
        default_zero_table.cache_clear()
        big.write_text("".join(
            f"{t!r}\n" for t in default_zero_table().ordinates[:20]))
        monkeypatch.setenv("ZD_ZEROS", str(small))
        default_zero_table.cache_clear()
        rc, out, _ = run(capsys, "explicit", "--x", "100.5", "--pairs", "10",
                         "--zeros", str(big))
        assert rc == 0
        assert len(json.loads(out)[0]["zero_sum_partials"]) == 11
    finally:
        monkeypatch.delenv("ZD_ZEROS", raising=False)
        default_zero_table.cache_clear()


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_exit_usage_unknown_flag(capsys):
    rc, _, _ = run(capsys, "sum", "--fn", "d", "--x", "100", "--frobnicate")
    assert rc == 2


def test_exit_usage_bad_combo(capsys):
    rc, _, err = run(capsys, "sum", "--fn", "mu", "--x", "100",
                     "--algorithm", "hyperbola")
    assert rc == 2
    assert "hyperbola" in err
    rc, _, _ = run(capsys, "explicit", "--x", "100.5", "--format", "csv")
    assert rc == 2


def test_exit_input_missing_zeros(capsys, tmp_path):
    rc, _, err = run(capsys, "explicit", "--x", "100.5",
                     "--zeros", str(tmp_path / "missing.txt"))
    assert rc == 3
    assert "missing.txt" in err


def test_exit_resource_limit(capsys):
    rc, _, err = run(capsys, "sum", "--fn", "mu", "--x", "2000000000",
                     "--algorithm", "brute")
    assert rc == 4
    assert "bound" in err.lower() or "limit" in err.lower()


def test_exit_verify_failure(capsys, monkeypatch):
    monkeypatch.setitem(
        SUITES, "identities",
        lambda args: [("always_red", False, "synthetic failure")])
    rc, out, _ = run(capsys, "verify", "--suite", "identities")
    assert rc == 5
    assert "FAIL identities.always_red" in out
    assert "0/1 checks passed" in out


# ---------------------------------------------------------------------------
# determinism across workers
# ---------------------------------------------------------------------------

def test_worker_count_invisible_in_output(capsys, tmp_path):
    paths = []
    for workers in (1, 3):
        path = tmp_path / f"mertens_{workers}.csv"
        rc, _, _ = run(capsys, "sum", "--fn", "mu", "--x", "20000",
                       "--algorithm", "brute", "--workers", str(workers),
                       "--output", str(path))
        assert rc == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
