import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tfapprox import DataSet, TFSubspace, approximation_error, helson_inverse, make_config
from tfapprox.cli import format_error, main
from tfapprox.errors import LengthMismatch, ParseError
from tfapprox.io import MANIFEST_KEYS, read_eigenvalues, read_manifest, read_signals, write_signals

from conftest import crandn


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_read_signals_delta(tmp_path):
    path = write(tmp_path, "a.csv", "d=4,m=1\n1,0\n0,0\n0,0\n0,0\n")
    X = read_signals(path)
    np.testing.assert_array_equal(X, [[1, 0, 0, 0]])


def test_read_signals_truncated(tmp_path):
    path = write(tmp_path, "a.csv", "d=4,m=1\n1,0\n0,0\n0,0\n")
    with pytest.raises(LengthMismatch):
        read_signals(path)


@pytest.mark.parametrize("text, line", [
    ("d=4,m=1\n1,0\n0,abc\n0,0\n0,0\n", 3),
    ("d=4,m=1\n1,0\n0,0\n0\n0,0\n", 4),
    ("d=4,m=1\n1,0\n0,0\n0,0\nnan,0\n", 5),
    ("d=4;m=1\n1,0\n0,0\n0,0\n0,0\n", 1),
    ("d=4,n=1\n1,0\n0,0\n0,0\n0,0\n", 1),
    ("", 1),
])
def test_read_signals_parse_errors(tmp_path, text, line):
    path = write(tmp_path, "a.csv", text)
    with pytest.raises(ParseError) as info:
        read_signals(path)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 4), d=st.integers(1, 16))
def test_signal_round_trip(tmp_path_factory, seed, m, d):
    rng = np.random.default_rng(seed)
    X = crandn(rng, m, d) * 10.0 ** rng.integers(-20, 20, size=(m, d))
    path = tmp_path_factory.mktemp("rt") / "x.csv"
    write_signals(path, X)
    Y = read_signals(path)
    assert np.all(np.abs(Y - X) <= 1e-15 * np.abs(X))
    write_signals(path.with_name("y.csv"), Y)
    assert path.read_bytes() == path.with_name("y.csv").read_bytes()


def test_format_error():
    assert format_error(0.0) == "0.000000000000e0"
    assert format_error(1.0) == "1.000000000000e0"
    assert format_error(1.25e-5) == "1.250000000000e-5"


@pytest.fixture
def pair_file(tmp_path):
    cfg = make_config(12, 6, 3)
    E = np.zeros((2,) + cfg.fiber_shape)
    E[0, 0, 0, 0] = E[1, 0, 0, 1] = 1
    return write_signals(tmp_path / "pair.csv", helson_inverse(E, cfg))


@pytest.fixture
def random_file(tmp_path):
    rng = np.random.default_rng(5)
    return write_signals(tmp_path / "random.csv", crandn(rng, 4, 24))


def test_approx_single_signal(tmp_path, capsys):
    path = write(tmp_path, "a.csv", "d=4,m=1\n1,0\n0,0\n0,0\n0,0\n")
    code = main(["approx", "--input", str(path), "--p", "2", "--s", "2", "--n", "1",
                 "--output-dir", str(tmp_path / "out")])
    assert code == 0
    assert capsys.readouterr().out.strip() == "0.000000000000e0"


def test_approx_bad_rank(tmp_path, pair_file, capsys):
    code = main(["approx", "--input", str(pair_file), "--p", "6", "--s", "3", "--n", "0",
                 "--output-dir", str(tmp_path / "out")])
    assert code == 2
    assert "n must satisfy 1 ≤ n ≤ m" in capsys.readouterr().err


def test_approx_bad_divisibility(tmp_path, pair_file, capsys):
    code = main(["approx", "--input", str(pair_file), "--p", "5", "--s", "1", "--n", "1",
                 "--output-dir", str(tmp_path / "out")])
    assert code == 2
    assert "5 does not divide 12" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["d=4,m=1\n1,0\n", "garbage\n", "d=4,m=1\n1,0\n0,0\n0,0\nx,y\n"])
def test_malformed_inputs_never_exit_zero(tmp_path, text):
    path = write(tmp_path, "bad.csv", text)
    for cmd in ("approx", "zak", "spectrum", "curve", "validate"):
        argv = [cmd, "--input", str(path), "--p", "2", "--s", "1", "--n", "1",
                "--output-dir", str(tmp_path / "o")]
        assert main(argv) == 2


def test_missing_file_and_bad_flags(tmp_path):
    assert main(["approx", "--input", str(tmp_path / "nope.csv"), "--p", "2", "--s", "1", "--n", "1"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["approx", "--input", "x.csv", "--p", "two", "--s", "1", "--n", "1"])
    assert info.value.code == 2


def test_manifest_reconstructs_result(tmp_path, random_file, capsys):
    out = tmp_path / "out"
    assert main(["approx", "--input", str(random_file), "--p", "12", "--s", "3", "--n", "2",
                 "--output-dir", str(out), "--seed", "9"]) == 0
    printed = float(capsys.readouterr().out)
    manifest = read_manifest(out / "manifest.json")
    assert set(manifest) == set(MANIFEST_KEYS)
    assert manifest["config"] == {"d": 24, "p": 12, "q": 2, "s": 3, "r": 4}
    assert manifest["seed"] == 9 and manifest["m"] == 4 and manifest["n"] == 2
    assert printed == pytest.approx(manifest["error"], rel=1e-11)
    gens = read_signals(out / manifest["generators_path"], count_key="n")
    assert gens.shape == (2, 24)
    lam = read_eigenvalues(out / manifest["eigenvalues_path"], (4, 2, 3))
    assert lam[2:].sum() == pytest.approx(manifest["error"], rel=1e-12)

    cfg = make_config(24, 12, 3)
    F = DataSet(read_signals(random_file), cfg)
    assert abs(approximation_error(F, TFSubspace(gens, cfg)) - manifest["error"]) <= 1e-9

    assert main(["project", "--input", str(random_file), "--generators", str(out / "generators.csv"),
                 "--p", "12", "--s", "3", "--output-dir", str(out)]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(manifest["error"], abs=1e-9)
    assert read_signals(out / "projection.csv").shape == (4, 24)


def test_runs_are_bit_identical(tmp_path, random_file):
    outputs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["approx", "--input", str(random_file), "--p", "12", "--s", "3", "--n", "2",
                     "--output-dir", str(out), "--seed", "4"]) == 0
        outputs.append({f: (out / f).read_bytes() for f in ("manifest.json", "generators.csv", "eigenvalues.csv")})
    assert outputs[0] == outputs[1]


def test_curve_command(tmp_path, pair_file, capsys):
    assert main(["curve", "--input", str(pair_file), "--p", "6", "--s", "3",
                 "--output-dir", str(tmp_path)]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "n,error"
    values = [tuple(map(float, row.split(","))) for row in rows[1:]]
    assert [n for n, _ in values] == [0, 1, 2]
    np.testing.assert_allclose([e for _, e in values], [2.0, 1.0, 0.0], atol=1e-10)
    assert (tmp_path / "curve.csv").exists()
    assert main(["curve", "--input", str(pair_file), "--p", "6", "--s", "3", "--n", "0"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert len(rows) == 1 and rows[0].startswith("0,")
    assert float(rows[0].split(",")[1]) == pytest.approx(2.0, abs=1e-12)
    assert main(["curve", "--input", str(pair_file), "--p", "6", "--s", "3", "--n", "3"]) == 2


def test_zak_and_spectrum_commands(tmp_path, pair_file):
    assert main(["zak", "--input", str(pair_file), "--p", "6", "--s", "3", "--output-dir", str(tmp_path)]) == 0
    lines = (tmp_path / "zak.csv").read_text().splitlines()
    assert lines[0] == "signal,omega,ell,re,im" and len(lines) == 1 + 2 * 2 * 6
    assert main(["spectrum", "--input", str(pair_file), "--p", "6", "--s", "3",
                 "--output-dir", str(tmp_path)]) == 0
    lam = read_eigenvalues(tmp_path / "eigenvalues.csv", (2, 2, 3))
    np.testing.assert_allclose(lam[:, 0, 0], [1, 1], atol=1e-12)


def test_validate_command(tmp_path, pair_file, capsys):
    assert main(["validate", "--input", str(pair_file), "--p", "6", "--s", "3", "--n", "1",
                 "--trials", "50", "--seed", "7", "--output-dir", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "validation.json").read_text())
    assert payload["seed"] == 7 and len(payload["reports"]) == 4
    assert all(r["passed"] for r in payload["reports"])
    assert "FAIL" not in capsys.readouterr().out


def test_module_entry_point(tmp_path, pair_file):
    proc = subprocess.run([sys.executable, "-m", "tfapprox", "approx", "--input", str(pair_file),
                           "--p", "6", "--s", "3", "--n", "1", "--output-dir", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert float(proc.stdout) == pytest.approx(1.0, abs=1e-10)
