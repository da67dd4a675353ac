import json
import os
import subprocess
import sys

import pytest

from irrhodge.cli import corpus_path, main
from irrhodge.errors import CycleError, ParseError
from irrhodge.fileio import (connection_to_json, parse_connection_file,
                             parse_rational, write_connection_file)
from irrhodge.connection import dual, hypergeometric


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "irrhodge.cli", *args],
                          capture_output=True, text=True, env=full_env)


def test_parse_trivial(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"rank":1,"matrix":[[["0/1"]]]}')
    conn = parse_connection_file(str(path))
    assert conn.rank == 1


def test_parse_constructor_hypergeometric(tmp_path):
    path = tmp_path / "h.json"
    path.write_text('{"constructor":{"hypergeometric":{"alpha":'
                    '["0/1","0/1"]}}}')
    conn = parse_connection_file(str(path))
    assert conn.rank == 2
    assert conn.action == hypergeometric((0, 0)).action


def test_parse_bad_rational(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"rank":1,"matrix":[[["1/0"]]]}')
    with pytest.raises(ParseError):
        parse_connection_file(str(path))


def test_parse_cycle(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text('{"constructor":{"dual":"b.json"}}')
    b.write_text('{"constructor":{"dual":"a.json"}}')
    with pytest.raises(CycleError):
        parse_connection_file(str(a))


def test_round_trip(tmp_path):
    conn = hypergeometric((0, 0))
    path = tmp_path / "h.json"
    write_connection_file(conn, str(path))
    back = parse_connection_file(str(path))
    assert back.action == conn.action


def test_spectrum_command_json():
    result = run_cli("spectrum", corpus_path("trivial.json"), "--json")
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["spectrum"] == [{"jump": "0/1", "multiplicity": 1}]
    assert report["normalization"] == "raw"
    assert "diagnostics" in report


def test_spectrum_normalize_min0():
    result = run_cli("spectrum", corpus_path("one_tate1.json"),
                     "--normalize", "min0", "--json")
    report = json.loads(result.stdout)
    assert report["spectrum"] == [{"jump": "0/1", "multiplicity": 1}]


def test_exit_codes():
    assert run_cli("spectrum", corpus_path("irregular.json")).returncode == 2
    assert run_cli("spectrum", corpus_path("irrational.json")).returncode == 3
    res = run_cli("spectrum", corpus_path("irregular.json"))
    assert "E_IRREGULAR" in res.stderr and "max-sat" in res.stderr.lower()
    res2 = run_cli("spectrum", corpus_path("irrational.json"))
    assert "E_IRRATIONAL_EXPONENT" in res2.stderr


def test_max_sat_env_var():
    res = run_cli("spectrum", corpus_path("irregular.json"),
                  env={"IRRHODGE_MAX_SAT": "3"})
    assert res.returncode == 2
    assert "3 steps" in res.stderr


def test_transform_dual_round_trip(tmp_path):
    src = corpus_path("hyp_00.json")
    once = tmp_path / "d1.json"
    twice = tmp_path / "d2.json"
    assert main(["transform", "dual", src, "-o", str(once)]) == 0
    assert main(["transform", "dual", str(once), "-o", str(twice)]) == 0
    original = parse_connection_file(src)
    back = parse_connection_file(str(twice))
    assert back.action == original.action
    assert connection_to_json(dual(dual(original)))["matrix"] == \
        connection_to_json(back)["matrix"]


def test_transform_tensor_rank(tmp_path):
    out = tmp_path / "t.json"
    assert main(["transform", "tensor", corpus_path("hyp_00.json"),
                 corpus_path("filtered_01.json"), "-o", str(out)]) == 0
    assert parse_connection_file(str(out)).rank == 4


def test_transform_wedge_out_of_range(tmp_path):
    out = tmp_path / "w.json"
    res = run_cli("transform", "wedge", corpus_path("hyp_00.json"),
                  "--r", "5", "-o", str(out))
    assert res.returncode == 1
    assert "E_SHAPE" in res.stderr


def test_verify_wedge_deterministic():
    r1 = run_cli("verify", "wedge", "--json")
    r2 = run_cli("verify", "wedge", "--json")
    assert r1.returncode == 0
    assert r1.stdout == r2.stdout


def test_verify_hypergeom_single():
    res = run_cli("verify", "hypergeom", "--alpha", "0/1,0/1", "--json")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["passed"]


def test_hypergeom_command():
    res = run_cli("hypergeom", "--alpha", "0/1,0/1,0/1", "--json")
    assert res.returncode == 0
    out = json.loads(res.stdout)
    assert out["matches"] and out["sign"] == 1 and out["shift"] == "0/1"


def test_parse_rational_exact():
    from fractions import Fraction
    assert parse_rational("-3/6") == Fraction(-1, 2)
    with pytest.raises(ParseError):
        parse_rational("x")


def test_round_trip_whole_corpus(tmp_path):
    from irrhodge.cli import load_corpus
    for name, conn in load_corpus():
        path = tmp_path / name
        write_connection_file(conn, str(path))
        assert parse_connection_file(str(path)).action == conn.action


def test_spectrum_json_deterministic():
    r1 = run_cli("spectrum", corpus_path("hyp_0_13_23.json"), "--json",
                 "--filtration")
    r2 = run_cli("spectrum", corpus_path("hyp_0_13_23.json"), "--json",
                 "--filtration")
    assert r1.returncode == 0 and r1.stdout == r2.stdout
