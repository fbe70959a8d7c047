"""Command-line interface: formats, caching, exit codes."""

import json
from fractions import Fraction

import pytest

from padsum.cli import (
    BFileError,
    format_rational,
    main,
    parse_bfile,
    parse_rational,
)


@pytest.fixture()
def dirs(tmp_path):
    out = tmp_path / "out"
    cache = tmp_path / "cache"
    return out, cache


def run(args):
    return main([str(a) for a in args])


def test_rational_literals_round_trip():
    for text in ("3", "-2/3", "0", "+7/2", "10/4"):
        value = parse_rational(text)
        assert parse_rational(format_rational(value)) == value
    assert parse_rational("-2/3") == Fraction(-2, 3)


def test_rational_literal_rejects_floats():
    import argparse

    for bad in ("0.5", "1e3", "1/2.0", "nan"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_rational(bad)


def test_tables_json_and_warm_cache(dirs, capsys):
    out, cache = dirs
    assert run(["tables", "--kmax", 11, "--format", "json", "--out", out, "--cache-dir", cache]) == 0
    path = out / "tables_k11_p1.json"
    data = json.loads(path.read_text())
    assert data["u"][10] == 17731
    assert data["v"][10] == 13209
    first_bytes = path.read_bytes()
    assert run(["tables", "--kmax", 11, "--format", "json", "--out", out, "--cache-dir", cache]) == 0
    assert path.read_bytes() == first_bytes  # warm cache is byte-identical
    assert len(list(cache.glob("tables_*.json"))) == 1


def test_tables_text_negative_sign(dirs, capsys):
    out, cache = dirs
    assert run(["tables", "--kmax", 1, "--eps", "-1", "--format", "text", "--out", out,
                "--cache-dir", cache]) == 0
    text = (out / "tables_k1_m1.txt").read_text()
    assert "A_1(n;x) = (n - 2)x - 1" in text
    assert run(["tables", "--kmax", 0, "--format", "text", "--out", out,
                "--cache-dir", cache]) == 0
    minimal = (out / "tables_k0_p1.txt").read_text()
    assert "A_0(n;x) = 1" in minimal
    assert "U_1" not in minimal


def test_tables_csv(dirs):
    out, cache = dirs
    assert run(["tables", "--kmax", 4, "--format", "csv", "--out", out, "--no-cache",
                "--cache-dir", cache]) == 0
    lines = (out / "tables_k4_p1.csv").read_text().splitlines()
    assert lines[0] == "k,u,v"
    assert lines[4] == "4,-2,-5"
    assert not list(cache.glob("*"))  # --no-cache really skips the cache


def test_verify_suites_exit_zero(capsys):
    assert run(["verify", "finite", "--kmax", 4, "--nmax", 8]) == 0
    assert "PASS finite" in capsys.readouterr().out
    assert run(["verify", "telescope", "--count", 4, "--nmax", 8]) == 0
    assert run(["verify", "ode", "--nmax", 10]) == 0
    assert run(["verify", "padic", "--kmax", 2, "--nmax", 30, "--primes", "2,3"]) == 0


def test_verify_single_claim_modes(capsys):
    assert run(["verify", "padic", "--claim=-1", "--k", 1, "--nmax", 40, "--primes", "2,3"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert run(["verify", "padic", "--claim=-2", "--k", 1, "--nmax", 40, "--primes", "2"]) == 1
    out = capsys.readouterr().out
    assert "violated at N=" in out


def test_verify_json_report(capsys):
    assert run(["verify", "padic", "--claim=-1", "--k", 1, "--nmax", 20, "--primes", "5",
                "--format", "json", "--precision", 6]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert reports[0]["verdict"] == "PASS"
    assert reports[0]["claimed"] == "-1"
    assert reports[0]["claimed_expansion"] == "p=5 val=0 digits=[4,4,4,4,4,4]"


def test_verify_csv_profile(capsys):
    assert run(["verify", "padic", "--claim=-1", "--k", 1, "--nmax", 5, "--primes", "2",
                "--format", "csv"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "N,partial,valuation"
    assert len(rows) == 6


def test_seq_bfile_output(capsys):
    assert run(["seq", "A+0,1", "--kmax", 5]) == 0
    assert capsys.readouterr().out == "0 1\n1 -1\n2 -1\n3 5\n4 -5\n5 -21\n"
    assert run(["seq", "U+1", "--kmax", 4]) == 0
    assert capsys.readouterr().out == "1 0\n2 1\n3 -1\n4 -2\n"


def test_seq_compare_match_and_mismatch(tmp_path, capsys):
    # Bell numbers match U-1 in absolute value
    reference = tmp_path / "b.txt"
    reference.write_text("# reference\n1 2\n2 5\n3 15\n4 52\n")
    assert run(["seq-compare", "U-1", "--kmax", 4, "--bfile", reference]) == 0
    assert "MATCH" in capsys.readouterr().out

    shifted = tmp_path / "shifted.txt"
    shifted.write_text("1 5\n2 15\n3 52\n")
    assert run(["seq-compare", "U-1", "--kmax", 4, "--bfile", shifted]) == 1
    assert "MISMATCH at position 0" in capsys.readouterr().out


def test_seq_compare_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\nnot a line\n")
    assert run(["seq-compare", "U-1", "--kmax", 3, "--bfile", bad]) == 2
    assert "line 2" in capsys.readouterr().err


def test_parse_bfile_rules():
    entries = parse_bfile("# comment\n\n0 1\n1 -1\n")
    assert entries == [(0, 1), (1, -1)]
    with pytest.raises(BFileError):
        parse_bfile("0 1\n0 2\n")  # indices must increase
    with pytest.raises(BFileError):
        parse_bfile("0 x\n")


def test_cache_info_and_clear(dirs, capsys):
    out, cache = dirs
    assert run(["tables", "--kmax", 3, "--format", "json", "--out", out, "--cache-dir", cache]) == 0
    capsys.readouterr()
    assert run(["cache", "info", "--cache-dir", cache]) == 0
    assert "table files: 1" in capsys.readouterr().out
    assert run(["cache", "clear", "--cache-dir", cache]) == 0
    assert not list(cache.glob("tables_*.json"))
