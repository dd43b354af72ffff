import json

import pytest

from spinindex import cache as cache_mod
from spinindex import cli
from spinindex.casestudies import ConstructionError
from spinindex.numfield import golden_tower, sqrt_or_extend


def run_main(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr().out
    return code, out


def test_parse_powers():
    assert cli.parse_powers("all", 5) == (1, 2, 3, 4, 5)
    assert cli.parse_powers("1,3-5", 15) == (1, 3, 4, 5)
    with pytest.raises(cli.UsageError):
        cli.parse_powers("16", 15)
    with pytest.raises(cli.UsageError):
        cli.parse_powers("x", 15)


def test_radical_form():
    G = golden_tower()
    assert cli.radical_form(-G.gen(0)) == "-√5"
    r = sqrt_or_extend((5 + G.gen(0)) / 2)
    assert cli.radical_form(-r) == "-sqrt(5/2 + 1/2·√5)"


def test_decagon_json(capsys):
    code, out = run_main(capsys, "run", "--case", "decagon", "--powers", "1", "--output", "json", "--no-timing")
    assert code == 0
    doc = json.loads(out)
    spin = doc["powers"]["1"]["spin"]
    assert spin["exact"] == "-i·sqrt(5/2 + 1/2·√5)"
    assert spin["root_of_unity_form"] == "e^{-2πi/5} - e^{2πi/5}"
    assert spin["decimal"].startswith("-1.90211303259030714423287866675876428681139726825")
    assert cli.canonical_json(doc) == out.strip()
    assert doc["case"]["lift_of_f_trace"]["exact"] == "-1/2 - 1/2·√5"


def test_decagon_text_full(capsys):
    code, out = run_main(capsys, "--case", "decagon", "--verify", "full")
    assert code == 0
    assert "unique lift: True" in out
    assert "p(x) = -x + x^4" in out


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("SPINIDX_CASE", "decagon")
    monkeypatch.setenv("SPINIDX_OUTPUT", "json")
    code, out = run_main(capsys, "--powers", "5", "--no-timing")
    assert code == 0
    doc = json.loads(out)
    assert doc["case"]["name"] == "decagon"
    assert doc["powers"]["5"]["spin"]["exact"] == "0"


def test_usage_errors(capsys):
    assert cli.main(["--case", "decagon", "--powers", "6"]) == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        cli.main(["--case", "nowhere"])
    assert exc.value.code == cli.EXIT_USAGE


def test_threads_give_same_report(capsys):
    _, a = run_main(capsys, "--case", "decagon", "--output", "json", "--no-timing")
    _, b = run_main(capsys, "--case", "decagon", "--output", "json", "--no-timing", "--threads", "0")
    assert a == b


def test_exit_code_construction(capsys, monkeypatch):
    def boom(cfg):
        raise ConstructionError("synthetic")
    monkeypatch.setattr(cli, "build_case", boom)
    assert cli.main(["--case", "decagon"]) == cli.EXIT_CONSTRUCTION


def test_exit_code_verification(capsys, monkeypatch):
    real = cli.verify_case

    def bad(case, level):
        out = real(case, level)
        out["ok"] = False
        return out
    monkeypatch.setattr(cli, "verify_case", bad)
    assert cli.main(["--case", "decagon"]) == cli.EXIT_VERIFY


def test_exit_code_index(capsys, monkeypatch):
    from spinindex.indexengine import NonIntegralCoefficient

    def bad(values, N):
        raise NonIntegralCoefficient("synthetic")
    monkeypatch.setattr(cli, "character_poly", bad)
    assert cli.main(["--case", "decagon"]) == cli.EXIT_INDEX


def test_root_of_unity_form_absent_for_real():
    from spinindex.numfield import ComplexValue
    assert cli.root_of_unity_form(ComplexValue(1), 5) is None


def test_cache_admin(tmp_path, capsys, davis):
    path = str(tmp_path / "d.cache")
    sides = [s.center for s in davis.polytope.sides]
    cache_mod.save(path, davis.extras["symmetry"], sides)
    assert cli.main(["cache", "verify", "--path", path]) == 0
    assert "OK (14400 symmetries, 120 neighbor centers)" in capsys.readouterr().out
    loaded = cache_mod.load(path)
    assert loaded["neighbors"] == [tuple(a) for a in sides]
    assert loaded["symmetry"][5] == davis.extras["symmetry"][5]
    data = open(path, "rb").read()
    bad = str(tmp_path / "trunc.cache")
    open(bad, "wb").write(data[: len(data) // 2])
    assert cli.main(["cache", "verify", "--path", bad]) == cli.EXIT_VERIFY
    with pytest.raises(cache_mod.CorruptCache):
        cache_mod.verify(bad)
    flipped = bytearray(data)
    flipped[-10] ^= 0xFF
    open(bad, "wb").write(bytes(flipped))
    with pytest.raises(cache_mod.CorruptCache, match="hash"):
        cache_mod.load(bad)
    assert cli.main(["cache", "clear", "--path", path]) == 0
    assert cli.main(["cache", "clear", "--path", path]) == 0
    assert "nothing to remove" in capsys.readouterr().out


def test_run_with_cache_and_corrupt_cache(tmp_path, capsys, davis):
    path = str(tmp_path / "d.cache")
    cache_mod.save(path, davis.extras["symmetry"], [s.center for s in davis.polytope.sides])
    code, out = run_main(capsys, "--case", "davis", "--powers", "15", "--cache", path, "--output", "json")
    assert code == 0
    assert json.loads(out)["powers"]["15"]["spin"]["exact"] == "0"
    bad = str(tmp_path / "bad.cache")
    open(bad, "wb").write(b"SPINIDX-CACHE\n\x00\x00\x00\x01junk")
    code, out = run_main(capsys, "--case", "davis", "--powers", "15", "--cache", bad)
    assert code == 0
    assert "Spin = 0" in out
