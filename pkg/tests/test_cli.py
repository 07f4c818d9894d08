import subprocess
import sys

import pytest

from flowcheck.circuit import parse_aiger
from flowcheck.cli import main, parse_instance_spec
from flowcheck.pnwt import parse_net
from flowcheck.sdn.fixtures import CONFIG_BEFORE, TOPOLOGY, UPDATE_CORRECT, UPDATE_WRONG_ORDER

CLI = [sys.executable, "-m", "flowcheck.cli"]


def run(*args, stdin=None):
    return subprocess.run(CLI + list(args), input=stdin, capture_output=True, text=True, timeout=300)


def bench(*args):
    out = run("bench", *args)
    assert out.returncode == 0, out.stderr
    return out.stdout


def test_switch_failure_pipeline_verifies():
    res = run("check", "--engine", "explicit", stdin=bench("sf", "--n", "3"))
    assert res.returncode == 0, res.stderr
    assert "verdict: verified" in res.stdout


def test_updated_pipeline_fails_under_bmc():
    res = run("check", "--engine", "bmc", "--bound", "30", stdin=bench("rp", "--n1", "1", "--n2", "1", "--version", "U"))
    assert res.returncode == 1, res.stderr
    assert "verdict: counterexample" in res.stdout
    assert "original firing sequence:" in res.stdout and "oracle confirmed: yes" in res.stdout


def test_malformed_net_is_an_error():
    res = run("check", "--formula", "A F p", stdin=".place p\n.bogus\n")
    assert res.returncode == 3
    assert "error" in res.stderr and res.stdout == ""


def test_missing_formula_is_an_error(tmp_path, capsys):
    path = tmp_path / "n.net"
    path.write_text(".place p init\n")
    assert main(["check", "--net", str(path)]) == 3
    assert "no formula" in capsys.readouterr().err


def test_unknown_subcommand_exits_with_error_code():
    assert run("frobnicate").returncode == 3


def test_bmc_without_counterexample_is_inconclusive(tmp_path, capsys):
    path = tmp_path / "sf.net"
    assert main(["bench", "sf", "--n", "3", "--out", str(path)]) == 0
    assert main(["check", "--net", str(path), "--engine", "bmc", "--bound", "4"]) == 2
    assert "verdict: inconclusive" in capsys.readouterr().out


def test_plain_ltl_on_net(tmp_path, capsys):
    path = tmp_path / "loop.net"
    path.write_text(".place p init\n.transition t\n.flow t : p -> p\n")
    assert main(["check", "--net", str(path), "--ltl", "--formula", "G p"]) == 0
    assert main(["check", "--net", str(path), "--ltl", "--formula", "F G !p"]) == 1
    assert "firing sequence:" in capsys.readouterr().out


def test_report_written_to_file_prints_verdict(tmp_path, capsys):
    net, report = tmp_path / "sf.net", tmp_path / "report.txt"
    main(["bench", "sf", "--n", "3", "--out", str(net)])
    assert main(["check", "--net", str(net), "--out", str(report)]) == 0
    assert capsys.readouterr().out == "verdict: verified\n"
    assert report.read_text().startswith("formula: ")


def test_transform_writes_inhibitor_net(tmp_path, capsys):
    path = tmp_path / "sf.net"
    main(["bench", "sf", "--n", "3", "--out", str(path)])
    assert main(["transform", "--net", str(path)]) == 0
    out = capsys.readouterr().out
    tnet = parse_net(out.split(".formula")[0])
    assert "act@o" in tnet.places and ".inhibitor" in out and ".formula" in out


def test_aiger_output_parses(tmp_path):
    net, aag = tmp_path / "sf.net", tmp_path / "sf.aag"
    main(["bench", "sf", "--n", "3", "--out", str(net)])
    assert main(["aiger", "--net", str(net), "--out", str(aag)]) == 0
    data = aag.read_bytes()
    assert data.startswith(b"aag ")
    assert b"formula X" in data
    parse_aiger(data)


def test_sdn_encode_then_check(tmp_path, capsys):
    top, cfg = tmp_path / "top.txt", tmp_path / "cfg.txt"
    top.write_text(TOPOLOGY)
    cfg.write_text(CONFIG_BEFORE)
    for update, spec, code in ((UPDATE_CORRECT, "loop-freedom", 0), (UPDATE_WRONG_ORDER, "loop-freedom", 1)):
        upd, net = tmp_path / "upd.txt", tmp_path / "net.txt"
        upd.write_text(update)
        args = ["sdn", "encode", "--topology", str(top), "--config", str(cfg), "--update", str(upd), "--spec", spec]
        assert main(args + ["--out", str(net)]) == 0
        assert main(["check", "--net", str(net)]) == code
    capsys.readouterr()


def test_sdn_coherence_needs_paths(tmp_path, capsys):
    top, cfg = tmp_path / "top.txt", tmp_path / "cfg.txt"
    top.write_text(TOPOLOGY)
    cfg.write_text(CONFIG_BEFORE)
    assert main(["sdn", "encode", "--topology", str(top), "--config", str(cfg), "--spec", "coherence"]) == 3
    assert "path1" in capsys.readouterr().err


def test_report_subcommand(capsys):
    assert main(["report", "sf:3", "rp:1:1:U"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("Ben.\tPar.\t|P|")
    assert [line.split("\t")[0] for line in lines[1:]] == ["RP", "SF"]
    assert lines[1].endswith("counterexample") and lines[2].endswith("verified")


def test_instance_specs():
    assert parse_instance_spec("sf:4").name == "SF/4"
    assert parse_instance_spec("ru:4:F:2").name == "RU/4/2/F"
    for bad in ("sf", "rp:1:1", "xx:1", "sf:one"):
        with pytest.raises(Exception):
            parse_instance_spec(bad)


def test_bench_is_deterministic():
    assert bench("ru", "--switches", "5", "--seed", "3") == bench("ru", "--switches", "5", "--seed", "3")
