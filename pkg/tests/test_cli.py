import json
import subprocess
import sys

import pytest

from bdhroute import io as bio
from bdhroute.bench import parse_report_csv, parse_trials_csv
from bdhroute.cli import main

GEN_FLAGS = ["-n", "40", "-m", "160", "-k", "120"]


@pytest.fixture
def instance(tmp_path):
    path = tmp_path / "inst.txt"
    assert main(["generate", *GEN_FLAGS, "--seed", "5", "--out", str(path)]) == 0
    return path


def test_generate_writes_instance_and_sidecar(instance, capsys):
    net, demands = bio.read_instance(instance)
    assert net.node_count == 40 and len(demands) == 120
    planted, chosen = bio.parse_sidecar(bio.read_text(bio.sidecar_path(instance)), net)
    assert len(planted) == 120 and len(chosen) == 96


@pytest.mark.parametrize("algorithm", ["main", "kspa-delay", "kspa-hop", "mda", "wsp", "swp",
                                       "main:rule=none"])
def test_solve_then_verify(instance, tmp_path, algorithm, capsys):
    out = tmp_path / "sol.txt"
    argv = ["solve", "--instance", str(instance), "--algorithm", algorithm,
            "--k-paths", "16", "--solution-out", str(out)]
    assert main(argv) == 0
    assert "throughput=" in capsys.readouterr().out
    assert main(["verify", "--instance", str(instance), "--solution", str(out)]) == 0
    assert capsys.readouterr().out.startswith("valid")


def test_verify_failure_exit_code(instance, tmp_path, capsys):
    out = tmp_path / "sol.txt"
    main(["solve", "--instance", str(instance), "--solution-out", str(out)])
    text = bio.read_text(out)
    tampered = "\n".join(
        "throughput,1" if line.startswith("throughput") else line for line in text.splitlines())
    out.write_text(tampered + "\n")
    capsys.readouterr()
    assert main(["verify", "--instance", str(instance), "--solution", str(out)]) == 1
    assert "INVALID" in capsys.readouterr().out


def test_errors_exit_2(tmp_path, capsys):
    assert main(["solve", "--instance", str(tmp_path / "missing.txt")]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("nodes,2\nedge,0,0,0,1,1\n")
    assert main(["solve", "--instance", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


def test_solve_flags(instance, capsys):
    argv = ["solve", "--instance", str(instance), "--rule", "rule3", "--selection", "random",
            "--seed", "4", "--threads", "2"]
    assert main(argv) == 0


def test_thread_env_override(instance, monkeypatch, capsys):
    import bdhroute.cli as cli
    seen = []
    real = cli.run_algorithm

    def spy(spec, network, demands, base):
        seen.append(base.workers)
        return real(spec, network, demands, base)

    monkeypatch.setattr(cli, "run_algorithm", spy)
    monkeypatch.setenv("BDHROUTE_THREADS", "3")
    main(["solve", "--instance", str(instance)])
    main(["solve", "--instance", str(instance), "--threads", "1"])
    assert seen == [3, 1]
    monkeypatch.setenv("BDHROUTE_THREADS", "many")
    with pytest.raises(SystemExit):
        main(["solve", "--instance", str(instance)])


@pytest.mark.parametrize("fmt", ["csv", "json", "text"])
def test_bench(tmp_path, fmt, capsys):
    out = tmp_path / f"report.{fmt}"
    argv = ["bench", *GEN_FLAGS, "--trials", "2", "--algorithms", "main;mda;kspa-delay:k=8",
            "--format", fmt, "--out", str(out)]
    assert main(argv) == 0
    text = out.read_text()
    records = parse_trials_csv(bio.read_text(str(out) + ".trials.csv"))
    assert len(records) == 6 and {r.status for r in records} == {"ok"}
    if fmt == "csv":
        assert {r.algorithm for r in parse_report_csv(text).rows} == {"main", "mda", "kspa-delay:k=8"}
    elif fmt == "json":
        assert json.loads(text)["sd"] == "population"
    else:
        assert text.startswith("class")


def test_bench_to_stdout(capsys):
    assert main(["bench", *GEN_FLAGS, "--trials", "1", "--algorithms", "wsp", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("class,algorithm,metric")


def test_module_entry_point(instance):
    proc = subprocess.run([sys.executable, "-m", "bdhroute", "verify", "--instance", str(instance),
                           "--solution", str(instance)], capture_output=True, text=True)
    # an instance file is not a solution file
    assert proc.returncode == 2 and "error:" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "bdhroute", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "generate" in proc.stdout
