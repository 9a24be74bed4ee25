import json
import subprocess
import sys

import pytest

from cmcongruence import cache
from cmcongruence.cli import Config, load_config, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_certify_counterexample(capsys):
    code, out, _ = run(capsys, "certify", "-D", "239", "-p", "79", "--json")
    doc = json.loads(out)
    assert code == 1
    assert doc["divides"] is False
    assert doc["series_prefix"][:3] == ["44", "2", "62"]


def test_certify_success(capsys):
    code, out, _ = run(capsys, "certify", "-D", "23", "-p", "5", "--json")
    assert code == 0 and json.loads(out)["constant"] is True


def test_ssp_and_hcp_text(capsys):
    code, out, _ = run(capsys, "ssp", "-p", "13")
    assert code == 0 and "S_13 = x - 5" in out
    code, out, _ = run(capsys, "hcp", "-D", "3")
    assert code == 0 and out.strip() == "x"


def test_error_exit_code(capsys):
    code, _, err = run(capsys, "hcp", "-D", "5")
    assert code == 2 and "not a discriminant" in err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["certify", "-D", "x"])
    assert exc.value.code == 2


def test_json_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "theta", "-p", "13", "-M", "50", "--embeddings", "--json")
        outs.append(out)
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["jseries", "-N", "20", "--lehner", "50"],
        ["up", "-D", "23", "-p", "7", "-N", "20"],
        ["up", "-D", "23", "-p", "5", "-N", "30", "--identity"],
        ["survey", "-p", "13", "--dmax", "200"],
        ["scan", "-p", "13", "-t", "2", "--dmax", "400"],
        ["delta", "-p", "13", "--corollary", "2", "-N", "40"],
        ["theta", "-p", "2", "-M", "30", "--eisenstein"],
        ["crosscheck", "-p", "13", "--dmax", "100", "--inert"],
        ["ssp", "--range", "5", "60", "--oracle", "30"],
    ],
)
def test_subcommands_succeed(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    json.loads(out)


def test_config_file(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# experiment\norder = 50\nworkers=2\ncache_dir = /tmp/x\n")
    c = load_config(str(cfg))
    assert c.order == 50 and c.workers == 2 and c.cache_dir == "/tmp/x"
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path / "env"))
    assert load_config(str(cfg)).cache_dir == str(tmp_path / "env")
    cfg.write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        load_config(str(cfg))
    with pytest.raises(ValueError):
        Config(order=0)


def test_cache_dir_flag_writes_artifacts(tmp_path, capsys):
    from cmcongruence.hilbert import _hcp_memo

    _hcp_memo.cache_clear()
    code, _, _ = run(capsys, "hcp", "-D", "71", "--cache-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "hcp" / "71.json").exists()
    _hcp_memo.cache_clear()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cmcongruence", "ssp", "-p", "17"], capture_output=True, text=True)
    assert res.returncode == 0 and "x - 8" in res.stdout
