import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transcert.cli import CONFIG_ENV, RunConfig, UsageError, dispatch


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_expand_j(tmp_path, capsys):
    out = tmp_path / "j.txt"
    code, rep = run(["expand", "--form", "j", "--trunc", "2", "--out", str(out)], capsys)
    assert code == 0
    assert out.read_text().splitlines()[1:] == ["1", "744", "196884"]
    assert rep["schema_version"] == 1 and "provenance" in rep


def test_unknown_flag_is_usage_error(capsys):
    assert dispatch(["expand", "--bogus"]) == 64
    assert dispatch(["nosuch"]) == 64


def test_primes_claim_violation_exit(capsys):
    code, rep = run(["primes", "certify", "--limit", "1000"], capsys)
    assert code == 1 and rep["result"]["claim_violated"]


def test_hecke_pass(capsys):
    code, rep = run(["certify-hecke", "--N", "2", "--l", "2", "--trunc", "60"], capsys)
    assert code == 0 and rep["result"]["pass"]
    assert dispatch(["certify-hecke", "--N", "2", "--l", "3"]) == 64


def test_height(capsys):
    code, rep = run(["height", "--minpoly=-2,0,1"], capsys)
    assert code == 0
    assert rep["result"]["deg"] == 2 and {"M", "m", "h"} <= set(rep["result"])
    assert dispatch(["height", "--minpoly=-1,0,1"]) == 64  # reducible


def test_modpoly_verify(tmp_path, capsys):
    out = tmp_path / "phi2.txt"
    code, rep = run(["modpoly", "--p", "2", "--verify", "--out", str(out)], capsys)
    assert code == 0 and rep["result"]["identity"]["pass"]
    code, rep = run(["modpoly", "--p", "2", "--certify", "--in", str(out)], capsys)
    assert code == 0


def test_build_aux_and_scan(tmp_path, capsys):
    out = tmp_path / "aux.json"
    code, rep = run(["build-aux", "--N", "2", "--out", str(out), "--samples", "10"], capsys)
    assert code == 0
    data = json.loads(out.read_text())
    assert data["series"]["valuation"] == data["M"]
    code, rep = run(["scan-primes", "--q", "0.5", "--pmax", "30", "--N", "2"], capsys)
    assert code == 0 and rep["result"]["P"] == 2


def test_chain_commands(capsys):
    code, rep = run(["chain", "cutoff", "--deg-q", "2", "--N", "10"], capsys)
    assert code == 0 and rep["result"]["P"] == 67
    code, rep = run(["chain", "threshold", "--c18", "1"], capsys)
    assert rep["result"]["threshold_M"] == 5504
    code, rep = run(["chain", "run", "--q", "0.5", "--N", "4"], capsys)
    assert code == 0
    assert rep["provenance"]["constant_ledger"]["C2"]["provenance"] == "user-configured"
    assert dispatch(["chain", "run", "--N", "4"]) == 64


def test_missing_constant_file_aborts(tmp_path, capsys):
    path = tmp_path / "consts.json"
    path.write_text(json.dumps({"constants": {}}))
    assert dispatch(["chain", "run", "--q", "0.5", "--N", "3", "--constants", str(path)]) == 64


def test_config_env_and_validation(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"precision_bits": 8}))
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    assert dispatch(["chain", "cutoff", "--deg-q", "1", "--N", "1"]) == 64
    cfg.write_text(json.dumps({"unknown_key": 1}))
    assert dispatch(["chain", "cutoff", "--deg-q", "1", "--N", "1"]) == 64
    cfg.write_text(RunConfig(precision_bits=256).dumps())
    code, rep = run(["chain", "cutoff", "--deg-q", "1", "--N", "1"], capsys)
    assert code == 0 and rep["provenance"]["precision_bits"] == 256


def test_output_file(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert dispatch(["--output", str(out), "chain", "cutoff", "--deg-q", "1", "--N", "3"]) == 0
    assert json.loads(out.read_text())["result"]["P"] == 11


configs = st.builds(
    RunConfig,
    precision_bits=st.integers(16, 4096),
    sieve_limit=st.integers(100, 10**7),
    expand_trunc=st.integers(1, 10**5),
    aux_trunc=st.one_of(st.none(), st.integers(1, 10**4)),
    constants_path=st.one_of(st.none(), st.text(min_size=1, max_size=20)),
    output_path=st.one_of(st.none(), st.text(min_size=1, max_size=20)),
)


@given(configs)
def test_config_roundtrip(cfg):
    assert RunConfig.loads(cfg.dumps()) == cfg


def test_config_rejects_bad_types():
    with pytest.raises(UsageError):
        RunConfig(precision_bits="high").validate()
    with pytest.raises(UsageError):
        RunConfig.loads("[1, 2]")


def test_reports_are_byte_identical(capsys):
    argv = ["chain", "run", "--q", "1/2", "--N", "3"]
    dispatch(argv)
    first = capsys.readouterr().out
    dispatch(argv)
    assert capsys.readouterr().out == first
