import json

import pytest

from wzproof.cli import EXIT, exit_code, main

DIXON = "sum(k,-n,n,(-1)^k*binomial(2*n,n+k)^3) = product_form"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_prove_examples(capsys):
    code, out, _ = run(capsys, "prove", DIXON)
    assert code == 0 and "(3n)!/(n!)^3" in out
    assert run(capsys, "prove", "sum(k,0,n,binomial(n,k)^2) = binomial(2*n,n)+1")[0] == 1
    assert run(capsys, "prove", "sum(k,0,n,binomial(n,k)) = 2^n", "--max-order", "0")[0] == 2


def test_input_errors(capsys):
    assert run(capsys, "prove", "sum(k,0,n,binomial(n,k) = 2^n")[0] == 3
    assert run(capsys, "prove", "sum(k,0,n,binomial(n,k))")[0] == 3
    assert run(capsys, "verify", "/nonexistent/cert.json")[0] == 3
    assert run(capsys, "qcheck", "--identity", "7", "--order", "3")[0] == 3
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 3
    capsys.readouterr()


def test_exit_codes_total():
    assert {exit_code(v) for v in EXIT} == {0, 1, 2}


def test_verify_round_trip(capsys, tmp_path):
    cert = tmp_path / "dixon.json"
    assert run(capsys, "prove", DIXON, "--emit-cert", str(cert))[0] == 0
    assert run(capsys, "verify", str(cert))[0] == 0
    data = json.loads(cert.read_text())
    data["coeffs"][0] = "-27*n^2 - 27*n - 7"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run(capsys, "verify", str(bad))[0] == 1
    bad.write_text("{not json")
    assert run(capsys, "verify", str(bad))[0] == 3


def test_prob_verify_deterministic(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "prove", "sum(k,0,n,binomial(n,k)) = 2^n", "--emit-cert", str(cert))
    first = run(capsys, "verify", str(cert), "--mode", "prob", "--seed", "7")
    second = run(capsys, "verify", str(cert), "--mode", "prob", "--seed", "7")
    assert first == second and first[0] == 0
    assert "2^-" in first[1]


def test_wz_seed(capsys, tmp_path, monkeypatch):
    cert = tmp_path / "c.json"
    run(capsys, "prove", "sum(k,0,n,binomial(n,k)) = 2^n", "--emit-cert", str(cert))
    monkeypatch.setenv("WZ_SEED", "7")
    env = run(capsys, "--json", "verify", str(cert), "--mode", "prob")
    monkeypatch.delenv("WZ_SEED")
    flag = run(capsys, "--json", "verify", str(cert), "--mode", "prob", "--seed", "7")
    assert env == flag
    monkeypatch.setenv("WZ_SEED", "abc")
    assert run(capsys, "verify", str(cert), "--mode", "prob")[0] == 3


def test_no_cert_for_refuted(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, _, err = run(capsys, "prove", "sum(k,0,n,binomial(n,k)) = 2^n + 1", "--emit-cert", str(cert))
    assert code == 1 and not cert.exists() and "no certificate" in err


def test_recurrence(capsys):
    code, out, _ = run(capsys, "--json", "recurrence", "sum(k,0,n,binomial(n,k))")
    data = json.loads(out)
    assert code == 0 and data["order"] == 1 and data["coeffs"] == ["-2", "1"]
    code, out, _ = run(capsys, "recurrence", "sum(k,0,n,binomial(n,k))", "--max-order", "0")
    assert code == 2


def test_qcheck(capsys):
    assert run(capsys, "qcheck", "--identity", "rr", "--order", "30")[0] == 0
    code, out, _ = run(capsys, "qcheck", "--identity", "jacobi", "--order", "5", "--json")
    assert code == 0 and json.loads(out)["coefficients"] == [1, 8, 24, 32, 24, 48]
    assert run(capsys, "qcheck", "--identity", "8", "--n", "3")[0] == 0


def test_semi_json_reports_exponent(capsys):
    code, out, _ = run(capsys, "--json", "prove", "sum(k,0,n,binomial(n,k)) = 2^n", "--mode", "semi", "--seed", "3")
    data = json.loads(out)
    assert code == 0 and data["price"]["mode"] == "semi-rigorous"
    assert data["price"]["confidence_exponent"] > 100


def test_corpus(capsys):
    code, out, _ = run(capsys, "--json", "corpus")
    data = json.loads(out)
    assert code == 0 and data["all_as_expected"]
    verdicts = {(r["identity"], r["mode"]): r["verdict"] for r in data["rows"]}
    assert verdicts[("5", "rigorous")] == verdicts[("6", "rigorous")] == "Proved"
    assert verdicts[("6 as printed", "rigorous")] == "Refuted"
    assert all(verdicts[(q, "exact")] == "verified" for q in ("7", "8", "rr", "jacobi"))
    assert run(capsys, "--json", "corpus")[1] == out
