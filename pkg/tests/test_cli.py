import csv
import io
import json

import pytest

from torsionkit import cli, suites, torsion_forms


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_torsion_p1_json_record():
    code, out, _ = run("torsion-p1", "--ell", "100", "--phi-pi", "1/3", "--N", "10", "--json")
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"inputs", "results", "suite"}
    assert rec["inputs"]["angle"] == "exact"
    asy = rec["results"]["asymptotic"]
    assert {"value", "bound", "terms", "ledger"} <= set(asy)
    assert set(asy["ledger"]) == {"log", "metric", "rrot", "digamma", "middle"}
    ex = rec["results"]["exact"]
    assert abs(asy["value"][0] - ex["value"][0]) <= asy["bound"] + ex["bound"]


def test_inexact_angle_is_marked():
    code, out, _ = run("torsion-p1", "--ell", "20", "--phi", "1.0", "--json")
    assert code == 0
    assert json.loads(out)["inputs"]["angle"] == "inexact-angle"


def test_verify_is_deterministic():
    a = run("verify", "--suite", "identities", "--seed", "7")
    b = run("verify", "--suite", "identities", "--seed", "7")
    assert a == b
    assert a[0] == 0 and a[1].rstrip().endswith("passed")


def test_torsion_form_csv_matches_leading_terms():
    code, out, _ = run("torsion-form", "--degree", "4", "--symbolic", "--N", "6", "--csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    header, body = rows[0], rows[1:]
    assert header[:7] == ["section", "n", "m", "monomial", "term", "power_of_ell", "log_power"]
    assert all(len(r) == len(header) for r in body)
    lead = torsion_forms.leading_torsion_form(4)
    expected = {}
    for mono, c in lead.items():
        for j, p, coeff in c.items():
            expected[(lead.monomial_name(mono), j, p)] = repr(coeff)
    got = {(r[3], int(r[5]), int(r[6])): r[7] for r in body if r[0] == "form" and int(r[5]) >= 4}
    assert got == expected


def test_torsion_form_numeric_has_ledger():
    code, out, _ = run("torsion-form", "--degree", "2", "--ell", "60", "--json")
    assert code == 0
    ledger = json.loads(out)["results"]["ledger"]
    assert set(ledger) == {"0", "1"}
    assert {"T1", "T3", "T21", "T22", "T23even", "T24", "T25_bound"} == set(ledger["1"])


def test_csv_quotes_fields_with_commas():
    code, out, _ = run("torsion-form", "--degree", "1", "--symbolic", "--N", "2", "--csv")
    assert code == 0
    assert out.endswith("\r\n")
    for row in csv.reader(io.StringIO(out)):
        assert len(row) == 11


@pytest.mark.parametrize(
    "argv",
    [
        ("nonsense",),
        ("lerch", "--n", "1"),
        ("torsion-form", "--degree", "2"),
        ("torsion-p1", "--ell", "5", "--phi-pi", "x/y"),
        ("torsion-p1", "--ell", "5"),
        ("torsion-flag", "--space", "P1", "--ell", "5"),
        ("torsion-sym", "--space", "nowhere", "--ell", "5"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = run(*argv)
    assert code == 2 and out == "" and err


def test_unreachable_tolerance_exits_3():
    code, _, err = run("lerch", "--n", "3", "--v", "4", "--a", "1", "--tol", "1e-300")
    assert code == 3 and "tolerance" in err


def test_failed_check_exits_3(monkeypatch):
    monkeypatch.setitem(suites.SUITES, "identities", lambda seed: [suites.Check("always fails", False)])
    code, out, _ = run("verify", "--suite", "identities")
    assert code == 3 and "FAIL" in out


def test_other_subcommands_run():
    cases = [
        ("lerch", "--phi-pi", "1/3", "--n", "1", "--v", "50", "--a", "1", "--N", "6", "--json"),
        ("sum-log", "--poly", "[[1,0,1,0,0,1,0,1]]", "--v", "40", "--a", "0", "--csv"),
        ("torsion-sym", "--space-json", '{"type": "P2"}', "--ell", "20", "--N", "6"),
        ("torsion-flag", "--space", "SU3/T", "--X", "1/97,3/97,-4/97", "--ell", "30", "--json"),
        ("jantzen", "--group", "A1", "--lam", "1/2,-1/2", "--ell", "3"),
        ("lie-torsion", "--ell", "49", "--t", "1.0"),
        ("puchol", "--degree", "3", "--json"),
    ]
    for argv in cases:
        code, out, err = run(*argv)
        assert code == 0, (argv, err)
        assert out


def test_jantzen_exact_log_coefficients():
    code, out, _ = run("jantzen", "--group", "A1", "--lam", "1/2,-1/2", "--ell", "3", "--json")
    rec = json.loads(out)
    assert rec["results"]["log_coefficients"] == {"3": "2"}
