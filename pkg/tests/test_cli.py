import json

from fmpartners import catalog
from fmpartners.cli import main
from fmpartners.count import CountReport, shipped_scenario


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_involution(capsys):
    code, out, _ = run(capsys, "run", "involution")
    assert code == 0
    assert "E8(2)" in out and "count = 1120" in out and "count = 1\n" in out


def test_run_machine_output_round_trips(capsys):
    code, out, _ = run(capsys, "run", "involution", "--machine", "--threads", "2")
    assert code == 0
    rep = CountReport.from_dict(json.loads(out))
    assert rep.counts() == {"E8(2)": 1, "E6(2)+A2(2)": 1120}
    assert json.loads(rep.to_json()) == json.loads(out)


def test_exit_status_follows_expected_counts(capsys, tmp_path):
    s = shipped_scenario("involution")
    s.expected = {"E8(2)": 2}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(s.to_dict()))
    code, out, err = run(capsys, "run", str(p))
    assert code != 0 and "E8(2)" in err


def test_run_phi36_exit_status_matches_report(capsys):
    code, out, _ = run(capsys, "run", "phi36", "--machine")
    rep = CountReport.from_dict(json.loads(out))
    assert rep.counts()["CoxeterTodd"] == 351
    assert (code == 0) == (not rep.mismatches)


def test_malformed_input(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{")
    code, _, err = run(capsys, "run", str(p))
    assert code == 2 and "ParseError" in err
    code, _, err = run(capsys, "info", "no-such-lattice")
    assert code == 2


def test_disc_coxeter_todd(capsys):
    code, out, _ = run(capsys, "disc", "CoxeterTodd", "--machine")
    doc = json.loads(out)
    assert code == 0
    assert doc["invariant_factors"] == [3] * 6
    assert doc["parts"][0]["type"] == "minus"
    assert doc["orthogonal_order"] == 26127360


def test_shortvec_k_mystery(capsys):
    code, out, _ = run(capsys, "shortvec", "K_mystery", "6", "--machine")
    doc = json.loads(out)
    assert doc["counts"] == {"4": 270, "6": 1116}
    assert doc["divisibility"]["6"]["3"] == 36


def test_aut_e8_2(capsys):
    code, out, _ = run(capsys, "aut", "E8(2)")
    assert code == 0
    assert "696729600" in out and "348364800" in out


def test_info_from_file(capsys, tmp_path):
    p = tmp_path / "a2.json"
    p.write_text(json.dumps({"label": "A2", "gram": [list(r) for r in catalog.A2.gram]}))
    code, out, _ = run(capsys, "info", str(p), "--machine")
    doc = json.loads(out)
    assert doc["signature"] == [2, 0] and doc["determinant"] == 3 and doc["even"]


def test_output_is_deterministic(capsys):
    outs = [run(capsys, "disc", "T_inv")[1] for _ in range(2)]
    assert outs[0] == outs[1]
