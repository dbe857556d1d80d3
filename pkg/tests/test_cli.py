import io
import json

import pytest

from wittgk.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def body_lines(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_bracket_example(capsys):
    code, out = run("bracket", "--algebra", "virasoro", "--", "e[-2]", "e[2]")
    assert code == 0
    assert out.strip() == "4*e[0] - 1/2*c"
    # the resolved config goes to the diagnostic stream in text mode
    assert '"algebra": "virasoro"' in capsys.readouterr().err


def test_poisson_bracket():
    code, out = run("bracket", "--algebra", "witt-positive", "x[1]x[1]", "x[2]")
    assert code == 0 and out.strip() == "2*x[1]x[3]"


def test_params_example():
    code, out = run("params", "--algebra", "witt-positive", "--side", "poisson", "--ideal", "x[1]x[1]")
    doc = json.loads(out)
    assert code == 0
    assert (doc["k"], doc["n"]) == (2, 3)
    assert doc["schema_version"] == 1 and doc["config"]["ideal"] == "x[1]x[1]"


def test_verma_example():
    code, out = run("verma", "--kappa", "1", "--lambda", "1/2", "--max-degree", "5", "--format", "csv")
    assert code == 0
    assert out.startswith("# schema_version=1")
    assert body_lines(out) == ["n,dim", "0,1", "1,1", "2,2", "3,3", "4,5", "5,7"]


def test_normalize_gr_phi_order():
    assert run("normalize", "--input", "e[2]e[1]")[1].strip() == "e[1]e[2] - e[3]"
    assert run("gr", "--input", "e[2]e[1]")[1].strip() == "x[1]x[2]"
    # e_{-3} e_{-4} = e_{-4} e_{-3} + [e_{-3}, e_{-4}]
    assert run("phi", "--input", "e[3]e[4]")[1].strip() == "e[-4]e[-3] - e[-7]"
    assert run("order", "--algebra", "witt-positive", "x[1]x[4]", "x[2]x[3]")[1].strip() == "<"
    assert run("order", "--order", "dec", "--algebra", "witt-positive", "x[1]x[4]", "x[2]x[3]")[1].strip() == ">"


def test_normal_form_and_verify(tmp_path):
    args = ["--algebra", "witt", "--side", "two-sided", "--ideal", "e[1]e[1]", "--input", "e[5]e[6]e[7]"]
    code, out = run("normal-form", *args)
    assert code == 0
    cert = tmp_path / "nf.json"
    cert.write_text(out)
    code, out = run("verify", *args, "--certificate", str(cert), "--format", "text")
    assert (code, out.strip()) == (0, "true")
    bad = [a if a != "e[5]e[6]e[7]" else "e[5]e[6]e[8]" for a in args]
    code, out = run("verify", *bad, "--certificate", str(cert), "--format", "text")
    assert (code, out.strip()) == (1, "false")


def test_reduce_json():
    code, out = run("reduce", "--algebra", "witt-positive", "--ideal", "x[1]x[1]", "--input", "x[3]x[3]")
    doc = json.loads(out)
    assert code == 0 and doc["text"] == "x[1]x[5]"
    assert doc["step"]["chain"] == [2, 2]


def test_growth_csv_and_figure(tmp_path):
    fig = tmp_path / "growth.png"
    code, out = run("growth", "--algebra", "witt-positive", "--ideal", "x[1]x[1]", "--max-degree", "6",
                    "--figure", str(fig))
    assert code == 0
    rows = body_lines(out)
    assert rows[0] == "N,dim,cumulative,spanning_count,bound"
    assert rows[4] == "3,2,5,7,12"
    assert fig.stat().st_size > 1000


def test_sk_probe_and_verma_figures(tmp_path):
    fig = tmp_path / "sk.png"
    code, out = run("sk-probe", "--algebra", "witt-positive", "--k", "2", "--ideal", "x[1]x[3]",
                    "--max-degree", "5", "--figure", str(fig))
    assert code == 0 and body_lines(out)[1:3] == ["1,0,0", "2,1,1"]
    assert fig.exists()
    fig2 = tmp_path / "verma.svg"
    assert run("verma", "--max-degree", "12", "--figure", str(fig2))[0] == 0
    assert fig2.read_text().lstrip().startswith("<?xml")


def test_filtration_check():
    code, out = run("filtration-check", "--algebra", "witt", "--side", "two-sided", "--ideal", "e[1]e[1]",
                    "--samples", "5", "--max-degree", "10")
    doc = json.loads(out)
    assert code == 0 and doc["C"] == 16 and doc["all_pass"] and len(doc["samples"]) == 5


def test_act_and_ann_falsify():
    vector = json.dumps([{"partition": [-1], "basis": 0, "coeff": {"num": "1", "den": "1"}}])
    code, out = run("act", "--kappa", "1", "--lambda", "1/2", "--input", "e[1]", "--vector", vector)
    assert code == 0
    assert json.loads(out)["result"] == [{"partition": [], "basis": 0, "coeff": {"num": "-1", "den": "1"}}]
    code, out = run("ann-falsify", "--kappa", "0", "--lambda", "0", "--input", "e[1]", "--depth", "2")
    doc = json.loads(out)
    assert doc["found"] and doc["witness"] == {"partition": [-2], "basis": 0}
    code, out = run("ann-falsify", "--kappa", "1", "--input", "c - 1", "--depth", "2")
    assert json.loads(out)["outcome"] == "NoWitnessUpToDepth"


def test_log_module_from_matrix():
    code, out = run("act", "--kappa", "0", "--e0-matrix", "[[2, 1], [0, 2]]", "--input", "e[0]",
                    "--vector", '[{"partition": [], "basis": 1, "coeff": {"num": "1"}}]')
    terms = {(t["basis"], t["coeff"]["num"]) for t in json.loads(out)["result"]}
    assert code == 0 and terms == {(0, "1"), (1, "2")}


def test_exit_codes(capsys):
    assert run("bracket", "--algebra", "witt", "--", "x[1]x[1", "x[2]")[0] == 2
    assert "column 8" in capsys.readouterr().err
    assert run("params", "--algebra", "witt-positive")[0] == 2
    assert run("params", "--algebra", "affine", "--ideal", "x[1]")[0] == 2
    assert run("normal-form", "--algebra", "witt-positive", "--ideal", "x[1]x[1]",
               "--input", "x[3]x[3]x[3]x[3]", "--max-steps", "1")[0] == 3
    assert run("growth", "--algebra", "witt-positive", "--ideal", "x[1]x[1]", "--max-degree", "30",
               "--budget", "10")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["params", "--bogus"])
    assert exc.value.code == 2


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nalgebra = witt-positive\nideal = x[1]x[1]\nmax-degree = 3\nformat = csv\n")
    code, out = run("growth", "--config", str(cfg))
    assert code == 0 and len(body_lines(out)) == 5
    code, out = run("growth", "--config", str(cfg), "--max-degree", "5")
    assert len(body_lines(out)) == 7
    cfg.write_text("nonsense = 1\n")
    assert run("growth", "--config", str(cfg))[0] == 2


def test_determinism():
    args = ["filtration-check", "--algebra", "witt", "--side", "two-sided", "--ideal", "e[1]e[1]",
            "--samples", "4", "--seed", "9"]
    assert run(*args)[1] == run(*args)[1]


def test_suite_list_and_negative_control():
    code, out = run("suite", "--list")
    assert code == 0 and out.split() == [
        "c1-lie-axioms", "c2-pbw-confluence", "c3-gr-compat", "c4-reduction-formula", "c5-normal-forms",
        "c6-growth-bound", "c7-filtration", "c8-verma", "c9-annihilator", "c10-phi", "c11-sk-probe",
    ]
    code, out = run("suite", "--only", "c6-growth-bound", "--set", "c6.slope_bound=0")
    doc = json.loads(out)
    assert code != 0 and doc["criteria"][0]["status"] == "fail"
    code, out = run("suite", "--only", "c4-reduction-formula")
    assert code == 0 and json.loads(out)["all_pass"]
    assert run("suite", "--set", "nope=1")[0] == 2
