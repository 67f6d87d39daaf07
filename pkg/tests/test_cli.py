import subprocess
import sys

import pytest

from sslie.catalog import get
from sslie.cli import main
from sslie.commands import parse_range, run, split_top, UsageError
from sslie.specfile import dump


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dims(capsys):
    code, out, _ = cli(capsys, "dims", "gupta_sidki", "--levels", "2..6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,dim,fitted,residual"
    rows = [l.split(",") for l in lines[1:]]
    assert [int(r[1]) for r in rows] == [3, 7, 19, 55, 163]
    assert all(r[3] == "0" for r in rows)


def test_hausdorff(capsys):
    code, out, _ = cli(capsys, "hausdorff", "grigorchuk")
    assert code == 0 and out.splitlines()[0] == "1/2"
    code, out, _ = cli(capsys, "hausdorff", "gupta_sidki", "--no-relative")
    assert out.splitlines()[0] == "4/27"


def test_nucleus(capsys):
    code, out, _ = cli(capsys, "nucleus", "gupta_sidki")
    assert code == 0
    assert "contracting: yes" in out and "dim: 2" in out
    assert "  a" in out.splitlines() and "  t" in out.splitlines()


def test_nilcert(capsys):
    code, out, _ = cli(capsys, "nilcert", "gupta_sidki")
    assert code == 0 and "result: certified" in out
    code, out, _ = cli(capsys, "nilcert", "grigorchuk", "--ell", "3")
    assert code == 1 and "result: failed" in out
    code, out, _ = cli(capsys, "nilcert", "gupta_sidki", "--gens", "t,[t,a]")
    assert "generator: [a,t]" in out or "generator: 2*[a,t]" in out


def test_nilorder(capsys):
    code, out, _ = cli(capsys, "nilorder", "fabrykowski_gupta", "--element", "a+t", "--level", "5")
    assert code == 0
    assert out.splitlines()[2:] == [f"{n},{n}" for n in range(1, 6)]
    code, _, err = cli(capsys, "nilorder", "grigorchuk", "--element", "a")
    assert code == 2 and "restricted" in err
    code, _, err = cli(capsys, "nilorder", "gupta_sidki", "--element", "a", "--level", "9")
    assert code == 1 and "resource cap" in err


def test_poincare(capsys):
    code, out, _ = cli(capsys, "poincare", "grigorchuk", "--cutoff", "10")
    coeffs = [int(l.split(",")[1]) for l in out.splitlines() if l[0].isdigit()]
    assert coeffs == [1, 3, 8, 17, 34, 62, 109, 182, 296, 466, 719]


def test_group(capsys):
    code, out, _ = cli(capsys, "group", "grigorchuk_group", "order", "a*b")
    assert code == 0 and out.startswith("order(a*b) = 16")
    code, out, _ = cli(capsys, "group", "gupta_sidki_group", "act", "t", "2,0,1")
    assert out.strip() == "2,0,2"
    code, _, err = cli(capsys, "group", "gupta_sidki", "order", "a")
    assert code == 2 and "group spec" in err
    code, _, err = cli(capsys, "group", "gupta_sidki_group", "act", "t", "0,5")
    assert code == 2


def test_spec_file_argument(capsys, tmp_path):
    f = tmp_path / "gs.spec"
    f.write_text(dump(get("gupta_sidki").spec))
    code, out, _ = cli(capsys, "dims", str(f), "--levels", "4")
    assert code == 0 and out.splitlines()[-1].startswith("4,19,")
    bad = tmp_path / "bad.spec"
    bad.write_text("kind: algebra\nname: x\np: 3\n")
    code, _, err = cli(capsys, "dims", str(bad))
    assert code == 2 and "line " in err


@pytest.mark.parametrize(
    "argv",
    [
        ["dims", "no_such_entry"],
        ["dims", "gupta_sidki", "--levels", "5..2"],
        ["dims", "gupta_sidki", "--levels", "x"],
        ["nilcert", "gupta_sidki", "--gens", "[a,"],
        ["hausdorff", "gupta_sidki", "--window", "2..3"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = cli(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("sslie: ")


def test_verify_paper_requires_a_choice(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["verify-paper"])
    assert ei.value.code == 2
    assert run("verify-paper", {}).exit_code == 2


def test_verify_paper_known_deviation_policy(capsys):
    code, out, _ = cli(capsys, "verify-paper", "--entry", "gupta_sidki")
    assert out.splitlines()[0] == "criterion,entry,check,status,note,detail"
    assert any(",FAIL,known deviation," in l for l in out.splitlines())
    assert code == 0
    code, _, _ = cli(capsys, "verify-paper", "--entry", "gupta_sidki", "--strict")
    assert code == 1
    code, out, _ = cli(capsys, "verify-paper", "--entry", "properties")
    assert code == 0 and "FAIL" not in out


def test_deterministic_output(capsys):
    a = cli(capsys, "poincare", "gupta_sidki", "--cutoff", "12")
    b = cli(capsys, "poincare", "gupta_sidki", "--cutoff", "12")
    assert a == b


def test_helpers():
    assert parse_range("6") == (1, 6) and parse_range("2..6") == (2, 6)
    with pytest.raises(UsageError):
        parse_range("0")
    assert split_top("t,[t,a],(a+t)") == ["t", "[t,a]", "(a+t)"]
    assert run("frobnicate", {}).exit_code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sslie", "group", "grigorchuk_group", "order", "a*d"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and r.stdout.startswith("order(a*d) = 4")
