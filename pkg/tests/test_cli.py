import io

from conseq import theories
from conseq.cli import run
from conseq.syntax import print_formula


def _run(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def test_parse_and_exit_codes():
    code, text = _run(["parse", "0=0"])
    assert code == 0 and text == "0=0\n"
    code, text = _run(["parse", "0=@"])
    assert code == 1 and text.startswith("error:")
    code, _ = _run(["frobnicate"])
    assert code == 2


def test_classify_output_format():
    code, text = _run(["classify", "E x0. x0=0"])
    assert code == 0 and text == "Sigma 1\n"
    ncon2 = print_formula(theories.ncon_formula(2, theories.standard_theory("EA")))
    code, text = _run(["classify", ncon2])
    assert code == 0 and text == "Pi 3\n"


def test_eval():
    code, text = _run(["eval", "--budget", "10", "0=0"])
    assert code == 0 and text == "true\n"
    code, text = _run(["eval", "--budget", "10", "0=S(0)"])
    assert text == "false\n"
    code, text = _run(["eval", "--budget", "10", "E x0. S(x0)=0"])
    assert text == "unknown\n"
    code, text = _run(["eval", "--budget", "10", "x0=0"])
    assert code == 1


def test_encode_decode_roundtrip():
    _, enc = _run(["encode", "A x0. x0=x0"])
    code, dec = _run(["decode", enc.strip()])
    assert code == 0 and dec == "A x0. x0=x0\n"
    code, text = _run(["decode", "7"])
    assert code == 1


def test_fixpoint():
    code, text = _run(["fixpoint", "(InSigma[1](x7)\\/x9=x9)", "--hole", "7", "--verify", "5"])
    assert code == 0
    lines = text.splitlines()
    assert lines[-2].startswith("Sigma") or lines[-2].startswith("Pi") or lines[-2].startswith("Delta")
    assert lines[-1] == "verified 5 samples: 0 disagreements"
    code, _ = _run(["fixpoint", "0=0", "--hole", "7"])
    assert code == 1


def test_craig_subcommand():
    code, text = _run(["craig", "--base", "BSigma1", "--count", "3"])
    assert code == 0
    assert "axiom 0 certificates ok" in text
    assert "axiom 2 certificates ok" in text


def test_seq_pipeline(tmp_path):
    spec_file = str(tmp_path / "spec.json")
    code, text = _run(["seq", "build", "sigma-slice", "--m", "2", "--base", "EA", "--out", spec_file])
    assert code == 0
    assert "declared Sigma 2" in text
    assert "actual Sigma 2" in text
    code, text = _run(["seq", "slice", spec_file, "--n", "0", "--bound", "50", "--budget", "500"])
    assert code == 0
    assert "scanned 51 codes" in text
    code, text = _run(["seq", "slice", spec_file, "--n", "0", "--bound", "5", "--budget", "200", "--all"])
    assert code == 0
    for k in range(6):
        assert f"k {k} verdict false formula non-code" in text


def test_seq_index_pipeline(tmp_path):
    spec_file = str(tmp_path / "ispec.json")
    code, _ = _run(["seq", "build", "index", "--m", "2", "--base", "BSigma2", "--out", spec_file])
    assert code == 0
    code, text = _run(["seq", "index-of", spec_file, "--n", "0", "--budget", "10000"])
    assert code == 0
    assert text.strip().isdigit()


def test_seq_ds():
    code, text = _run(["seq", "ds", "index-nonuniform", "--m", "2"])
    assert code == 0
    assert "theta4 Pi 2" in text


def test_selfcheck_passes():
    code, text = _run(["selfcheck", "--seed", "0"])
    assert code == 0
    assert "FAIL" not in text


def test_determinism_byte_identical():
    for argv in (
        ["classify", "E x0. x0=0"],
        ["eval", "--budget", "10", "0=0"],
        ["encode", "A x0. x0=x0"],
        ["seq", "ds", "index-uniform", "--m", "2"],
    ):
        _, a = _run(argv)
        _, b = _run(argv)
        assert a == b
