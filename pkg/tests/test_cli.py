import re
import subprocess
import sys

import pytest

from triplane.cli import main
from triplane.diagram import format_triplane, parse_triplane
from triplane.families import p, projective_plus, sphere

HOPF_FORGERY = "triplane v1\nb=2\nD1: cap1 cap3 x2+ x2+\nD2: cap1 cap3\nD3: cap1 cap3\n"
RP2_CH = "chdiagram v1\nlink: cap1 cap3 x2+ mark2p cup3 cup1\n"


@pytest.fixture
def put(tmp_path):
    def write(name, text):
        f = tmp_path / name
        f.write_text(text)
        return str(f)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_sphere(capsys, put):
    code, out, _ = run(capsys, "validate", put("u.tp", format_triplane(sphere())))
    assert code == 0
    assert out.splitlines()[-1] == "Certified (1,1,1)"


def test_validate_hopf_forgery(capsys, put):
    code, out, _ = run(capsys, "validate", put("h.tp", HOPF_FORGERY))
    assert code == 1
    assert "nonzero linking number" in out and "obstruction=" in out


def test_validate_unknown_on_starved_budget(capsys, put):
    # closures are unlinks, but one search state is not enough to show it
    D = "triplane v1\nb=2\nD1: cap1 cap3 x2+ x1- x1+ x2-\nD2: cap1 cap3\nD3: cap1 cap3\n"
    code, out, _ = run(capsys, "validate", put("m.tp", D), "--budget", "1")
    assert code == 3
    assert out.splitlines()[-1].startswith("Unknown")
    assert run(capsys, "validate", put("m.tp", D))[0] == 0


def test_validate_ch(capsys, put):
    code, out, _ = run(capsys, "validate", put("r.ch", RP2_CH))
    assert code == 0
    assert "chi=1" in out


def test_parse_errors(capsys, put):
    assert run(capsys, "validate", put("bad.tp", "triplane v1\nb=1\n"))[0] == 2
    assert run(capsys, "validate", put("bad.xx", "hello\n"))[0] == 2
    assert run(capsys, "invariants", "/nonexistent/file")[0] == 2
    code, _, err = run(capsys, "generate", "klein")
    assert code == 2 and "unknown family" in err


def test_invariants_line(capsys, put):
    code, out, _ = run(capsys, "invariants", put("p.tp", format_triplane(projective_plus())))
    assert code == 0
    assert out.startswith("b=2 c=1 chi=1 e=2 orientable=false concentrated=true")
    kv = dict(tok.split("=") for tok in out.split())
    assert set(kv) >= {"b", "c", "chi", "e", "orientable", "concentrated"}


def test_invariants_uncertified_prints_question_mark(capsys, put):
    code, out, _ = run(capsys, "invariants", put("h.tp", HOPF_FORGERY))
    assert code == 1 and "chi=?" in out


def test_generate_and_simplify(capsys, put, tmp_path):
    out_file = tmp_path / "t.tp"
    assert run(capsys, "generate", "torus:1", "-o", str(out_file))[0] == 0
    D = parse_triplane(out_file.read_text())
    assert D.b == 3 and D.c == 0
    code, out, _ = run(capsys, "invariants", str(out_file))
    assert out.startswith("b=3 c=0 chi=0 e=0 orientable=true")
    code, out, _ = run(capsys, "generate", "p:1,1")
    assert parse_triplane(out) == p(1, 1)
    code, out, _ = run(capsys, "simplify", str(out_file), "--budget", "50")
    assert code == 0 and "# c 0 -> 0" in out


def test_convert(capsys, put, tmp_path):
    code, out, _ = run(capsys, "convert", put("r.ch", RP2_CH))
    assert code == 0
    D = parse_triplane("\n".join(ln for ln in out.splitlines() if not ln.startswith("#")))
    assert D.b == 2 and D.c == 1
    assert run(capsys, "convert", put("u.tp", format_triplane(sphere())))[0] == 2
    bad = put("bad.ch", "chdiagram v1\nlink: cap1 cap3 x2+ x2+ mark2t cup3 cup1\n")
    assert run(capsys, "convert", bad)[0] == 1
    nonbridge = put("nb.ch", "chdiagram v1\nlink: cap1 cup1 cap1 mark1t cup1\n")
    assert run(capsys, "convert", nonbridge)[0] == 2


def test_census_single_bridge(capsys):
    code, out, _ = run(capsys, "census", "--bridge", "2")
    assert code == 0
    assert out.strip() == "b=2 diagrams=8 orientable=8 nonorientable=0"
    assert run(capsys, "census", "--bridge", "9")[0] == 2


def test_render_is_deterministic(capsys, put, tmp_path):
    f = put("p.tp", format_triplane(projective_plus()))
    run(capsys, "render", f, "-o", str(tmp_path / "a.svg"))
    run(capsys, "render", f, "-o", str(tmp_path / "b.svg"))
    a = (tmp_path / "a.svg").read_bytes()
    assert a == (tmp_path / "b.svg").read_bytes()
    assert a.startswith(b"<svg") or a.startswith(b"<?xml")
    code, out, _ = run(capsys, "render", put("r.ch", RP2_CH))
    assert code == 0 and "</svg>" in out


def test_table_reports_missing_files(capsys, tmp_path):
    (tmp_path / "table.txt").write_text(
        "label=0_1 file=0_1.ch type=S2 bridge=1 crossings=0 concentrated=true euler=0\n"
        "label=gone file=missing.ch type=S2 bridge=1 crossings=0 euler=0\n"
    )
    (tmp_path / "0_1.ch").write_text("chdiagram v1\nlink: cap1 cup1\n")
    code, out, _ = run(capsys, "table", "--corpus", str(tmp_path))
    assert code == 1
    lines = out.splitlines()
    assert re.match(r"0_1\s+pass", lines[0])
    assert re.match(r"gone\s+fail\s+no transcription", lines[1])
    assert lines[-1] == "summary pass=1 soft=0 fail=1 total=2"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "triplane.cli", "--version"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("triplane")
