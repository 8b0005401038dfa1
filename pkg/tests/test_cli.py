import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktscolour import catalog
from ktscolour.cli import main
from ktscolour.core import Colouring, DesignError, verify_kts
from ktscolour.formats import FormatError, emit_colouring, emit_design, parse_colouring, parse_design


# -- formats -------------------------------------------------------------------

@pytest.mark.parametrize("name", catalog.names())
def test_design_round_trip(name):
    s = catalog.get(name)
    back = parse_design(emit_design(s))
    assert back.design == s.design
    assert back.groups == s.groups
    assert back.resolution == s.resolution
    assert back.colouring == s.colouring


def test_comments_and_blank_lines():
    text = "# a KTS(3)\n\nDESIGN v 3 k 3  # header\nBLOCKS\n0 1 2\nRESOLUTION\nCLASS 0\n"
    s = parse_design(text)
    assert s.design.b == 1 and verify_kts(s.design, s.resolution)


@pytest.mark.parametrize("text,line", [
    ("DESIGN v 3\nBLOCKS\n0 1 2\n", 1),
    ("DESIGN v 3 k 3\nBLOCKS\n0 1 x\n", 3),
    ("DESIGN v 3 k 3\nBLOCKS\n0 1 5\n", 3),
    ("DESIGN v 3 k 3\nBLOCKS\n0 1\n", 3),
    ("DESIGN v 3 k 3\nBLOCKS\n0 1 2\nRESOLUTION\nCLASS 4\n", 5),
    ("DESIGN v 3 k 3\nBLOCKS\n0 1 2\nRESOLUTION\nWHAT 0\n", 5),
    ("BLOCKS\n0 1 2\n", 1),
])
def test_parse_errors_have_positions(text, line):
    with pytest.raises(FormatError) as info:
        parse_design(text)
    assert info.value.line == line


def test_colouring_forms():
    assert parse_colouring("0 1 2 0", 4).colours == (0, 1, 2, 0)
    assert parse_colouring("1231", 4).colours == (0, 1, 2, 0)
    with pytest.raises(FormatError):
        parse_colouring("0123", 4)
    with pytest.raises(FormatError):
        parse_colouring("0 1 2", 4)
    with pytest.raises(FormatError):
        parse_colouring("0 1\n2 3")


@settings(max_examples=50)
@given(st.lists(st.integers(0, 12), min_size=2, max_size=40))
def test_colouring_round_trip(colours):
    col = Colouring(tuple(colours), max(colours) + 1)
    assert parse_colouring(emit_colouring(col), len(colours)).colours == col.colours


def test_format_error_is_design_error():
    assert issubclass(FormatError, DesignError)


# -- CLI -------------------------------------------------------------------------

def test_verify_tv_certificate(capsys):
    assert main(["verify", "--design", "tv33-1", "--colouring", "paper"]) == 0
    out = capsys.readouterr().out
    assert "colour_type: 8^3 9^1" in out and "result: ok" in out


def test_chromatic_kts9(capsys):
    assert main(["chromatic", "--design", "kts9"]) == 0
    out = capsys.readouterr().out
    assert "chromatic: 3" in out and "delta2: UNSAT" in out


def test_tripling_pipeline(tmp_path, capsys):
    out = tmp_path / "kts27.d"
    assert main(["construct", "tripling", "--input", "kts=kts9", "--input", "colouring=kts9-3x3",
                 "--out", str(out)]) == 0
    assert main(["verify", "--design", str(out), "--resolution", "--colouring", str(out)]) == 0
    assert "result: ok" in capsys.readouterr().out


def test_verify_rejects_non_weak_colouring(tmp_path):
    bad = tmp_path / "bad.col"
    bad.write_text(" ".join(["0"] * 9) + "\n")
    assert main(["verify", "--design", "kts9", "--colouring", str(bad)]) == 1


def test_verify_literal_digits():
    assert main(["verify", "--design", "kts9", "--colouring", "123123123"]) in (0, 1)


def test_verify_rainbow():
    assert main(["verify", "--design", "kts15", "--resolution", "--rainbow"]) == 0


def test_colour_unsat_and_sat(capsys):
    assert main(["colour", "--design", "kts9", "--delta", "2"]) == 1
    assert main(["colour", "--design", "kts9", "--delta", "3", "--type", "2^1 3^1 4^1"]) == 0
    assert "status: SAT" in capsys.readouterr().out


def test_colour_timeout():
    assert main(["colour", "--design", "tv33-3", "--delta", "3", "--budget", "0"]) in (1, 3)


def test_chromatic_timeout():
    assert main(["chromatic", "--design", "tv33-3", "--budget", "0"]) == 3


def test_resolve(tmp_path):
    out = tmp_path / "r.d"
    assert main(["resolve", "--design", "kts15", "--out", str(out)]) == 0
    s = parse_design(out.read_text())
    assert verify_kts(s.design, s.resolution)


def test_resolve_with_automorphism(tmp_path):
    cyc = "(" + ",".join(map(str, range(32))) + ")"
    assert main(["resolve", "--design", "rot33-59a", "--automorphism", cyc, "--out", str(tmp_path / "r")]) == 0


def test_catalog_list_and_emit(tmp_path, capsys):
    assert main(["catalog", "list"]) == 0
    assert "kts9: v=9" in capsys.readouterr().out
    out = tmp_path / "k.d"
    assert main(["catalog", "emit", "--name", "kts9", "--with-colouring", "kts9-3x3", "--out", str(out)]) == 0
    assert parse_design(out.read_text()).colouring == catalog.colouring("kts9-3x3")
    assert main(["catalog", "emit", "--name", "kts9", "--one-based"]) == 0


@pytest.mark.parametrize("argv", [
    [],
    ["verify"],
    ["catalog", "emit"],
    ["catalog", "emit", "--name", "nope"],
    ["verify", "--design", "no/such/file"],
    ["construct", "nope"],
    ["construct", "tripling"],
    ["construct", "rgdd_4_3_coloured", "--param", "c=0,1,2"],
    ["construct", "rgdd_4_3_coloured", "--param", "broken"],
    ["verify", "--design", "kts9", "--frame"],
])
def test_usage_errors(argv):
    assert main(argv) == 2


@pytest.mark.parametrize("argv", [
    ["construct", "td3_resolvable", "--param", "v=5"],
    ["construct", "rgdd_4_3_coloured", "--param", "c=0,2,4", "--param", "delta=5"],
    ["construct", "frame_8_4_coloured", "--param", "c=0,1,2,3", "--param", "delta=4"],
    ["construct", "kq_build", "--input", "q=q13"],
    ["construct", "kq_colour_2delta", "--input", "q=q13"],
    ["construct", "quadruple_to_4gdd", "--input", "q=q13"],
    ["construct", "sts_to_kts_pipeline", "--input", "q=q13", "--param", "delta=4"],
])
def test_construct_recipes(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path / "x.d")]) == 0
    assert parse_design((tmp_path / "x.d").read_text()).design.b > 0


def test_construct_frame_chain(tmp_path):
    frame = tmp_path / "f.d"
    assert main(["construct", "delete_point", "--input", "kts=kts9", "--out", str(frame)]) == 0
    assert main(["verify", "--design", str(frame), "--frame"]) == 0
    out = tmp_path / "r.d"
    assert main(["construct", "rainbow_frame", "--input", f"frame={frame}", "--out", str(out)]) == 0
    assert main(["verify", "--design", str(out), "--resolution", "--rainbow"]) == 0


def test_construct_fill_chain(tmp_path):
    gdd = tmp_path / "g.d"
    ing = tmp_path / "i.d"
    frame = tmp_path / "f.d"
    assert main(["construct", "frame_8_4_coloured", "--param", "c=0,0,0,0", "--param", "delta=4", "--out", str(ing)]) == 0
    assert main(["catalog", "emit", "--name", "gdd4x4", "--out", str(gdd)]) == 0
    assert main(["construct", "gdd_blowup", "--input", f"gdd={gdd}", "--input", f"ingredient={ing}",
                 "--param", "g=4", "--out", str(frame)]) == 0
    out = tmp_path / "k.d"
    assert main(["construct", "frame_fill_one_point", "--input", f"frame={frame}", "--input", "fill=tv33-1",
                 "--param", "inf_colour=0", "--out", str(out)]) == 0
    s = parse_design(out.read_text())
    assert s.design.v == 129 and verify_kts(s.design, s.resolution)


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "ktscolour", "chromatic", "--design", "kts9"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and "chromatic: 3" in done.stdout
