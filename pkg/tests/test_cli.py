import json

import pytest
from hypothesis import given, strategies as st

from yoneda.cli import ParseError, main, parse_presentation, run_command
from yoneda.field import QQ, PrimeField
from yoneda.freealg import Poly, make_presentation


@st.composite
def presentations(draw):
    g = draw(st.integers(1, 3))
    gens = tuple("x%d" % i if i else "y" for i in range(g))
    field = draw(st.sampled_from([QQ, PrimeField(5)]))
    rels = []
    for _ in range(draw(st.integers(0, 3))):
        m = draw(st.integers(2, 3))
        terms = draw(st.dictionaries(
            st.lists(st.integers(0, g - 1), min_size=m, max_size=m).map(tuple),
            st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(
                lambda c: c and (field is QQ or c.denominator % 5)),
            min_size=1, max_size=3))
        rels.append(Poly(terms, gens))
    return make_presentation(gens, rels, field)


@given(presentations())
def test_print_parse_round_trip(pres):
    text = pres.to_text()
    again = parse_presentation(text)
    assert again.to_text() == text
    assert [r.terms for r in again.relations] == [r.terms for r in pres.relations]


@pytest.mark.parametrize("text,line,col,msg", [
    ("gen x y\nrel x*y - z\n", 2, 11, "unknown generator"),
    ("gen x y\nrel x*y + x\n", 2, 5, "inhomogeneous"),
    ("field R\ngen x\n", 1, 7, "unsupported field"),
    ("gen x\nrel x*x ^ 2\n", 2, 9, "unexpected character"),
    ("rel x*x\n", 1, 1, "before the generator"),
    ("gen x\nfoo x\n", 2, 1, "unknown keyword"),
    ("gen x\nrel x*x +\n", 2, 10, "expected a term"),
])
def test_parse_errors_carry_positions(text, line, col, msg):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert msg in str(exc.value)


def test_comments_and_rationals():
    pres = parse_presentation("# a comment\nfield Q\ngen x y\nrel 2*y*x - 1/3*x*y  # trailing\n")
    assert pres.to_text() == "field Q\ngen x y\nrel y*x - 1/6*x*y\n"


def test_json_report_shape():
    code, rep, _ = run_command(["resolve", "--preset", "A1", "--max-homological", "4", "--json"])
    assert code == 0
    assert list(rep) == ["command", "params", "certificates", "payload"]
    assert rep["certificates"] == {"max_degree": 8, "max_homological": 4, "window": None}
    assert rep["payload"]["betti"][2] == {"d": 2, "shifts": [-3, -3, -4]}


def test_k2_exit_codes(capsys):
    assert main(["k2", "--preset", "A2", "--max-homological", "4", "--json"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["payload"]["witness"] == {"d": 3, "rows": [0]}
    assert main(["k2", "--preset", "A1", "--max-homological", "4"]) == 0


def test_usage_errors_exit_2(capsys):
    assert main(["resolve"]) == 2
    assert main(["resolve", "--preset", "Z9"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["ainf", "--preset", "B0", "--eval", "m3(alpha0,beta0)"]) == 2
    assert main(["ainf", "--preset", "B0"]) == 2
    capsys.readouterr()


def test_input_file(tmp_path, capsys):
    p = tmp_path / "pres.txt"
    p.write_text("field F3\ngen x y\nrel x*x\nrel y*y\n")
    assert main(["hilbert", "--input", str(p), "--max-degree", "4"]) == 0
    assert capsys.readouterr().out.strip() == "dims: 1 2 2 2 2"
    p.write_text("gen x y\nrel y*x\nrel x*y - x*x\n")
    assert main(["hilbert", "--input", str(p)]) == 2
    assert "overlap" in capsys.readouterr().err


def test_ainf_eval_rational_output():
    code, rep, text = run_command(["ainf", "--preset", "B0", "--eval", "m3(alpha0,beta0,gamma0)",
                                   "--json"])
    assert code == 0
    assert rep["payload"]["value"] == [{"basis": "e2_1", "coeff": "-1"}]
    assert rep["certificates"]["window"] == 4


def test_ainf_table_a1():
    code, rep, _ = run_command(["ainf", "--preset", "A1", "--table", "--window", "5",
                                "--max-arity", "4", "--json"])
    got = {(e["k"], tuple(e["args"])) for e in rep["payload"]["table"]}
    assert got == {(4, ("Y", "Y", "Z", "X")), (3, ("Y", "Y", "W")), (3, ("Y", "Y", "R1_2")),
                   (3, ("Z", "X", "X")), (2, ("R1_3", "X"))}


def test_output_is_deterministic(capsys):
    argv = ["stasheff", "--preset", "B0", "--window", "5", "--max-arity", "4", "--json"]
    main(argv)
    a = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == a


def test_preset_listing():
    code, rep, text = run_command(["preset", "--list"])
    assert "A1" in rep["payload"]["presets"]
    code, rep, text = run_command(["preset", "--preset", "B0"])
    assert text.startswith("field Q\ngen a0 b0 c0")
    assert rep["payload"]["explicit_resolution"]


def test_basis_words():
    code, rep, _ = run_command(["basis", "--preset", "koszulmono2", "--max-degree", "3"])
    assert rep["payload"]["degrees"][3]["words"] == ["x*y*x", "y*x*y"]
